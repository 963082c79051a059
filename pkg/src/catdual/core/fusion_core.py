"""
Fusion Category Data

Spherical fusion category data: simple objects, the fusion ring, F-symbols
and quantum dimensions, plus constructors for the built-in categories and a
brute-force pentagon checker.

F-symbol convention: the entry keyed (a, b, c, d, mu, nu, i, j, k, l) is the
overlap of the left-associated splitting tree ((ab)_mu c)_d (vertices i, l)
with the right-associated tree (a (bc)_nu)_d (vertices j, k), so that
``|right_nu> = sum_mu F[mu, nu] |left_mu>``. Splitting indices satisfy
i < N^mu_ab, j < N^nu_bc, k < N^d_{a nu}, l < N^d_{mu c}.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Tuple

import numpy as np

from .checks import CheckReport
from .errors import LabelNotFoundError, NotRealizableError, SplittingIndexError, ValidationError
from .graded import swap_sign
from .parallel import parallel_map
from .quantum_group import is_triad, qnumber, recoupling, spin_label

logger = logging.getLogger(__name__)

Label = Hashable
FKey = Tuple[Any, Any, Any, Any, Any, Any, int, int, int, int]

DEFAULT_TOL = 1e-10


@dataclass
class FusionRing:
    """Fusion multiplicities N^c_ab stored as {(a, b): {c: N}}."""
    table: Dict[Tuple[Label, Label], Dict[Label, int]]

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        return self.table.get((a, b), {})

    def multiplicity(self, a: Label, b: Label, c: Label) -> int:
        return self.table.get((a, b), {}).get(c, 0)


@dataclass
class FSymbolTensor:
    """Sparse map from full F-symbol keys to complex amplitudes."""
    entries: Dict[FKey, complex] = field(default_factory=dict)

    def get(self, key: FKey) -> complex:
        return self.entries.get(key, 0.0)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class FusionCategory:
    """A (possibly truncated) spherical fusion category."""
    name: str
    labels: List[Label]
    unit: Label
    ring: FusionRing
    f: FSymbolTensor
    qdim: Dict[Label, float]
    gauge: str = "as listed"
    weights: Optional[Dict[Label, int]] = None
    cutoff: Optional[int] = None
    params: Dict[str, float] = field(default_factory=dict)
    _blocks: Dict[Tuple, Tuple[np.ndarray, list, list]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        self._label_set = set(self.labels)
        if self.unit not in self._label_set:
            raise ValidationError(f"unit {self.unit!r} is not a label of {self.name}")
        for key in self.f.entries:
            if not self._admissible(key):
                raise ValidationError(f"F-symbol key {key} is not admissible in {self.name}")

    # -- fusion ring -------------------------------------------------------

    def require(self, *labels: Label) -> None:
        for x in labels:
            if x not in self._label_set:
                raise LabelNotFoundError(f"label {x!r} not found in category {self.name}")

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        self.require(a, b)
        return dict(self.ring.fuse(a, b))

    def N(self, a: Label, b: Label, c: Label) -> int:
        return self.ring.multiplicity(a, b, c)

    def dual(self, a: Label) -> Label:
        self.require(a)
        for b in self.labels:
            if self.N(a, b, self.unit) == 1:
                return b
        raise ValidationError(f"{a!r} has no dual in {self.name}")

    def is_invertible(self, a: Label) -> bool:
        self.require(a)
        return abs(self.qdim[a] - 1.0) < 1e-12 and self.ring.fuse(a, self.dual(a)) == {self.unit: 1}

    def within_cutoff(self, *labels: Label) -> bool:
        if self.cutoff is None or self.weights is None:
            return True
        return sum(self.weights[x] for x in labels) <= self.cutoff

    # -- F-symbols ---------------------------------------------------------

    def _admissible(self, key: FKey) -> bool:
        a, b, c, d, mu, nu, i, j, k, l = key
        dims = (self.N(a, b, mu), self.N(b, c, nu), self.N(a, nu, d), self.N(mu, c, d))
        return all(n > 0 for n in dims) and i < dims[0] and j < dims[1] and k < dims[2] and l < dims[3]

    def f_symbol(self, a, b, c, d, mu, nu, i=0, j=0, k=0, l=0) -> complex:
        self.require(a, b, c, d, mu, nu)
        dims = (self.N(a, b, mu), self.N(b, c, nu), self.N(a, nu, d), self.N(mu, c, d))
        if any(n == 0 for n in dims):
            return 0.0
        for idx, n, what in zip((i, j, k, l), dims, ("i", "j", "k", "l")):
            if not 0 <= idx < n:
                raise SplittingIndexError(f"splitting index {what}={idx} out of range [0, {n})")
        return self.f.get((a, b, c, d, mu, nu, i, j, k, l))

    def f_block(self, a, b, c, d) -> Tuple[np.ndarray, list, list]:
        """F^{abc}_d as a matrix with rows (mu, i, l) and columns (nu, j, k)."""
        key = (a, b, c, d)
        if key not in self._blocks:
            rows = [
                (mu, i, l)
                for mu, n_ab in self.ring.fuse(a, b).items()
                for i in range(n_ab)
                for l in range(self.N(mu, c, d))
            ]
            cols = [
                (nu, j, k)
                for nu, n_bc in self.ring.fuse(b, c).items()
                for j in range(n_bc)
                for k in range(self.N(a, nu, d))
            ]
            mat = np.zeros((len(rows), len(cols)), dtype=complex)
            for r, (mu, i, l) in enumerate(rows):
                for s, (nu, j, k) in enumerate(cols):
                    mat[r, s] = self.f.get((a, b, c, d, mu, nu, i, j, k, l))
            self._blocks[key] = (mat, rows, cols)
        return self._blocks[key]

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": 1,
            "name": self.name,
            "labels": [_encode(x) for x in self.labels],
            "unit": _encode(self.unit),
            "fusion": [
                [_encode(a), _encode(b), _encode(c), n]
                for (a, b), out in self.ring.table.items()
                for c, n in out.items()
            ],
            "f_symbols": [
                [_encode(x) for x in key[:6]] + list(key[6:]) + [float(np.real(v)), float(np.imag(v))]
                for key, v in self.f.entries.items()
            ],
            "qdim": [[_encode(x), float(d)] for x, d in self.qdim.items()],
            "gauge": self.gauge,
            "weights": None if self.weights is None else [[_encode(x), w] for x, w in self.weights.items()],
            "cutoff": self.cutoff,
            "params": dict(self.params),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FusionCategory":
        table: Dict[Tuple[Label, Label], Dict[Label, int]] = {}
        for a, b, c, n in data["fusion"]:
            table.setdefault((_decode(a), _decode(b)), {})[_decode(c)] = int(n)
        entries = {}
        for row in data["f_symbols"]:
            key = tuple(_decode(x) for x in row[:6]) + tuple(int(x) for x in row[6:10])
            entries[key] = complex(row[10], row[11])
        weights = data.get("weights")
        return cls(
            name=data.get("name", "custom"),
            labels=[_decode(x) for x in data["labels"]],
            unit=_decode(data["unit"]),
            ring=FusionRing(table),
            f=FSymbolTensor(entries),
            qdim={_decode(x): float(d) for x, d in data["qdim"]},
            gauge=data.get("gauge", "as listed"),
            weights=None if weights is None else {_decode(x): int(w) for x, w in weights},
            cutoff=data.get("cutoff"),
            params=dict(data.get("params", {})),
        )


def _encode(x: Label) -> Any:
    return [_encode(y) for y in x] if isinstance(x, tuple) else x


def _decode(x: Any) -> Label:
    return tuple(_decode(y) for y in x) if isinstance(x, list) else x


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def fuse(cat: FusionCategory, a: Label, b: Label) -> Dict[Label, int]:
    """Nonzero fusion multiplicities {c: N^c_ab}."""
    return {c: n for c, n in cat.fuse(a, b).items() if n > 0}


def f_symbol(cat: FusionCategory, a, b, c, d, mu, nu, i=0, j=0, k=0, l=0) -> complex:
    return cat.f_symbol(a, b, c, d, mu, nu, i, j, k, l)


def pentagon_residual(
    first_labels: Iterable[Label],
    objects: List[Label],
    act: Callable[[Label, Label], Dict[Label, int]],
    left: Callable[..., complex],
    base_fuse: Callable[[Label, Label], Dict[Label, int]],
    base_f: Callable[..., complex],
    within: Optional[Callable[..., bool]] = None,
    parity: Optional[Callable[[Label, Label, Label, int], int]] = None,
    base_parity: Optional[Callable[[Label, Label, Label, int], int]] = None,
    collect: Optional[List[complex]] = None,
) -> Tuple[float, int, Optional[tuple], List[str]]:
    """Contract both sides of the (mixed) pentagon over all label tuples.

    ``left(A, a, b, B, C, g, i, j, k, l)`` is the associator of the leftmost
    slot with key order of a module associator: i in V^C_{A a},
    j in N^g_{ab}, k in V^B_{A g}, l in V^B_{C b}. For a fusion category the
    leftmost slot is an object and ``left`` is the F-symbol itself.

    ``parity(A, a, C, i)`` and ``base_parity(b, c, l, dl)`` grade the module
    and base vertices. On the left-hand side the base vertex of b ⊗ c -> l
    is moved past i, which costs swap_sign of their parities.

    Returns (max residual, number of compared entries, worst tuple, problems).
    When ``collect`` is a list, every signed difference lhs - rhs is appended
    to it in a deterministic order.
    """
    outer = [(A, a) for A in first_labels for a in objects]

    def run(pair):
        A, a = pair
        worst, count, where, problems = 0.0, 0, None, []
        diffs: List[complex] = []
        for b, c in itertools.product(objects, repeat=2):
            if within is not None and not within(A, a, b, c):
                continue
            src: Dict[Label, list] = {}
            for C, nC in act(A, a).items():
                for D, nD in act(C, b).items():
                    for B, nB in act(D, c).items():
                        src.setdefault(B, []).extend(
                            itertools.product([C], range(nC), [D], range(nD), range(nB))
                        )
            tgt: Dict[Label, list] = {}
            for l, nl in base_fuse(b, c).items():
                for k, nk in base_fuse(a, l).items():
                    for B, nB in act(A, k).items():
                        tgt.setdefault(B, []).extend(
                            itertools.product([l], range(nl), [k], range(nk), range(nB))
                        )
            for B in set(src) | set(tgt):
                S, T = src.get(B, []), tgt.get(B, [])
                if len(S) != len(T):
                    problems.append(f"dimension mismatch {len(S)} vs {len(T)} at {(A, a, b, c, B)}")
                    worst = max(worst, 1.0)
                    continue
                ab = base_fuse(a, b)
                for (C, i, D, j, m), (l, dl, k, zt, eta) in itertools.product(S, T):
                    p_i = parity(A, a, C, i) if parity else 0
                    p_dl = base_parity(b, c, l, dl) if base_parity else 0
                    lhs = 0.0
                    for eps in range(act(C, l).get(B, 0)):
                        lhs += swap_sign(p_i, p_dl) * left(C, b, c, B, D, l, j, dl, eps, m) * \
                            left(A, a, l, B, C, k, i, zt, eta, eps)
                    rhs = 0.0
                    for h, nh in ab.items():
                        n_lam = act(A, h).get(D, 0)
                        n_mu = base_fuse(h, c).get(k, 0)
                        if n_lam == 0 or n_mu == 0:
                            continue
                        for kap in range(nh):
                            for lam in range(n_lam):
                                x = left(A, a, b, D, C, h, i, kap, lam, j)
                                if x == 0:
                                    continue
                                for mu in range(n_mu):
                                    rhs += x * left(A, h, c, B, D, k, lam, mu, eta, m) * \
                                        base_f(a, b, c, k, h, l, kap, dl, zt, mu)
                    res = abs(lhs - rhs)
                    if collect is not None:
                        diffs.append(lhs - rhs)
                    count += 1
                    if res > worst:
                        worst, where = res, (A, a, b, c, B, (C, i, D, j, m), (l, dl, k, zt, eta))
        return worst, count, where, problems, diffs

    results = parallel_map(run, outer)
    worst, count, where, problems = 0.0, 0, None, []
    for w, n, loc, probs, diffs in results:
        if collect is not None:
            collect.extend(diffs)
        count += n
        problems.extend(probs)
        if w > worst:
            worst, where = w, loc
    return worst, count, where, problems


def check_pentagon(cat: FusionCategory, tol: float = DEFAULT_TOL) -> CheckReport:
    """Brute-force pentagon check over all admissible label tuples."""
    entries = cat.f.entries

    def left(A, a, b, B, C, g, i, j, k, l):
        return entries.get((A, a, b, B, C, g, i, j, k, l), 0.0)

    def base_f(a, b, c, d, mu, nu, i, j, k, l):
        return entries.get((a, b, c, d, mu, nu, i, j, k, l), 0.0)

    worst, count, where, problems = pentagon_residual(
        cat.labels, cat.labels, cat.ring.fuse, left, cat.ring.fuse, base_f,
        within=cat.within_cutoff,
    )
    report = CheckReport.from_residual(
        f"pentagon[{cat.name}]", worst, tol, checked=count, errors=problems,
        details={"worst": repr(where), "gauge": cat.gauge, "cutoff": cat.cutoff},
    )
    if problems:
        report.passed = False
    logger.info(report.summary_line())
    return report


def check_fusion_ring(cat: FusionCategory) -> CheckReport:
    """Unit law and associativity of total multiplicities."""
    errors = []
    u = cat.unit
    for x in cat.labels:
        if cat.ring.fuse(u, x) != {x: 1} or cat.ring.fuse(x, u) != {x: 1}:
            errors.append(f"unit does not act trivially on {x!r}")
    count = 0
    for a, b, c in itertools.product(cat.labels, repeat=3):
        if not cat.within_cutoff(a, b, c):
            continue
        for d in cat.labels:
            lhs = sum(n * cat.N(m, c, d) for m, n in cat.ring.fuse(a, b).items())
            rhs = sum(n * cat.N(a, v, d) for v, n in cat.ring.fuse(b, c).items())
            count += 1
            if lhs != rhs:
                errors.append(f"associativity fails at {(a, b, c, d)}: {lhs} != {rhs}")
    return CheckReport(name=f"fusion_ring[{cat.name}]", passed=not errors,
                       max_residual=float(len(errors)), tol=0.0, checked=count, errors=errors)


def check_qdims(cat: FusionCategory, tol: float = 1e-12) -> CheckReport:
    """d_a d_b = sum_c N^c_ab d_c and d_1 = 1."""
    worst = abs(cat.qdim[cat.unit] - 1.0)
    count = 0
    for a, b in itertools.product(cat.labels, repeat=2):
        if not cat.within_cutoff(a, b):
            continue
        rhs = sum(n * cat.qdim[c] for c, n in cat.ring.fuse(a, b).items())
        worst = max(worst, abs(cat.qdim[a] * cat.qdim[b] - rhs))
        count += 1
    return CheckReport.from_residual(f"qdim[{cat.name}]", worst, tol, checked=count)


def check_f_blocks(cat: FusionCategory, tol: float = DEFAULT_TOL) -> CheckReport:
    """Every F^{abc}_d block must be square and invertible."""
    errors = []
    count = 0
    worst_cond = 1.0
    for a, b, c, d in itertools.product(cat.labels, repeat=4):
        if not cat.within_cutoff(a, b, c, d):
            continue
        mat, rows, cols = cat.f_block(a, b, c, d)
        if not rows and not cols:
            continue
        count += 1
        if len(rows) != len(cols):
            errors.append(f"F^{{{a}{b}{c}}}_{d} is {len(rows)}x{len(cols)}")
            continue
        sv = np.linalg.svd(mat, compute_uv=False)
        if sv.min() < tol:
            errors.append(f"F^{{{a}{b}{c}}}_{d} is singular")
        else:
            worst_cond = max(worst_cond, sv.max() / sv.min())
    return CheckReport(name=f"f_blocks[{cat.name}]", passed=not errors, max_residual=0.0,
                       tol=tol, checked=count, errors=errors, details={"max_condition": worst_cond})


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

GroupTable = Dict[Tuple[Label, Label], Label]


def group_table(name: str, odd_label: str = "m") -> GroupTable:
    """Multiplication table for Z2 (labels 1, m), Z_n (0..n-1) or S3."""
    key = name.upper()
    if key == "Z2":
        el = ["1", odd_label]
        return {(x, y): el[(el.index(x) + el.index(y)) % 2] for x in el for y in el}
    if key.startswith("Z") and key[1:].isdigit():
        n = int(key[1:])
        return {(str(x), str(y)): str((x + y) % n) for x in range(n) for y in range(n)}
    if key == "S3":
        perms = list(itertools.permutations(range(3)))
        names = {p: "".join(str(v) for v in p) for p in perms}
        return {
            (names[p], names[r]): names[tuple(p[r[x]] for x in range(3))]
            for p in perms for r in perms
        }
    raise ValidationError(f"unknown group {name!r}; expected Z2, Z<n> or S3")


def z2_cocycle(odd_label: str = "m", sign: int = -1) -> Dict[Tuple[Label, Label, Label], complex]:
    """The Z2 3-cocycle with omega(m, m, m) = sign and all other values 1."""
    return {(odd_label, odd_label, odd_label): complex(sign)}


def _group_elements(table: GroupTable) -> Tuple[List[Label], Label]:
    elements: List[Label] = []
    for (x, y) in table:
        for v in (x, y):
            if v not in elements:
                elements.append(v)
    for x, y in itertools.product(elements, repeat=2):
        if (x, y) not in table or table[(x, y)] not in elements:
            raise ValidationError(f"group table is not closed at {(x, y)}")
    units = [e for e in elements if all(table[(e, g)] == g and table[(g, e)] == g for g in elements)]
    if len(units) != 1:
        raise ValidationError("group table has no unique identity")
    unit = units[0]
    for g in elements:
        if not any(table[(g, h)] == unit for h in elements):
            raise ValidationError(f"element {g!r} has no inverse")
    for x, y, z in itertools.product(elements, repeat=3):
        if table[(table[(x, y)], z)] != table[(x, table[(y, z)])]:
            raise ValidationError(f"group table is not associative at {(x, y, z)}")
    return elements, unit


def vec_g(
    table: GroupTable,
    cocycle: Optional[Dict[Tuple[Label, Label, Label], complex]] = None,
    name: str = "vec_g",
    tol: float = DEFAULT_TOL,
) -> FusionCategory:
    """Vec_G^omega: one simple per group element, F-symbols equal to omega."""
    elements, unit = _group_elements(table)
    cocycle = cocycle or {}
    ring = FusionRing({(x, y): {table[(x, y)]: 1} for x in elements for y in elements})
    entries = {}
    for x, y, z in itertools.product(elements, repeat=3):
        w = complex(cocycle.get((x, y, z), 1.0))
        if abs(abs(w) - 1.0) > tol:
            raise ValidationError(f"cocycle value at {(x, y, z)} is not unit modulus")
        entries[(x, y, z, table[(table[(x, y)], z)], table[(x, y)], table[(y, z)], 0, 0, 0, 0)] = w
    cat = FusionCategory(
        name=name, labels=elements, unit=unit, ring=ring, f=FSymbolTensor(entries),
        qdim={g: 1.0 for g in elements},
        gauge="F equals the cocycle" if cocycle else "trivial cocycle",
    )
    if cocycle:
        report = check_pentagon(cat, tol)
        if not report.passed:
            raise ValidationError(
                f"cocycle data fails the 3-cocycle condition (residual {report.max_residual:.3e})"
            )
    logger.debug(f"🔧 built {name} with {len(elements)} objects")
    return cat


def vec_z2(cocycle_sign: int = 1, odd_label: str = "m") -> FusionCategory:
    cocycle = z2_cocycle(odd_label, cocycle_sign) if cocycle_sign == -1 else None
    name = "vec_z2" if cocycle is None else "vec_z2_omega"
    return vec_g(group_table("Z2", odd_label), cocycle, name=name)


def ising() -> FusionCategory:
    """Ising category with objects 1, psi, sigma."""
    one, psi, sig = "1", "psi", "sigma"
    labels = [one, psi, sig]
    table = {
        (one, one): {one: 1}, (one, psi): {psi: 1}, (one, sig): {sig: 1},
        (psi, one): {psi: 1}, (psi, psi): {one: 1}, (psi, sig): {sig: 1},
        (sig, one): {sig: 1}, (sig, psi): {sig: 1}, (sig, sig): {one: 1, psi: 1},
    }
    ring = FusionRing(table)
    r2 = 1.0 / np.sqrt(2.0)
    entries = {}
    for a, b, c in itertools.product(labels, repeat=3):
        for mu in ring.fuse(a, b):
            for d in ring.fuse(mu, c):
                for nu in ring.fuse(b, c):
                    if ring.multiplicity(a, nu, d) == 0:
                        continue
                    value = 1.0
                    if (a, b, c, d) == (sig, sig, sig, sig):
                        value = -r2 if (mu, nu) == (psi, psi) else r2
                    elif (a, b, c, d) in ((sig, psi, sig, psi), (psi, sig, psi, sig)):
                        value = -1.0
                    entries[(a, b, c, d, mu, nu, 0, 0, 0, 0)] = complex(value)
    return FusionCategory(
        name="ising", labels=labels, unit=one, ring=ring, f=FSymbolTensor(entries),
        qdim={one: 1.0, psi: 1.0, sig: float(np.sqrt(2.0))},
        gauge="F^{sss}_s = H/sqrt2, F^{s psi s}_psi = F^{psi s psi}_s = -1, others 1",
    )


def deligne_product(op_cat: FusionCategory, cat: FusionCategory, name: Optional[str] = None) -> FusionCategory:
    """op_cat^op (x) cat with (a1,a2)(x)(b1,b2) = (b1 a1, a2 b2)."""
    labels = [(x, y) for x in op_cat.labels for y in cat.labels]
    table: Dict[Tuple[Label, Label], Dict[Label, int]] = {}
    for (a1, a2), (b1, b2) in itertools.product(labels, repeat=2):
        out = {}
        for c1, n1 in op_cat.ring.fuse(b1, a1).items():
            for c2, n2 in cat.ring.fuse(a2, b2).items():
                out[(c1, c2)] = n1 * n2
        table[((a1, a2), (b1, b2))] = out
    ring = FusionRing(table)

    entries = {}
    for a, b, c in itertools.product(labels, repeat=3):
        (a1, a2), (b1, b2), (c1, c2) = a, b, c
        for d1 in {x for m in op_cat.ring.fuse(b1, a1) for x in op_cat.ring.fuse(c1, m)}:
            inv1, rows1, cols1 = _inverse_block(op_cat, c1, b1, a1, d1)
            for d2 in {x for m in cat.ring.fuse(a2, b2) for x in cat.ring.fuse(m, c2)}:
                m2, rows2, cols2 = cat.f_block(a2, b2, c2, d2)
                for r1, (e1, i1, l1) in enumerate(cols1):
                    for s1, (f1, j1, k1) in enumerate(rows1):
                        v1 = inv1[r1, s1]
                        if abs(v1) < 1e-15:
                            continue
                        for r2, (e2, i2, l2) in enumerate(rows2):
                            for s2, (f2, j2, k2) in enumerate(cols2):
                                v2 = m2[r2, s2]
                                if abs(v2) < 1e-15:
                                    continue
                                mu, nu = (e1, e2), (f1, f2)
                                key = (
                                    a, b, c, (d1, d2), mu, nu,
                                    _pair_index(i1, i2, cat.N(a2, b2, e2)),
                                    _pair_index(j1, j2, cat.N(b2, c2, f2)),
                                    _pair_index(k1, k2, cat.N(a2, f2, d2)),
                                    _pair_index(l1, l2, cat.N(e2, c2, d2)),
                                )
                                entries[key] = v1 * v2
    qdim = {(x, y): op_cat.qdim[x] * cat.qdim[y] for x, y in labels}
    return FusionCategory(
        name=name or f"{op_cat.name}_op_x_{cat.name}", labels=labels,
        unit=(op_cat.unit, cat.unit), ring=ring, f=FSymbolTensor(entries), qdim=qdim,
        gauge=f"inverse-transposed {op_cat.name} F times {cat.name} F",
    )


def _pair_index(i1: int, i2: int, n2: int) -> int:
    return i1 * n2 + i2


def _inverse_block(cat: FusionCategory, a, b, c, d) -> Tuple[np.ndarray, list, list]:
    """Inverse of F^{abc}_d; rows of the result follow the block's columns."""
    mat, rows, cols = cat.f_block(a, b, c, d)
    if mat.size == 0:
        return mat, rows, cols
    return np.linalg.inv(mat), rows, cols


def ising_op_x_ising() -> FusionCategory:
    return deligne_product(ising(), ising(), name="ising_op_x_ising")


def rep_uq_sl2(q: float = 1.0, jmax: float = 3.0) -> FusionCategory:
    """Rep(U_q(sl2)) truncated to spins j <= jmax, real q > 0.

    F-symbols are q-Racah recoupling coefficients; labels are "0", "1/2",
    "1", ... and ``weights`` carry doubled spins so that pentagon checks can
    restrict to tuples whose total spin fits under the cutoff.
    """
    if not np.isreal(q) or q <= 0:
        raise ValidationError(f"q must be real and positive, got {q!r}")
    two_max = int(round(2 * jmax))
    if abs(two_max - 2 * jmax) > 1e-12 or jmax < 1:
        raise ValidationError(f"jmax must be a half-integer >= 1, got {jmax!r}")
    q = float(q)
    spins = list(range(two_max + 1))
    lab = {s: spin_label(s) for s in spins}
    table = {}
    for a, b in itertools.product(spins, repeat=2):
        table[(lab[a], lab[b])] = {
            lab[c]: 1 for c in range(abs(a - b), min(a + b, two_max) + 1, 2)
        }
    ring = FusionRing(table)

    entries = {}
    for a, b, c in itertools.product(spins, repeat=3):
        for e in range(abs(a - b), min(a + b, two_max) + 1, 2):
            for d in range(abs(e - c), min(e + c, two_max) + 1, 2):
                for f in range(abs(b - c), min(b + c, two_max) + 1, 2):
                    if not is_triad(a, f, d):
                        continue
                    value = recoupling(a, b, c, d, e, f, q)
                    entries[(lab[a], lab[b], lab[c], lab[d], lab[e], lab[f], 0, 0, 0, 0)] = complex(value)
    qdim = {lab[s]: qnumber(s + 1, q) for s in spins}
    logger.debug(f"🔧 rep_uq_sl2 q={q} jmax={jmax}: {len(entries)} F-symbols")
    return FusionCategory(
        name=f"rep_uq_sl2(q={q:g},jmax={jmax:g})", labels=[lab[s] for s in spins], unit=lab[0],
        ring=ring, f=FSymbolTensor(entries), qdim=qdim,
        gauge="q-Racah: (-1)^(a+b+c+d) sqrt([2e+1][2f+1]) {a b e; c d f}_q",
        weights={lab[s]: s for s in spins}, cutoff=two_max, params={"q": q, "jmax": float(jmax)},
    )


def svec() -> FusionCategory:
    """Vec_Z2 with the odd element named psi (base of the fermionic condensation)."""
    cat = vec_g(group_table("Z2", odd_label="psi"), name="svec")
    return cat


def abelian_characters(cat: FusionCategory) -> Dict[str, Dict[Label, complex]]:
    """Characters chi_k of a cyclic pointed category, keyed "chi0", "chi1", ...

    chi_k(g^m) = exp(2 pi i k m / n) for a generator g of order n. These label
    the dual symmetry of the fibre-functor module and its boundary twists.
    """
    for (a, b), out in cat.ring.table.items():
        if sum(out.values()) != 1:
            raise NotRealizableError(f"{cat.name} is not pointed; it has no character group")
    n = len(cat.labels)
    generator, powers = None, []
    for g in cat.labels:
        seq, x = [cat.unit], g
        while x != cat.unit and len(seq) <= n:
            seq.append(x)
            (x,) = cat.ring.fuse(x, g)
        if len(seq) == n:
            generator, powers = g, seq
            break
    if generator is None:
        raise NotRealizableError(f"{cat.name} is not cyclic; characters are not realized")
    chars = {}
    for k in range(n):
        table = {}
        for m, g in enumerate(powers):
            value = complex(np.exp(2j * np.pi * k * m / n))
            table[g] = complex(np.round(value.real, 15), np.round(value.imag, 15))
        chars[f"chi{k}"] = table
    return chars


def category_from_name(address: str) -> FusionCategory:
    """Resolve a CLI category address such as ``rep_uq_sl2:q=1.3,jmax=4``."""
    head, _, rest = address.partition(":")
    head = head.strip().lower()
    if head == "vec_z2":
        return vec_z2()
    if head == "vec_z2_omega":
        return vec_z2(cocycle_sign=-1)
    if head == "svec":
        return svec()
    if head == "vec_g":
        group = rest or "Z2"
        return vec_g(group_table(group), name=f"vec_g:{group}")
    if head == "ising":
        return ising()
    if head == "ising_op_x_ising":
        return ising_op_x_ising()
    if head == "rep_uq_sl2":
        params = {"q": 1.0, "jmax": 3.0}
        for item in filter(None, rest.split(",")):
            k, _, v = item.partition("=")
            if k.strip() not in params:
                raise ValidationError(f"unknown rep_uq_sl2 parameter {k!r}")
            params[k.strip()] = float(v)
        return rep_uq_sl2(params["q"], params["jmax"])
    raise LabelNotFoundError(
        f"unknown category {address!r}; expected one of {', '.join(BUILTIN_CATEGORIES)}"
    )


BUILTIN_CATEGORIES = (
    "vec_z2", "vec_z2_omega", "svec", "vec_g:<group>", "ising", "ising_op_x_ising",
    "rep_uq_sl2:q=<q>,jmax=<jmax>",
)
