"""
Module Category Data

Right module categories over a fusion category: module labels, action
multiplicities (optionally Z2-graded), F◁-symbols and the mixed pentagon.

F◁ key order is (A, B, C, a, b, g, i, j, k, l) for the associator
F◁^{Aab}_B with rows (C, i, l) and columns (g, j, k), where
i in V^C_{A a}, l in V^B_{C b}, j in N^g_{ab} and k in V^B_{A g}.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import least_squares

from .checks import CheckReport
from .errors import LabelNotFoundError, PentagonInconsistencyError, ValidationError
from .fusion_core import (
    DEFAULT_TOL,
    FusionCategory,
    Label,
    _decode,
    _encode,
    ising,
    ising_op_x_ising,
    pentagon_residual,
    svec,
)
from .graded import basis_parity
from .quantum_group import parse_spin_label, q_clebsch_gordan

logger = logging.getLogger(__name__)

COMPLETION_TOL = 1e-9

GradedDim = Tuple[int, int]


@dataclass(frozen=True)
class ModuleLabel:
    """Simple module object with its graded endomorphism dimension."""
    id: Label
    end_dim: GradedDim = (1, 0)


@dataclass
class ActionTable:
    """Graded dimensions of V^B_{A a} = Hom(A ◁ a, B)."""
    dims: Dict[Tuple[Label, Label, Label], GradedDim]
    _act: Dict[Tuple[Label, Label], Dict[Label, int]] = field(
        default_factory=dict, init=False, repr=False, compare=False
    )

    def __post_init__(self):
        for (A, a, B), (even, odd) in self.dims.items():
            if even + odd > 0:
                self._act.setdefault((A, a), {})[B] = even + odd

    def graded(self, A: Label, a: Label, B: Label) -> GradedDim:
        return self.dims.get((A, a, B), (0, 0))

    def total(self, A: Label, a: Label, B: Label) -> int:
        even, odd = self.graded(A, a, B)
        return even + odd

    def act(self, A: Label, a: Label) -> Dict[Label, int]:
        return self._act.get((A, a), {})

    def parity(self, A: Label, a: Label, B: Label, index: int) -> int:
        return basis_parity(self.graded(A, a, B), index)


@dataclass
class FModTensor:
    entries: Dict[tuple, complex] = field(default_factory=dict)

    def get(self, key: tuple) -> complex:
        return self.entries.get(key, 0.0)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class SuperBlock:
    """One F◁^{A a b}_B between super objects.

    Rows are (C, p_i, p_l) and columns (g, p_k) with p the parity of the
    basis vector (0 even, 1 odd); N^g_{ab} vertices are even. A row carries
    the occupations of the hom spaces left and right of the center object.
    """
    matrix: np.ndarray
    rows: List[Tuple[Label, int, int]]
    cols: List[Tuple[Label, int]]

    def row_parity(self, r: int) -> int:
        _, p_i, p_l = self.rows[r]
        return (p_i + p_l) % 2

    def odd_entries(self, tol: float = DEFAULT_TOL) -> List[Tuple[int, int]]:
        return [
            (r, s) for r, s in zip(*np.nonzero(np.abs(self.matrix) > tol))
            if self.row_parity(r) != self.cols[s][1]
        ]

    def unitarity_residual(self) -> float:
        F = self.matrix
        return float(np.abs(F.conj().T @ F - np.eye(F.shape[1])).max())

    def bond(self, weights: Dict[Label, complex]) -> np.ndarray:
        """F diag(w_g) F^-1 on the row basis: weight w_g on fusion channel g."""
        w = np.array([weights.get(g, 0.0) for g, _ in self.cols], dtype=complex)
        return self.matrix @ np.diag(w) @ np.linalg.inv(self.matrix)


@dataclass
class CondensedView:
    """Super-object presentation of a graded module given on its even shadow.

    Shadow labels in one parity-shift orbit are one super object; a super
    object whose orbit is a single shadow label is of q-type (End = C^{1|1}).
    ``blocks`` holds F◁ between super objects keyed (A, a, b, B).
    """
    labels: List[ModuleLabel]
    orbit: Dict[Label, Label]
    representative: Dict[Label, Label]
    dims: Dict[Tuple[Label, Label, Label], GradedDim]
    blocks: Dict[Tuple[Label, Label, Label, Label], SuperBlock] = field(default_factory=dict)

    def graded(self, A: Label, a: Label, B: Label) -> GradedDim:
        return self.dims.get((A, a, B), (0, 0))

    def block(self, A: Label, a: Label, b: Label, B: Label) -> SuperBlock:
        try:
            return self.blocks[(A, a, b, B)]
        except KeyError:
            raise LabelNotFoundError(f"no super F◁ block for {(A, a, b, B)}") from None


@dataclass
class ModuleCategory:
    """A right module category over ``base``.

    ``kind`` is one of "regular", "vec" (a single simple object), "condensed"
    (graded even shadow of a fermion condensation) or "generic"; chains use it
    to decide which boundary twists and symmetry realizations exist.
    """
    name: str
    base: FusionCategory
    labels: List[ModuleLabel]
    action: ActionTable
    fmod: FModTensor
    graded: bool = False
    weights: Optional[Dict[Label, int]] = None
    gauge: str = "as listed"
    basis_note: str = ""
    condensed: Optional[CondensedView] = None
    kind: str = "generic"
    _blocks: Dict[tuple, tuple] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        self._ids = [x.id for x in self.labels]
        self._id_set = set(self._ids)
        if not self.graded:
            for (A, a, B), (even, odd) in self.action.dims.items():
                if odd:
                    raise ValidationError(f"odd hom space V^{B}_{A},{a} in ungraded module {self.name}")

    @property
    def ids(self) -> List[Label]:
        return list(self._ids)

    def require(self, *labels: Label) -> None:
        for x in labels:
            if x not in self._id_set:
                raise LabelNotFoundError(f"module label {x!r} not found in {self.name}")

    def act(self, A: Label, a: Label) -> Dict[Label, int]:
        return self.action.act(A, a)

    def dims(self, A: Label, a: Label, B: Label) -> GradedDim:
        """Graded dimension of V^B_{A a}; condensed modules report super objects."""
        if self.condensed is not None:
            return self.condensed.graded(A, a, B)
        return self.action.graded(A, a, B)

    def parity(self, A: Label, a: Label, B: Label, index: int) -> int:
        return self.action.parity(A, a, B, index) if self.graded else 0

    def within_cutoff(self, A: Label, *objects: Label) -> bool:
        if self.base.cutoff is None:
            return True
        w = 0 if self.weights is None else self.weights.get(A, 0)
        return w + sum(self.base.weights[x] for x in objects) <= self.base.cutoff

    def fmod_block(self, A: Label, a: Label, b: Label, B: Label) -> Tuple[np.ndarray, list, list]:
        """F◁^{Aab}_B with rows (C, i, l) and columns (g, j, k)."""
        key = (A, a, b, B)
        if key not in self._blocks:
            rows = [
                (C, i, l)
                for C, nC in self.act(A, a).items()
                for i in range(nC)
                for l in range(self.action.total(C, b, B))
            ]
            cols = [
                (g, j, k)
                for g, ng in self.base.ring.fuse(a, b).items()
                for j in range(ng)
                for k in range(self.action.total(A, g, B))
            ]
            mat = np.zeros((len(rows), len(cols)), dtype=complex)
            for r, (C, i, l) in enumerate(rows):
                for s, (g, j, k) in enumerate(cols):
                    mat[r, s] = self.fmod.get((A, B, C, a, b, g, i, j, k, l))
            self._blocks[key] = (mat, rows, cols)
        return self._blocks[key]

    def to_dict(self) -> Dict[str, Any]:
        out = self.base.to_dict()
        out["module"] = {
            "name": self.name,
            "graded": self.graded,
            "labels": [{"id": _encode(x.id), "end_dim": list(x.end_dim)} for x in self.labels],
            "action": [
                [_encode(A), _encode(a), _encode(B), e, o]
                for (A, a, B), (e, o) in self.action.dims.items()
            ],
            "f_mod": [
                [_encode(x) for x in key[:6]] + list(key[6:])
                + [float(np.real(v)), float(np.imag(v)), list(self._entry_parities(key))]
                for key, v in self.fmod.entries.items()
            ],
            "weights": None if self.weights is None else [[_encode(x), w] for x, w in self.weights.items()],
            "gauge": self.gauge,
            "basis_note": self.basis_note,
            "kind": self.kind,
        }
        return out

    def _entry_parities(self, key: tuple) -> Tuple[int, int, int, int]:
        A, B, C, a, b, g, i, j, k, l = key
        return (self.parity(A, a, C, i), 0, self.parity(A, g, B, k), self.parity(C, b, B, l))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ModuleCategory":
        base = FusionCategory.from_dict(data)
        mod = data["module"]
        dims = {
            (_decode(A), _decode(a), _decode(B)): (int(e), int(o))
            for A, a, B, e, o in mod["action"]
        }
        entries = {}
        for row in mod["f_mod"]:
            key = tuple(_decode(x) for x in row[:6]) + tuple(int(x) for x in row[6:10])
            entries[key] = complex(row[10], row[11])
        weights = mod.get("weights")
        return cls(
            name=mod.get("name", "custom"),
            base=base,
            labels=[ModuleLabel(_decode(x["id"]), tuple(x.get("end_dim", (1, 0)))) for x in mod["labels"]],
            action=ActionTable(dims),
            fmod=FModTensor(entries),
            graded=bool(mod.get("graded", False)),
            weights=None if weights is None else {_decode(x): int(w) for x, w in weights},
            gauge=mod.get("gauge", "as listed"),
            basis_note=mod.get("basis_note", ""),
            kind=mod.get("kind", "generic"),
        )


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def _pentagon_inputs(mod: ModuleCategory, entries: Dict[tuple, complex]):
    base_entries = mod.base.f.entries

    def left(A, a, b, B, C, g, i, j, k, l):
        return entries.get((A, B, C, a, b, g, i, j, k, l), 0.0)

    def base_f(a, b, c, d, mu, nu, i, j, k, l):
        return base_entries.get((a, b, c, d, mu, nu, i, j, k, l), 0.0)

    return left, base_f


def check_module_pentagon(mod: ModuleCategory, tol: float = DEFAULT_TOL,
                           base_parity: Optional[Callable[[Label, Label, Label, int], int]] = None) -> CheckReport:
    """Mixed pentagon: one base F and two F◁ per side, all label tuples.

    ``base_parity`` grades the vertices of the base category; the built-in
    bases have even vertices only.
    """
    left, base_f = _pentagon_inputs(mod, mod.fmod.entries)
    worst, count, where, problems = pentagon_residual(
        mod.ids, mod.base.labels, mod.act, left, mod.base.ring.fuse, base_f,
        within=mod.within_cutoff, parity=mod.parity if mod.graded else None,
        base_parity=base_parity,
    )
    report = CheckReport.from_residual(
        f"module_pentagon[{mod.name}]", worst, tol, checked=count, errors=problems,
        details={"worst": repr(where), "gauge": mod.gauge, "basis": mod.basis_note,
                 "graded": mod.graded},
    )
    if problems:
        report.passed = False
    logger.info(report.summary_line())
    return report


def check_evenness(mod: ModuleCategory, tol: float = DEFAULT_TOL) -> CheckReport:
    """Every nonzero F◁ entry must connect equal total parity."""
    errors = []
    for key, value in mod.fmod.entries.items():
        if abs(value) <= tol:
            continue
        p_row, _, p_col, p_l = mod._entry_parities(key)
        if (p_row + p_l) % 2 != p_col % 2:
            errors.append(f"odd F◁ entry at {key}")
    return CheckReport(name=f"evenness[{mod.name}]", passed=not errors,
                       max_residual=float(len(errors)), tol=0.0,
                       checked=len(mod.fmod.entries), errors=errors[:20])


def check_super_blocks(mod: ModuleCategory, tol: float = DEFAULT_TOL) -> CheckReport:
    """Super F◁ blocks of a condensed module are unitary and even."""
    if mod.condensed is None or not mod.condensed.blocks:
        raise ValidationError(f"{mod.name} carries no super F◁ blocks")
    worst, errors = 0.0, []
    for key, block in mod.condensed.blocks.items():
        worst = max(worst, block.unitarity_residual())
        errors.extend(f"odd entry {block.rows[r]} -> {block.cols[s]} in {key}" for r, s in block.odd_entries(tol))
    report = CheckReport.from_residual(
        f"super_blocks[{mod.name}]", worst, tol, checked=len(mod.condensed.blocks), errors=errors,
    )
    if errors:
        report.passed = False
    logger.info(report.summary_line())
    return report


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def regular_module(cat: FusionCategory) -> ModuleCategory:
    """The fusion category acting on itself; F◁ coincides with F."""
    dims = {
        (A, a, B): (n, 0)
        for (A, a), out in cat.ring.table.items()
        for B, n in out.items() if n > 0
    }
    entries = {
        (A, B, C, a, b, g, i, j, k, l): v
        for (A, a, b, B, C, g, i, j, k, l), v in cat.f.entries.items()
    }
    return ModuleCategory(
        name=f"regular({cat.name})", base=cat, labels=[ModuleLabel(x) for x in cat.labels],
        action=ActionTable(dims), fmod=FModTensor(entries), weights=cat.weights,
        gauge=cat.gauge,
        kind="regular",
    )


def fusion_key(module_key: tuple) -> tuple:
    """F-symbol key of the base entry a regular-module F◁ key was copied from."""
    A, B, C, a, b, g, i, j, k, l = module_key
    return (A, a, b, B, C, g, i, j, k, l)


def complete_fmod(
    name: str,
    base: FusionCategory,
    labels: List[ModuleLabel],
    action: ActionTable,
    pinned: Dict[tuple, complex],
    unknown: List[tuple],
    graded: bool = False,
    tol: float = COMPLETION_TOL,
) -> ModuleCategory:
    """Fill unit-modulus F◁ entries by a least-squares solve of the pentagon.

    Unknown entries are parametrized as exp(i theta); pinned entries are
    held fixed. Raises PentagonInconsistencyError when the best residual
    exceeds ``tol``.
    """
    shell = ModuleCategory(name=name, base=base, labels=labels, action=action,
                           fmod=FModTensor(dict(pinned)), graded=graded)

    def assemble(theta: np.ndarray) -> Dict[tuple, complex]:
        entries = dict(pinned)
        for key, t in zip(unknown, theta):
            entries[key] = complex(np.exp(1j * t))
        return entries

    def residuals(theta: np.ndarray) -> np.ndarray:
        left, base_f = _pentagon_inputs(shell, assemble(theta))
        diffs: List[complex] = []
        pentagon_residual(shell.ids, base.labels, shell.act, left, base.ring.fuse, base_f,
                          parity=shell.parity if graded else None, collect=diffs)
        arr = np.asarray(diffs, dtype=complex)
        return np.concatenate([arr.real, arr.imag]) if arr.size else np.zeros(1)

    theta = np.zeros(len(unknown))
    if unknown:
        sol = least_squares(residuals, theta, xtol=1e-14, ftol=1e-14, gtol=1e-14)
        theta = sol.x
    final = np.abs(residuals(theta)).max()
    if final > tol:
        logger.warning(f"❌ {name}: no consistent F◁ (pentagon residual {final:.3e})")
        raise PentagonInconsistencyError(
            f"no module associator for {name} over {base.name} satisfies the pentagon "
            f"(best residual {final:.3e})",
            residual=float(final),
        )
    shell.fmod = FModTensor(assemble(theta))
    shell.gauge = "unit-normalized; remaining entries solved from the pentagon"
    logger.info(f"✅ completed {len(unknown)} F◁ entries for {name} (residual {final:.1e})")
    return shell


def _require_group_category(base: FusionCategory) -> None:
    for (a, b), out in base.ring.table.items():
        if sum(out.values()) != 1:
            raise ValidationError(f"{base.name} is not a pointed (group) category")


def vec_forgetful(base: FusionCategory) -> ModuleCategory:
    """Vec as a module over Vec_G^omega (a fibre functor); fails for nontrivial omega."""
    _require_group_category(base)
    one = "1"
    labels = [ModuleLabel(one)]
    action = ActionTable({(one, g, one): (1, 0) for g in base.labels})
    pinned, unknown = {}, []
    for g, h in itertools.product(base.labels, repeat=2):
        (gh,) = base.ring.fuse(g, h)
        key = (one, one, one, g, h, gh, 0, 0, 0, 0)
        if base.unit in (g, h):
            pinned[key] = 1.0
        else:
            unknown.append(key)
    mod = complete_fmod(f"vec({base.name})", base, labels, action, pinned, unknown)
    mod.kind = "vec"
    return mod


def svec_condense(base: Optional[FusionCategory] = None) -> ModuleCategory:
    """sVec / <psi = 1>: one object with V^1_{1,psi} purely odd."""
    base = base or svec()
    _require_group_category(base)
    odd = [g for g in base.labels if g != base.unit]
    if len(odd) != 1:
        raise ValidationError("svec_condense needs a Z2 base category")
    one, psi = "1", odd[0]
    labels = [ModuleLabel(one)]
    action = ActionTable({(one, base.unit, one): (1, 0), (one, psi, one): (0, 1)})
    pinned, unknown = {}, []
    for g, h in itertools.product(base.labels, repeat=2):
        (gh,) = base.ring.fuse(g, h)
        key = (one, one, one, g, h, gh, 0, 0, 0, 0)
        if base.unit in (g, h) or (g, h) == (psi, psi):
            pinned[key] = 1.0
        else:
            unknown.append(key)
    mod = complete_fmod("svec_condense", base, labels, action, pinned, unknown, graded=True)
    mod.gauge = "F◁^{1 psi psi}_1 = 1"
    mod.kind = "vec"
    return mod


def _parity_shadow(shadow: ModuleCategory, odd_label: Label, name: str) -> ModuleCategory:
    """Graded module on the even shadow of a fermion condensation.

    A shadow vertex X ◁ a -> Y is odd iff exactly one of X, Y is the
    condensed fermion label.
    """
    def charge(x):
        return 1 if x == odd_label else 0

    dims = {}
    for (A, a, B), (n, _) in shadow.action.dims.items():
        dims[(A, a, B)] = (0, n) if (charge(A) + charge(B)) % 2 else (n, 0)
    return ModuleCategory(
        name=name, base=shadow.base, labels=list(shadow.labels), action=ActionTable(dims),
        fmod=FModTensor(dict(shadow.fmod.entries)), graded=True, weights=shadow.weights,
        gauge=f"even shadow of {shadow.name} ({odd_label} identified with the unit)",
        basis_note=shadow.basis_note,
        kind="condensed",
    )


def _condensed_view(mod: ModuleCategory, unit: Label, odd_label: Label,
                    qtype: Dict[Label, Label]) -> CondensedView:
    """Super objects: {unit, odd} -> '1', each fixed point -> its q-type name."""
    orbit = {unit: "1", odd_label: "1"}
    orbit.update(qtype)
    representative = {"1": unit}
    representative.update({v: k for k, v in qtype.items()})
    labels = [ModuleLabel("1", (1, 0))] + [ModuleLabel(v, (1, 1)) for v in qtype.values()]

    dims: Dict[Tuple[Label, Label, Label], GradedDim] = {}
    for S_A in representative:
        A = representative[S_A]
        for a in mod.base.labels:
            for S_B in representative:
                even = odd = 0
                for Y in [y for y, s in orbit.items() if s == S_B]:
                    e, o = mod.action.graded(A, a, Y)
                    even, odd = even + e, odd + o
                if S_B in qtype.values():
                    n = even + odd
                    even, odd = n, n
                if even + odd:
                    dims[(S_A, a, S_B)] = (even, odd)
    return CondensedView(labels=labels, orbit=orbit, representative=representative, dims=dims)


def _super_block(entries: Dict[Tuple[tuple, tuple], complex], rows: list, cols: list) -> SuperBlock:
    mat = np.zeros((len(rows), len(cols)), dtype=complex)
    for (row, col), v in entries.items():
        mat[rows.index(row), cols.index(col)] = v
    return SuperBlock(mat, rows, cols)


def _ising_fermion_blocks() -> Dict[tuple, SuperBlock]:
    """Super F◁ for Ising / <psi = 1> with every N vertex even.

    The odd hom space 1 -> beta is identified with the even one through the
    odd endomorphism of beta, and two contracted odd endomorphisms of beta
    give i. Entries follow from that gauge and unitarity.
    """
    d = np.sqrt(2.0)
    on_beta = _super_block(
        {(("beta", 0, 0), ("1", 0)): 1.0, (("beta", 0, 1), ("psi", 1)): 1.0},
        rows=[("beta", 0, 0), ("beta", 0, 1)],
        cols=[("1", 0), ("psi", 1)],
    )
    between = _super_block(
        {
            (("1", 0, 0), ("1", 0)): 1 / d, (("1", 0, 0), ("psi", 0)): 1 / d,
            (("1", 1, 1), ("1", 0)): 1j / d, (("1", 1, 1), ("psi", 0)): -1j / d,
            (("1", 0, 1), ("1", 1)): 1 / d, (("1", 0, 1), ("psi", 1)): -1 / d,
            (("1", 1, 0), ("1", 1)): 1 / d, (("1", 1, 0), ("psi", 1)): 1 / d,
        },
        rows=[("1", 0, 0), ("1", 0, 1), ("1", 1, 0), ("1", 1, 1)],
        cols=[("1", 0), ("psi", 0), ("1", 1), ("psi", 1)],
    )
    return {("1", "sigma", "sigma", "1"): on_beta, ("beta", "sigma", "sigma", "beta"): between}


def ising_fermion() -> ModuleCategory:
    """Ising / <psi = 1>, objects {1, beta} with End(beta) = C^{1|1}.

    The F◁ tensor is the even shadow of the regular module; the condensed
    view carries the super blocks on sigma ⊗ sigma.
    """
    mod = _parity_shadow(regular_module(ising()), "psi", "ising_fermion")
    mod.condensed = _condensed_view(mod, "1", "psi", {"sigma": "beta"})
    mod.condensed.blocks = _ising_fermion_blocks()
    return mod


def bimodule_over_double(cat: FusionCategory, double: Optional[FusionCategory] = None) -> ModuleCategory:
    """``cat`` as a module over cat^op ⊠ cat with A ◁ (a1, a2) = (a1 ⊗ A) ⊗ a2.

    The hom space V^C_{A,(a1,a2)} has one basis vector per intermediate X
    with a1 ⊗ A -> X and X ⊗ a2 -> C (labels in category order).
    """
    double = double or ising_op_x_ising()
    ent = cat.f.entries

    def channels(A, a, C):
        a1, a2 = a
        return [X for X in cat.labels if cat.N(a1, A, X) and cat.N(X, a2, C)]

    dims = {}
    for A, a, C in itertools.product(cat.labels, double.labels, cat.labels):
        n = len(channels(A, a, C))
        if n:
            dims[(A, a, C)] = (n, 0)
    action = ActionTable(dims)

    def F(a, b, c, d, mu, nu):
        return ent.get((a, b, c, d, mu, nu, 0, 0, 0, 0), 0.0)

    entries = {}
    for A, B in itertools.product(cat.labels, repeat=2):
        for a, b in itertools.product(double.labels, repeat=2):
            (a1, a2), (b1, b2) = a, b
            for C in action.act(A, a):
                for i, X in enumerate(channels(A, a, C)):
                    for l, Y in enumerate(channels(C, b, B)):
                        for g in double.ring.fuse(a, b):
                            g1, g2 = g
                            for k, Z in enumerate(channels(A, g, B)):
                                value = (F(Z, a2, b2, B, Y, g2) * F(b1, X, a2, Y, Z, C)
                                         * F(b1, a1, A, Z, g1, X))
                                if abs(value) > 1e-15:
                                    entries[(A, B, C, a, b, g, i, 0, k, l)] = value
    return ModuleCategory(
        name="ising_over_double", base=double, labels=[ModuleLabel(x) for x in cat.labels],
        action=action, fmod=FModTensor(entries),
        gauge="tree overlaps of the Ising F-symbols",
        basis_note="V^C_{A,(a1,a2)} basis vectors labelled by the channel of a1 ⊗ A in category order",
    )


def _double_fermion_blocks() -> Dict[tuple, SuperBlock]:
    """F◁^{1 (sigma,sigma) (sigma,sigma)}_1 over the condensed unit object."""
    d = np.sqrt(2.0)
    ss = ("sigma", "sigma")
    rows = [("1", 0, 0), ("1", 0, 1), ("1", 1, 0), ("1", 1, 1)]
    cols = [(("1", "1"), 0), (("psi", "1"), 1), (("1", "psi"), 1), (("psi", "psi"), 0)]
    block = _super_block(
        {
            (rows[0], cols[0]): 1 / d, (rows[3], cols[0]): -1 / d,
            (rows[1], cols[1]): -1j / d, (rows[2], cols[1]): 1 / d,
            (rows[1], cols[2]): 1j / d, (rows[2], cols[2]): 1 / d,
            (rows[0], cols[3]): 1 / d, (rows[3], cols[3]): 1 / d,
        },
        rows, cols,
    )
    return {("1", ss, ss, "1"): block}


def double_fermion() -> ModuleCategory:
    mod = _parity_shadow(bimodule_over_double(ising()), "psi", "double_fermion")
    mod.condensed = _condensed_view(mod, "1", "psi", {"sigma": "beta"})
    mod.condensed.blocks = _double_fermion_blocks()
    return mod


def vec_over_uqsl2(base: FusionCategory) -> ModuleCategory:
    """Vec over Rep(U_q(sl2)): 1 ◁ j = (2j+1)·1, F◁ given by q-Clebsch-Gordan coefficients."""
    if base.weights is None:
        raise ValidationError(f"{base.name} is not a truncated Rep(U_q(sl2))")
    q = _q_of(base)
    one = "1"
    spins = {x: parse_spin_label(x) for x in base.labels}
    dims = {(one, x, one): (s + 1, 0) for x, s in spins.items()}
    entries = {}
    for a, b in itertools.product(base.labels, repeat=2):
        cg = q_clebsch_gordan(spins[a], spins[b], q)
        for c in base.ring.fuse(a, b):
            coeffs = cg[spins[c]]
            for ia, ib, ic in zip(*np.nonzero(np.abs(coeffs) > 1e-15)):
                entries[(one, one, one, a, b, c, int(ia), 0, int(ic), int(ib))] = float(coeffs[ia, ib, ic])
    return ModuleCategory(
        name="vec_over_uqsl2", base=base, labels=[ModuleLabel(one)], action=ActionTable(dims),
        fmod=FModTensor(entries), weights={one: 0},
        kind="vec",
        gauge="q-Clebsch-Gordan, highest-weight component at m_a = a positive",
        basis_note="V^1_{1,j} basis index k has m = j - k",
    )


def _q_of(base: FusionCategory) -> float:
    if "q" not in base.params:
        raise ValidationError(f"{base.name} carries no deformation parameter q")
    return float(base.params["q"])


BUILTIN_MODULES = (
    "regular", "vec_forgetful", "svec_condense", "ising_fermion",
    "ising_over_double", "double_fermion", "vec_over_uqsl2",
)


def builtin_module(name: str, base: Optional[FusionCategory] = None) -> ModuleCategory:
    """Construct a named module category; validated by the pentagon eagerly."""
    if name not in BUILTIN_MODULES:
        raise LabelNotFoundError(f"unknown module {name!r}; expected one of {', '.join(BUILTIN_MODULES)}")
    if name == "regular":
        if base is None:
            raise ValidationError("regular module needs a base category")
        mod = regular_module(base)
    elif name == "vec_forgetful":
        if base is None:
            raise ValidationError("vec_forgetful needs a base category")
        mod = vec_forgetful(base)
    elif name == "svec_condense":
        mod = svec_condense(base)
    elif name == "ising_fermion":
        mod = ising_fermion()
    elif name == "ising_over_double":
        mod = bimodule_over_double(ising(), base)
    elif name == "double_fermion":
        mod = double_fermion()
    else:
        if base is None:
            raise ValidationError("vec_over_uqsl2 needs a Rep(U_q(sl2)) base")
        mod = vec_over_uqsl2(base)

    report = check_module_pentagon(mod)
    if not report.passed:
        raise PentagonInconsistencyError(
            f"{mod.name} fails the module pentagon ({report.max_residual:.3e})",
            residual=report.max_residual,
        )
    logger.debug(f"🔧 built module {mod.name} over {mod.base.name}")
    return mod
