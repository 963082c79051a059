"""
Symmetry and Intertwiner MPOs

Materializes matrix product operators on chain bases:

  - symmetry MPOs whose tensors are F-symbols (regular module), characters
    of the link objects (fibre-functor module of an abelian group) or the
    grading (condensed modules);
  - intertwiner MPOs from a regular-module chain to a chain over another
    module category, with tensor entries (F◁^{X A_k alpha_k}_{M_{k+1}});
  - the gauging map of Vec_G, which is the intertwiner to the Vec module.

MPOs are contracted state by state into sparse matrices; the tensor-level
pulling-through identity is checked by contracting them against the bond operators.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.sparse as sp

from .chain_space import BasisState, ChainBasis, ChainSpec, enumerate_basis
from .checks import CheckReport
from .errors import (
    DimensionMismatchError,
    GeometryError,
    LabelNotFoundError,
    NotRealizableError,
    ValidationError,
)
from .fusion_core import DEFAULT_TOL, FusionCategory, Label, abelian_characters, group_table, vec_g
from .module_data import ModuleCategory, regular_module, vec_forgetful
from .operators import DROP_TOL, HamiltonianSpec, SparseOperator, build_bond
from .parallel import parallel_map

logger = logging.getLogger(__name__)


def label_text(x: Label) -> str:
    """Printable form of a base or module label; Deligne pairs print as a,b."""
    if isinstance(x, tuple):
        return ",".join(label_text(y) for y in x)
    return str(x)


# ---------------------------------------------------------------------------
# Symmetry realizations
# ---------------------------------------------------------------------------

class SymmetryRealization(ABC):
    """How the symmetry operators of a module chain are materialized."""

    def __init__(self, mod: ModuleCategory):
        self.mod = mod

    @property
    @abstractmethod
    def kind(self) -> str:
        """Short name used in reports."""
        pass

    @property
    @abstractmethod
    def labels(self) -> List[Label]:
        """Labels of the symmetry operators, unit first."""
        pass

    @property
    @abstractmethod
    def unit(self) -> Label:
        pass

    @abstractmethod
    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        """Fusion rule obeyed by U_a U_b."""
        pass

    @abstractmethod
    def operator(self, a: Label, basis: ChainBasis) -> SparseOperator:
        """Materialized symmetry MPO with label ``a``."""
        pass

    def operators(self, basis: ChainBasis, include_unit: bool = False) -> Dict[str, SparseOperator]:
        """Every realizable operator on ``basis`` keyed ``U_<label>``; others are skipped."""
        out: Dict[str, SparseOperator] = {}
        for a in self.labels:
            if a == self.unit and not include_unit:
                continue
            try:
                out[f"U_{label_text(a)}"] = self.operator(a, basis)
            except NotRealizableError as e:
                logger.debug(f"⚠️ U_{label_text(a)} skipped: {e}")
        return out


class RegularSymmetry(SymmetryRealization):
    """Left action of the base category on a regular-module chain.

    <out|U_a|in> = sum_u prod_k F^{a A_k alpha_k}_{A'_{k+1}} with rows
    (A'_k, u_k) and columns (A_{k+1}, v_k), links unchanged.
    """

    kind = "regular"

    @property
    def labels(self) -> List[Label]:
        return list(self.mod.base.labels)

    @property
    def unit(self) -> Label:
        return self.mod.base.unit

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        return self.mod.base.fuse(a, b)

    def _check(self, a: Label, basis: ChainBasis) -> None:
        base = self.mod.base
        base.require(a)
        if basis.twist.character is not None:
            raise NotRealizableError("character twists do not live on regular-module chains")
        if basis.twist.geometric:
            pointed = all(sum(out.values()) == 1 for out in base.ring.table.values())
            trivial = all(abs(v - 1.0) < 1e-12 for v in base.f.entries.values())
            if not (pointed and trivial):
                raise NotRealizableError(
                    f"symmetry MPOs on twisted rings need a pointed base with trivial F, not {base.name}"
                )

    def _column(self, a: Label, basis: ChainBasis, state: BasisState) -> Dict[int, complex]:
        base = self.mod.base
        F = base.f.entries
        N = basis.spec.length
        ring = basis.is_ring
        ends = [basis.link_ends(state, k)[1] for k in range(N)]
        labels_in = [state.labels[0]] + ends
        out: Dict[int, complex] = {}

        def walk(k: int, new: List[Label], u: List[int], homs: List[int], amp: complex) -> None:
            if k == N:
                if ring:
                    closing = basis.closure(BasisState(tuple(new[:N]), state.links, tuple(homs)))
                    if new[N] != closing or u[N] != u[0]:
                        return
                    labels = tuple(new[:N])
                else:
                    labels = tuple(new)
                target = BasisState(labels, state.links, tuple(homs))
                m = basis.find(target)
                if m is None:
                    if abs(amp) > DROP_TOL:
                        raise NotRealizableError(
                            f"U_{label_text(a)} leaves the chain basis (reaches {target.labels})"
                        )
                    return
                out[m] = out.get(m, 0.0) + amp
                return
            A, alpha, B = labels_in[k], state.links[k], labels_in[k + 1]
            Ap = new[k]
            for Bp, nB in base.fuse(a, B).items():
                for nxt in range(nB):
                    for v_new in range(self.mod.action.total(Ap, alpha, Bp)):
                        value = F.get((a, A, alpha, Bp, Ap, B, u[k], state.homs[k], nxt, v_new), 0.0)
                        if value == 0:
                            continue
                        walk(k + 1, new + [Bp], u + [nxt], homs + [v_new], amp * value)

        for A0p, n0 in base.fuse(a, labels_in[0]).items():
            for u0 in range(n0):
                walk(0, [A0p], [u0], [], 1.0)
        return out

    def operator(self, a: Label, basis: ChainBasis) -> SparseOperator:
        if basis.module is not self.mod and basis.module.name != self.mod.name:
            raise ValidationError(f"basis is over {basis.module.name}, not {self.mod.name}")
        self._check(a, basis)
        if a == self.unit:
            return SparseOperator.identity(basis.dim, label=f"U_{label_text(a)}")
        columns = parallel_map(lambda n: self._column(a, basis, basis.states[n]), range(basis.dim))
        rows, cols, vals = [], [], []
        for n, col in enumerate(columns):
            for m, v in col.items():
                rows.append(m)
                cols.append(n)
                vals.append(v)
        op = SparseOperator.from_triplets(basis.dim, rows, cols, vals, label=f"U_{label_text(a)}")
        logger.debug(f"🔧 U_{label_text(a)} on {basis.module.name}: nnz={op.nnz}")
        return op


class CharacterSymmetry(SymmetryRealization):
    """Dual symmetry of the fibre-functor module of a cyclic group: U_chi = prod_k chi(alpha_k)."""

    kind = "character"

    def __init__(self, mod: ModuleCategory):
        super().__init__(mod)
        self.characters = abelian_characters(mod.base)

    @property
    def labels(self) -> List[Label]:
        return list(self.characters)

    @property
    def unit(self) -> Label:
        return "chi0"

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        n = len(self.characters)
        return {f"chi{(int(a[3:]) + int(b[3:])) % n}": 1}

    def operator(self, a: Label, basis: ChainBasis) -> SparseOperator:
        if a not in self.characters:
            raise LabelNotFoundError(f"{a!r} is not a character of {self.mod.base.name}")
        chi = self.characters[a]
        diag = np.array([np.prod([chi[x] for x in s.links]) for s in basis.states], dtype=complex)
        return SparseOperator(sp.diags(diag, format="csr"), label=f"U_{a}")


class ParitySymmetry(SymmetryRealization):
    """Fermion parity of a graded chain, labelled like the characters of Z2."""

    kind = "parity"

    @property
    def labels(self) -> List[Label]:
        return ["chi0", "chi1"]

    @property
    def unit(self) -> Label:
        return "chi0"

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        return {"chi0" if a == b else "chi1": 1}

    def operator(self, a: Label, basis: ChainBasis) -> SparseOperator:
        if a not in ("chi0", "chi1"):
            raise LabelNotFoundError(f"{a!r} is not a parity label")
        if a == "chi0":
            return SparseOperator.identity(basis.dim, label="U_chi0")
        diag = np.array([(-1) ** basis.state_parity(n) for n in range(basis.dim)], dtype=complex)
        return SparseOperator(sp.diags(diag, format="csr"), label="U_chi1")


class NoSymmetry(SymmetryRealization):
    """Placeholder for modules whose dual symmetry is not materialized here."""

    kind = "none"

    @property
    def labels(self) -> List[Label]:
        return []

    @property
    def unit(self) -> Label:
        return None

    def fuse(self, a: Label, b: Label) -> Dict[Label, int]:
        return {}

    def operator(self, a: Label, basis: ChainBasis) -> SparseOperator:
        raise NotRealizableError(f"no symmetry MPOs are realized for {self.mod.name}")


def realization_for(mod: ModuleCategory) -> SymmetryRealization:
    if mod.kind == "regular":
        return RegularSymmetry(mod)
    if mod.kind == "vec":
        try:
            return CharacterSymmetry(mod)
        except NotRealizableError as e:
            logger.info(f"⚠️ {mod.name}: {e}")
            return NoSymmetry(mod)
    if mod.kind == "condensed" or mod.graded:
        return ParitySymmetry(mod)
    return NoSymmetry(mod)


def symmetry_mpo(mod: ModuleCategory, a: Label, basis: ChainBasis) -> SparseOperator:
    """Materialized symmetry MPO ``a`` of the realization attached to ``mod``."""
    return realization_for(mod).operator(a, basis)


def symmetry_operators(mod: ModuleCategory, basis: ChainBasis) -> Dict[str, SparseOperator]:
    """All realizable non-identity symmetry operators on ``basis``."""
    return realization_for(mod).operators(basis)


# ---------------------------------------------------------------------------
# Checks on symmetry MPOs
# ---------------------------------------------------------------------------

def verify_pulling_through(mod: ModuleCategory, basis: ChainBasis, spec: HamiltonianSpec,
                           tol: float = DEFAULT_TOL) -> CheckReport:
    """Pull every realizable symmetry MPO through the bonds of ``spec``.

    Each bond is built from the F◁-symbols of ``mod`` at each of its sites
    and contracted against the MPO on ``basis``; the residual is the largest
    entry of U_a b_i - b_i U_a.
    """
    syms = realization_for(mod).operators(basis)
    tasks = [(t.bond, i) for t in spec.terms for i in (basis.bond_sites() if t.sites is None else t.sites)]

    def run(task):
        bond, site = task
        b = build_bond(mod, basis, bond, site)
        return [((U @ b) - (b @ U)).max_abs() for U in syms.values()]

    worst, where = 0.0, None
    for (bond, site), residuals in zip(tasks, parallel_map(run, tasks)):
        for name, res in zip(syms, residuals):
            if res > worst:
                worst, where = res, (name, bond.name, site)
    report = CheckReport.from_residual(
        f"pulling_through[{mod.name}]", worst, tol, checked=len(tasks) * len(syms),
        details={"worst": repr(where), "symmetries": sorted(syms)},
    )
    logger.info(report.summary_line())
    return report


def check_mpo_fusion(mod: ModuleCategory, basis: ChainBasis, tol: float = DEFAULT_TOL) -> CheckReport:
    """U_a U_b = sum_c N^c_ab U_c for every realizable pair."""
    real = realization_for(mod)
    ops: Dict[Label, SparseOperator] = {}
    for a in real.labels:
        try:
            ops[a] = real.operator(a, basis)
        except NotRealizableError:
            continue
    worst, checked, skipped = 0.0, 0, []
    for a in ops:
        for b in ops:
            rule = real.fuse(a, b)
            if any(c not in ops for c in rule):
                skipped.append(f"{label_text(a)}x{label_text(b)}")
                continue
            rhs = SparseOperator.zeros(basis.dim)
            for c, n in rule.items():
                rhs = rhs + ops[c] * n
            worst = max(worst, (ops[a] @ ops[b] - rhs).max_abs())
            checked += 1
    report = CheckReport.from_residual(
        f"mpo_fusion[{mod.name}]", worst, tol, checked=checked,
        warnings=[f"skipped {len(skipped)} pairs with unrealized channels"] if skipped else [],
        details={"labels": [label_text(a) for a in ops], "realization": real.kind},
    )
    logger.info(report.summary_line())
    return report


def check_commutation(H: SparseOperator, symmetries: Union[Dict[str, SparseOperator], Sequence[SparseOperator]],
                      tol: float = DEFAULT_TOL, name: str = "commutation") -> CheckReport:
    """max over U of ||[U, H]||_max."""
    items = symmetries.items() if isinstance(symmetries, dict) else [(s.label, s) for s in symmetries]
    worst, per = 0.0, {}
    for key, U in items:
        norm = (U @ H - H @ U).max_abs()
        per[key] = norm
        worst = max(worst, norm)
    report = CheckReport.from_residual(name, worst, tol, checked=len(per), details={"per_symmetry": per})
    logger.info(report.summary_line())
    return report


# ---------------------------------------------------------------------------
# Intertwiners
# ---------------------------------------------------------------------------

@dataclass
class IntertwinerMap:
    """Linear map from a regular-module chain (columns) to a module chain (rows)."""
    matrix: sp.csr_matrix
    source: ChainBasis
    target: ChainBasis
    label: str = "W"
    dropped: int = 0

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def apply(self, vec: np.ndarray) -> np.ndarray:
        vec = np.asarray(vec, dtype=complex)
        if vec.shape[0] != self.matrix.shape[1]:
            raise DimensionMismatchError(f"state of length {vec.shape[0]} on a source of dimension {self.matrix.shape[1]}")
        return self.matrix @ vec

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def intertwining_residual(self, bond_source: SparseOperator, bond_target: SparseOperator) -> float:
        """||W b_source - b_target W||_max."""
        diff = self.matrix @ bond_source.matrix - bond_target.matrix @ self.matrix
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0


def _same_strands(a: ChainSpec, b: ChainSpec) -> bool:
    if a.length != b.length or a.geometry != b.geometry:
        return False
    if a.strands is None or b.strands is None:
        return a.strands == b.strands
    return all(set(x) == set(y) for x, y in zip(a.strands, b.strands))


def intertwiner_mpo(mod: ModuleCategory, basis_regular: ChainBasis, basis_mod: ChainBasis) -> IntertwinerMap:
    """MPO from the regular-module chain to the ``mod`` chain.

    <M|W|A> = sum_X sum_u prod_k F◁^{X A_k alpha_k}_{M_{k+1}} with rows
    (M_k, u_k, v_k) and columns (A_{k+1}, w_k, u_{k+1}); rings trace over
    the virtual module label X, open chains start and end at u = 0.
    """
    reg = basis_regular.module
    if reg.kind != "regular":
        raise ValidationError(f"source chain must live on a regular module, not {reg.name}")
    if reg.base.name != mod.base.name or basis_mod.module.name != mod.name:
        raise ValidationError(f"intertwiner needs chains over the same base ({reg.base.name} vs {mod.base.name})")
    if not _same_strands(basis_regular.spec, basis_mod.spec):
        raise GeometryError("intertwiner needs the same geometry and strand objects on both chains")
    if basis_regular.spec.twist is not None or basis_mod.spec.twist is not None:
        raise NotRealizableError("intertwiners are materialized on untwisted chains only")

    fm = mod.fmod.entries
    N = basis_regular.spec.length
    ring = basis_regular.is_ring
    dropped = [0]

    def column(n: int) -> Dict[int, complex]:
        state = basis_regular.states[n]
        A = [state.labels[0]] + [basis_regular.link_ends(state, k)[1] for k in range(N)]
        out: Dict[int, complex] = {}

        def walk(X, k, Ms, us, vs, amp):
            if k == N:
                if ring:
                    if Ms[N] != Ms[0] or us[N] != us[0]:
                        return
                    labels = tuple(Ms[:N])
                else:
                    if us[N] != 0:
                        return
                    labels = tuple(Ms)
                m = basis_mod.find(BasisState(labels, state.links, tuple(vs)))
                if m is None:
                    dropped[0] += 1
                    return
                out[m] = out.get(m, 0.0) + amp
                return
            alpha, M = state.links[k], Ms[k]
            for Mn, n_next in mod.act(X, A[k + 1]).items():
                for u_next in range(n_next):
                    for v in range(mod.action.total(M, alpha, Mn)):
                        value = fm.get((X, Mn, M, A[k], alpha, A[k + 1], us[k], state.homs[k], u_next, v), 0.0)
                        if value == 0:
                            continue
                        walk(X, k + 1, Ms + [Mn], us + [u_next], vs + [v], amp * value)

        for X in mod.ids:
            for M0, n0 in mod.act(X, A[0]).items():
                for u0 in (range(n0) if ring else range(min(n0, 1))):
                    walk(X, 0, [M0], [u0], [], 1.0)
        return out

    columns = parallel_map(column, range(basis_regular.dim))
    rows, cols, vals = [], [], []
    for n, col in enumerate(columns):
        for m, v in col.items():
            if abs(v) > DROP_TOL:
                rows.append(m)
                cols.append(n)
                vals.append(v)
    mat = sp.coo_matrix((np.array(vals, dtype=complex), (np.array(rows, dtype=int), np.array(cols, dtype=int))),
                        shape=(basis_mod.dim, basis_regular.dim)).tocsr()
    if dropped[0]:
        logger.debug(f"🔧 intertwiner: {dropped[0]} paths left the target basis and were dropped")
    logger.debug(f"🔧 intertwiner {reg.name} -> {mod.name}: shape={mat.shape}, nnz={mat.nnz}")
    return IntertwinerMap(matrix=mat, source=basis_regular, target=basis_mod,
                          label=f"W[{reg.name}->{mod.name}]", dropped=dropped[0])


def check_intertwining(W: IntertwinerMap, bonds_source: Sequence[SparseOperator],
                       bonds_target: Sequence[SparseOperator], tol: float = DEFAULT_TOL,
                       name: str = "intertwining") -> CheckReport:
    """W b_i^source = b_i^target W bond by bond."""
    if len(bonds_source) != len(bonds_target):
        raise DimensionMismatchError(f"{len(bonds_source)} source bonds vs {len(bonds_target)} target bonds")
    per = [W.intertwining_residual(a, b) for a, b in zip(bonds_source, bonds_target)]
    worst = max(per) if per else 0.0
    report = CheckReport.from_residual(
        name, worst, tol, checked=len(per),
        details={"per_bond": per, "nnz": int(W.matrix.nnz), "shape": list(W.shape)},
    )
    if W.matrix.nnz == 0:
        report.passed = False
        report.errors.append("intertwiner is identically zero")
    logger.info(report.summary_line())
    return report


# ---------------------------------------------------------------------------
# Gauging Vec_G
# ---------------------------------------------------------------------------

@dataclass
class GaugingMap:
    """W: |g_0 ... g_{N-1}> -> |g_0^-1 g_1, ..., g_{N-1}^-1 g_0> for a finite group G."""
    category: FusionCategory
    intertwiner: IntertwinerMap

    @property
    def matter(self) -> ChainBasis:
        return self.intertwiner.source

    @property
    def gauge(self) -> ChainBasis:
        return self.intertwiner.target

    @property
    def matrix(self) -> sp.csr_matrix:
        return self.intertwiner.matrix

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.intertwiner.apply(vec)

    def product_state(self, local: np.ndarray) -> np.ndarray:
        """Matter product state with the same local vector (indexed by group element) on every site."""
        local = np.asarray(local, dtype=complex)
        index = {g: n for n, g in enumerate(self.category.labels)}
        vec = np.array([np.prod([local[index[g]] for g in s.labels]) for s in self.matter.states], dtype=complex)
        return vec

    def flat_state(self) -> np.ndarray:
        """Normalized equal superposition of gauge configurations with trivial holonomy."""
        cat = self.category
        vec = np.zeros(self.gauge.dim, dtype=complex)
        for n, s in enumerate(self.gauge.states):
            hol = cat.unit
            for g in s.links:
                hol = _group_product(cat, hol, g)
            if hol == cat.unit:
                vec[n] = 1.0
        return vec / np.linalg.norm(vec)


def _group_product(cat: FusionCategory, g: Label, h: Label) -> Label:
    (out,) = cat.ring.fuse(g, h)
    return out


def gauging_map(G: Union[str, FusionCategory], N: int) -> GaugingMap:
    """Vec_G regular chain (matter) to the Vec-module chain (gauge fields) on a ring of N sites."""
    cat = vec_g(group_table(G), name=f"vec_g:{G}") if isinstance(G, str) else G
    reg = regular_module(cat)
    vec = vec_forgetful(cat)
    spec = ChainSpec(length=N, geometry="ring")
    W = intertwiner_mpo(vec, enumerate_basis(reg, spec), enumerate_basis(vec, spec))
    logger.info(f"🔧 gauging map for {cat.name} on {N} sites: {W.shape[1]} -> {W.shape[0]}")
    return GaugingMap(category=cat, intertwiner=W)


def _site_permutation(basis: ChainBasis, fn: Callable[[BasisState], BasisState]) -> SparseOperator:
    rows, cols = [], []
    for n, s in enumerate(basis.states):
        rows.append(basis.state_index(fn(s)))
        cols.append(n)
    return SparseOperator.from_triplets(basis.dim, rows, cols, [1.0] * len(rows))


def matter_right_action(gm: GaugingMap, site: int, h: Label) -> SparseOperator:
    """R_h on one matter site: |g> -> |g h^-1>; neighbouring links follow from the labels."""
    cat, basis = gm.category, gm.matter
    hinv = cat.dual(h)

    def move(s: BasisState) -> BasisState:
        labels = list(s.labels)
        labels[site] = _group_product(cat, labels[site], hinv)
        n = len(labels)
        links = tuple(_group_product(cat, cat.dual(labels[k]), labels[(k + 1) % n]) for k in range(n))
        return BasisState(tuple(labels), links, s.homs)

    return _site_permutation(basis, move)


def matter_left_action(gm: GaugingMap, h: Label) -> SparseOperator:
    """prod_i L_h: |g_i> -> |h g_i> on every matter site."""
    cat = gm.category
    return _site_permutation(
        gm.matter,
        lambda s: BasisState(tuple(_group_product(cat, h, g) for g in s.labels), s.links, s.homs),
    )


def link_action(gm: GaugingMap, link: int, h: Label, side: str) -> SparseOperator:
    """L_h (|g> -> |h g>) or R_h (|g> -> |g h^-1>) on one gauge link."""
    cat = gm.category
    if side not in ("L", "R"):
        raise ValidationError(f"side must be 'L' or 'R', got {side!r}")

    def move(s: BasisState) -> BasisState:
        links = list(s.links)
        g = links[link]
        links[link] = _group_product(cat, h, g) if side == "L" else _group_product(cat, g, cat.dual(h))
        return BasisState(s.labels, tuple(links), s.homs)

    return _site_permutation(gm.gauge, move)


def check_gauging(gm: GaugingMap, tol: float = DEFAULT_TOL) -> CheckReport:
    """W R_h^(i) = R_h^(i-1) L_h^(i) W on links, and W (prod L_h) = W."""
    cat = gm.category
    N = gm.matter.spec.length
    W = gm.matrix
    worst, checked = 0.0, 0
    for h in cat.labels:
        glob = matter_left_action(gm, h)
        diff = W @ glob.matrix - W
        worst = max(worst, float(np.abs(diff.data).max()) if diff.nnz else 0.0)
        checked += 1
        for i in range(N):
            lhs = W @ matter_right_action(gm, i, h).matrix
            rhs = link_action(gm, (i - 1) % N, h, "R").matrix @ link_action(gm, i, h, "L").matrix @ W
            diff = lhs - rhs
            worst = max(worst, float(np.abs(diff.data).max()) if diff.nnz else 0.0)
            checked += 1
    report = CheckReport.from_residual(f"gauging[{cat.name}]", worst, tol, checked=checked,
                                       details={"N": N, "shape": list(gm.intertwiner.shape)})
    logger.info(report.summary_line())
    return report


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

def apply_mpo_to_state(op: Union[SparseOperator, IntertwinerMap, GaugingMap], vec: np.ndarray) -> np.ndarray:
    if isinstance(op, SparseOperator):
        return op @ np.asarray(vec, dtype=complex)
    return op.apply(vec)


def read_state_csv(path: Union[str, Path], dim: Optional[int] = None) -> np.ndarray:
    """Dense state from ``index,re,im`` rows; missing indices are zero."""
    frame = pd.read_csv(path)
    missing = {"index", "re", "im"} - set(frame.columns)
    if missing:
        raise ValidationError(f"{path}: state CSV lacks columns {sorted(missing)}")
    size = int(frame["index"].max()) + 1 if dim is None else dim
    if len(frame) and int(frame["index"].max()) >= size:
        raise DimensionMismatchError(f"{path}: index {int(frame['index'].max())} outside dimension {size}")
    vec = np.zeros(size, dtype=complex)
    vec[frame["index"].to_numpy(dtype=int)] = frame["re"].to_numpy() + 1j * frame["im"].to_numpy()
    return vec


def write_state_csv(vec: np.ndarray, path: Union[str, Path], cutoff: float = 0.0) -> Path:
    """Write ``index,re,im`` rows (UTF-8, LF, %.12e) for entries above ``cutoff``."""
    vec = np.asarray(vec, dtype=complex)
    idx = np.nonzero(np.abs(vec) > cutoff)[0] if cutoff > 0 else np.arange(vec.shape[0])
    frame = pd.DataFrame({"index": idx, "re": vec[idx].real, "im": vec[idx].imag})
    path = Path(path)
    frame.to_csv(path, index=False, float_format="%.12e", lineterminator="\n", encoding="utf-8")
    return path


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 of the normalized vectors."""
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.vdot(a, b)) ** 2 / (na * nb) ** 2)
