"""
Bond Operators and Hamiltonians

Assembles categorically symmetric two-link bonds as sparse matrices on a
ChainBasis. A bond is specified in the fusion channel basis of its two
strands: the coefficient keyed (alpha, alpha', beta, beta', gamma, j, j')
maps the channel (alpha beta -> gamma, j) to (alpha' beta' -> gamma, j').
Matrix elements on the chain follow by recoupling the pair of links with
the module associator on both sides:

    M = F◁^{L alpha' beta'}_R  B  (F◁^{L alpha beta}_R)^{-1}

where rows of F◁ carry the centre label and the two hom vectors.
"""

import logging
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .chain_space import ChainBasis, ChainSpec
from .errors import DimensionMismatchError, ValidationError
from .fusion_core import FusionCategory, Label, _decode, _encode
from .graded import koszul_sign
from .module_data import ModuleCategory
from .parallel import parallel_map

logger = logging.getLogger(__name__)

DROP_TOL = 1e-14
HERMITIAN_TOL = 1e-12

BondKey = Tuple[Label, Label, Label, Label, Label, int, int]

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


# ---------------------------------------------------------------------------
# Sparse operator
# ---------------------------------------------------------------------------

class SparseOperator:
    """Square complex operator stored as CSR; duplicates are summed."""

    def __init__(self, matrix: Any, label: str = ""):
        mat = sp.csr_matrix(matrix, dtype=complex, copy=True)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"operator must be square, got {mat.shape}")
        mat.sum_duplicates()
        mat.data[np.abs(mat.data) < DROP_TOL] = 0.0
        mat.eliminate_zeros()
        self.matrix = mat
        self.label = label

    @classmethod
    def from_triplets(cls, dim: int, rows: Sequence[int], cols: Sequence[int],
                      vals: Sequence[complex], label: str = "") -> "SparseOperator":
        if len(rows) and (max(rows) >= dim or max(cols) >= dim):
            raise DimensionMismatchError(f"triplet index outside dimension {dim}")
        mat = sp.coo_matrix((np.asarray(vals, dtype=complex), (np.asarray(rows, dtype=int),
                                                               np.asarray(cols, dtype=int))),
                            shape=(dim, dim))
        return cls(mat.tocsr(), label)

    @classmethod
    def from_csr(cls, matrix: sp.spmatrix, label: str = "") -> "SparseOperator":
        return cls(matrix, label)

    @classmethod
    def zeros(cls, dim: int, label: str = "") -> "SparseOperator":
        return cls(sp.csr_matrix((dim, dim), dtype=complex), label)

    @classmethod
    def identity(cls, dim: int, label: str = "Id") -> "SparseOperator":
        return cls(sp.identity(dim, dtype=complex, format="csr"), label)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def nnz(self) -> int:
        return self.matrix.nnz

    @property
    def triplets(self) -> List[Tuple[int, int, complex]]:
        coo = self.matrix.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [(int(coo.row[n]), int(coo.col[n]), complex(coo.data[n])) for n in order]

    def to_csr(self) -> sp.csr_matrix:
        return self.matrix.copy()

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def adjoint(self) -> "SparseOperator":
        return SparseOperator(self.matrix.conj().T, f"{self.label}†" if self.label else "")

    def max_abs(self) -> float:
        return float(np.abs(self.matrix.data).max()) if self.matrix.nnz else 0.0

    def max_asymmetry(self) -> float:
        return (self - self.adjoint()).max_abs()

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.max_asymmetry() <= tol

    def _check(self, other: "SparseOperator") -> None:
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension {self.dim} vs {other.dim}")

    def __add__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        return SparseOperator(self.matrix + other.matrix, self.label)

    def __sub__(self, other: "SparseOperator") -> "SparseOperator":
        self._check(other)
        return SparseOperator(self.matrix - other.matrix, self.label)

    def __neg__(self) -> "SparseOperator":
        return SparseOperator(-self.matrix, self.label)

    def __mul__(self, scalar: complex) -> "SparseOperator":
        return SparseOperator(self.matrix * complex(scalar), self.label)

    __rmul__ = __mul__

    def __matmul__(self, other: Union["SparseOperator", np.ndarray]):
        if isinstance(other, SparseOperator):
            self._check(other)
            return SparseOperator(self.matrix @ other.matrix, self.label)
        vec = np.asarray(other)
        if vec.shape[0] != self.dim:
            raise DimensionMismatchError(f"vector of length {vec.shape[0]} on dimension {self.dim}")
        return self.matrix @ vec

    def __repr__(self) -> str:
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz}, label={self.label!r})"

    def to_matrix_market(self, path: Union[str, Path]) -> Path:
        """Write ``row col re im`` lines with 1-based indices."""
        path = Path(path)
        trips = self.triplets
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("%%MatrixMarket matrix coordinate complex general\n")
            fh.write(f"{self.dim} {self.dim} {len(trips)}\n")
            for r, c, v in trips:
                fh.write(f"{r + 1} {c + 1} {v.real:.12e} {v.imag:.12e}\n")
        return path


def pauli_string(N: int, ops: Dict[int, str], coeff: complex = 1.0) -> SparseOperator:
    """Tensor product of Pauli matrices on N qubits, site 0 most significant."""
    mats = []
    for site in range(N):
        name = ops.get(site, "I")
        if name not in PAULI:
            raise ValidationError(f"unknown Pauli {name!r}")
        mats.append(sp.csr_matrix(PAULI[name]))
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return SparseOperator(out * complex(coeff), label=" ".join(f"{v}{k}" for k, v in sorted(ops.items())))


def local_unitary(N: int, blocks: Dict[int, np.ndarray], local_dim: int = 2) -> SparseOperator:
    """Kronecker product with ``blocks[site]`` on the listed sites and identity elsewhere."""
    out = None
    for site in range(N):
        m = sp.csr_matrix(blocks.get(site, np.eye(local_dim)), dtype=complex)
        out = m if out is None else sp.kron(out, m, format="csr")
    return SparseOperator(out, label="local unitary")


def conjugate(op: SparseOperator, U: Union[SparseOperator, np.ndarray]) -> SparseOperator:
    """U op U†."""
    U = U if isinstance(U, SparseOperator) else SparseOperator(U)
    return U @ op @ U.adjoint()


# ---------------------------------------------------------------------------
# Bond and Hamiltonian specifications
# ---------------------------------------------------------------------------

@dataclass
class BondSpec:
    """Channel-basis coefficients of a two-link bond."""
    coeffs: Dict[BondKey, complex]
    name: str = "bond"

    def validate(self, base: FusionCategory) -> None:
        for key in self.coeffs:
            alpha, alpha_t, beta, beta_t, gamma, j, j_t = key
            base.require(alpha, alpha_t, beta, beta_t, gamma)
            n_in, n_out = base.N(alpha, beta, gamma), base.N(alpha_t, beta_t, gamma)
            if n_in == 0 or n_out == 0:
                raise ValidationError(f"bond {self.name}: {gamma!r} is not a channel of both pairs in {key}")
            if not (0 <= j < n_in and 0 <= j_t < n_out):
                raise ValidationError(f"bond {self.name}: multiplicity index out of range in {key}")

    def by_input(self) -> Dict[Tuple[Label, Label], Dict[Tuple[Label, Label], Dict[Tuple[Label, int, int], complex]]]:
        """Coefficients grouped as {(alpha, beta): {(alpha', beta'): {(gamma, j, j'): value}}}."""
        out: Dict = {}
        for (alpha, alpha_t, beta, beta_t, gamma, j, j_t), value in self.coeffs.items():
            out.setdefault((alpha, beta), {}).setdefault((alpha_t, beta_t), {})[(gamma, j, j_t)] = complex(value)
        return out

    def __add__(self, other: "BondSpec") -> "BondSpec":
        coeffs = dict(self.coeffs)
        for key, v in other.coeffs.items():
            coeffs[key] = coeffs.get(key, 0.0) + v
        return BondSpec(coeffs, name=f"{self.name}+{other.name}")

    def scaled(self, factor: complex, name: Optional[str] = None) -> "BondSpec":
        return BondSpec({k: v * factor for k, v in self.coeffs.items()}, name=name or self.name)

    @classmethod
    def channel(cls, alpha: Label, beta: Label, weights: Dict[Label, complex], base: FusionCategory,
                name: str = "channel") -> "BondSpec":
        """Diagonal bond weighting each fusion channel of alpha ⊗ beta."""
        coeffs = {}
        for gamma, w in weights.items():
            for j in range(base.N(alpha, beta, gamma)):
                coeffs[(alpha, alpha, beta, beta, gamma, j, j)] = complex(w)
        return cls(coeffs, name=name)

    def to_rows(self) -> List[list]:
        return [
            [_encode(x) for x in key[:5]] + [key[5], key[6], float(np.real(v)), float(np.imag(v))]
            for key, v in self.coeffs.items()
        ]

    @classmethod
    def from_rows(cls, rows: List[list], name: str = "bond") -> "BondSpec":
        coeffs = {}
        for row in rows:
            if len(row) != 9:
                raise ValidationError(f"bond row needs 9 fields, got {len(row)}")
            key = tuple(_decode(x) for x in row[:5]) + (int(row[5]), int(row[6]))
            coeffs[key] = coeffs.get(key, 0.0) + complex(row[7], row[8])
        return cls(coeffs, name=name)


@dataclass
class HamiltonianTerm:
    J: complex
    bond: BondSpec
    sites: Optional[List[int]] = None


@dataclass
class HamiltonianSpec:
    """H = sum over terms and sites of J_a b_{a,i}."""
    terms: List[HamiltonianTerm]
    chain: ChainSpec
    name: str = "hamiltonian"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "chain": self.chain.to_dict(),
            "terms": [
                {"J": [float(np.real(t.J)), float(np.imag(t.J))], "bond": t.bond.to_rows(),
                 "name": t.bond.name, "sites": t.sites}
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HamiltonianSpec":
        terms = []
        for n, item in enumerate(data.get("terms", [])):
            J = item.get("J", 1.0)
            J = complex(J[0], J[1]) if isinstance(J, (list, tuple)) else complex(J)
            terms.append(HamiltonianTerm(J=J, bond=BondSpec.from_rows(item["bond"], item.get("name", f"b{n + 1}")),
                                         sites=item.get("sites")))
        return cls(terms=terms, chain=ChainSpec.from_dict(data["chain"]), name=data.get("name", "hamiltonian"))


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

@dataclass
class _LocalMap:
    matrix: np.ndarray
    rows_out: list
    in_index: Dict[tuple, int]


def _local_maps(mod: ModuleCategory, left: Label, alpha: Label, beta: Label, right: Label,
                targets: Dict[Tuple[Label, Label], Dict[Tuple[Label, int, int], complex]]):
    f_in, rows_in, cols_in = mod.fmod_block(left, alpha, beta, right)
    if f_in.size == 0:
        return []
    if f_in.shape[0] != f_in.shape[1]:
        raise ValidationError(
            f"F◁^{{{left} {alpha} {beta}}}_{right} is {f_in.shape[0]}x{f_in.shape[1]}; bonds need square blocks"
        )
    inv = np.linalg.inv(f_in)
    col_in = {c: n for n, c in enumerate(cols_in)}
    in_index = {r: n for n, r in enumerate(rows_in)}
    out = []
    for (alpha_t, beta_t), table in targets.items():
        f_out, rows_out, cols_out = mod.fmod_block(left, alpha_t, beta_t, right)
        if f_out.size == 0:
            continue
        B = np.zeros((len(cols_out), len(cols_in)), dtype=complex)
        for s, (gamma, j_t, k) in enumerate(cols_out):
            for (g, j, jt), value in table.items():
                if g == gamma and jt == j_t and (gamma, j, k) in col_in:
                    B[s, col_in[(gamma, j, k)]] += value
        M = f_out @ B @ inv
        out.append((alpha_t, beta_t, _LocalMap(M, rows_out, in_index)))
    return out


def _closure_sign(basis: ChainBasis, n_in: int, n_out: int) -> int:
    """Koszul sign of a closure bond acting on links N-1 (first) and 0."""
    N = basis.spec.length
    order = [N - 1] + list(range(N - 1))
    return koszul_sign(basis.link_parities(n_in), order) * koszul_sign(basis.link_parities(n_out), order)


def build_bond(mod: ModuleCategory, basis: ChainBasis, bond: BondSpec, site: int) -> SparseOperator:
    """Matrix of ``bond`` at ``site`` in the chain basis."""
    bond.validate(mod.base)
    groups = bond.by_input()
    closure = basis.is_ring and site == 0
    graded_closure = closure and mod.graded
    character = basis.twist.character if closure else None
    cache: Dict[tuple, list] = {}
    rows, cols, vals = [], [], []
    for n, state in enumerate(basis.states):
        loc = basis.local(state, site)
        targets = groups.get((loc.alpha, loc.beta))
        if not targets:
            continue
        key = (loc.left, loc.alpha, loc.beta, loc.right)
        if key not in cache:
            cache[key] = _local_maps(mod, loc.left, loc.alpha, loc.beta, loc.right, targets)
        for alpha_t, beta_t, lm in cache[key]:
            col = lm.in_index.get((loc.center, loc.va, loc.vb))
            if col is None:
                continue
            for r in np.nonzero(np.abs(lm.matrix[:, col]) > DROP_TOL)[0]:
                center, va, vb = lm.rows_out[r]
                m = basis.replace(state, site, alpha_t, va, center, beta_t, vb)
                if m is None:
                    continue
                value = lm.matrix[r, col]
                if graded_closure:
                    value *= _closure_sign(basis, n, m)
                if character is not None:
                    value *= character[loc.beta] / character[beta_t]
                rows.append(m)
                cols.append(n)
                vals.append(value)
    return SparseOperator.from_triplets(basis.dim, rows, cols, vals, label=f"{bond.name}@{site}")


def bond_operators(mod: ModuleCategory, basis: ChainBasis, bond: BondSpec,
                   sites: Optional[List[int]] = None) -> List[SparseOperator]:
    """``bond`` at every listed site (default: all bond sites), assembled in parallel."""
    sites = basis.bond_sites() if sites is None else list(sites)
    return parallel_map(lambda i: build_bond(mod, basis, bond, i), sites)


def build_hamiltonian(spec: HamiltonianSpec, mod: ModuleCategory, basis: ChainBasis) -> SparseOperator:
    """H = sum_a sum_i J_a b_{a,i}; warns when real couplings give a non-Hermitian result."""
    tasks = [(t, i) for t in spec.terms for i in (basis.bond_sites() if t.sites is None else t.sites)]
    parts = parallel_map(lambda task: build_bond(mod, basis, task[0].bond, task[1]) * task[0].J, tasks)
    H = SparseOperator.zeros(basis.dim, label=spec.name)
    for part in parts:
        H = H + part
    H.label = spec.name
    if all(abs(np.imag(t.J)) == 0 for t in spec.terms):
        asym = H.max_asymmetry()
        if asym > HERMITIAN_TOL:
            msg = f"{spec.name}: assembled Hamiltonian is not Hermitian (max asymmetry {asym:.3e})"
            logger.warning(f"⚠️ {msg}")
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
    logger.debug(f"🔧 {spec.name}: dim={H.dim}, nnz={H.nnz}, {len(tasks)} bond terms")
    return H


def support_links(op: SparseOperator, basis: ChainBasis) -> List[int]:
    """Links whose data differ between some pair of states connected by ``op``.

    A changed module label counts against both links that touch it.
    """
    n_links = basis.spec.n_links
    touched = set()
    for r, c, _ in op.triplets:
        if r == c:
            continue
        a, b = basis.states[r], basis.states[c]
        for k in range(n_links):
            if a.links[k] != b.links[k] or a.homs[k] != b.homs[k]:
                touched.add(k)
        for k, (x, y) in enumerate(zip(a.labels, b.labels)):
            if x == y:
                continue
            if k >= 1 or basis.is_ring:
                touched.add((k - 1) % n_links)
            if k < n_links:
                touched.add(k)
    return sorted(touched)
