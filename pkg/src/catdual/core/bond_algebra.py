"""
Bond Algebras

Numerical bases of the algebra generated by a list of bond operators and the
structure constants of that basis. Two realizations of the same bond algebra
built from the same generator list produce identical structure constants
entrywise, which is how dual models are compared without an isomorphism
search.

Basis elements are products of generators ("words"). Words are explored in
graded-lexicographic order and a word is kept when its operator is linearly
independent of the words kept before it, so the selection is the same in
every faithful realization.

Words stay sparse; vectorized operators are only densified a chunk at a time
when they are orthogonalized against the basis found so far.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .checks import CheckReport
from .errors import DimensionMismatchError, RankDeficiencyError, ValidationError
from .operators import SparseOperator
from .parallel import parallel_map

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]

DEFAULT_DEPTH = 3
DEFAULT_TOL = 1e-10
MAX_ELEMENTS = 4096
CHUNK = 128


def _columns(ops: Sequence[SparseOperator], D: int) -> sp.csc_matrix:
    """Vectorized operators as sparse columns, scaled so <A, B> = Tr(A† B) / D is a dot product."""
    rows, cols, vals = [], [], []
    for n, op in enumerate(ops):
        coo = op.matrix.tocoo()
        rows.append(coo.row.astype(np.int64) * D + coo.col)
        cols.append(np.full(coo.nnz, n, dtype=np.int64))
        vals.append(coo.data)
    if not ops:
        return sp.csc_matrix((D * D, 0), dtype=complex)
    mat = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                        shape=(D * D, len(ops)), dtype=complex)
    return (mat.tocsc() / np.sqrt(D)).tocsc()


def hs_inner(a: SparseOperator, b: SparseOperator) -> complex:
    """Hilbert-Schmidt inner product normalized by the Hilbert-space dimension."""
    return complex((a.matrix.conj().multiply(b.matrix)).sum() / a.dim)


def word_label(word: Word, names: Optional[Sequence[str]] = None) -> str:
    if not word:
        return "Id"
    return "·".join(names[i] if names else f"b{i}" for i in word)


@dataclass
class AlgebraBasis:
    """Linearly independent words of the generators together with their Gram matrix."""
    elements: List[SparseOperator]
    words: List[Word]
    gram: np.ndarray
    depth: int
    generators: List[SparseOperator] = field(default_factory=list)
    tol: float = DEFAULT_TOL

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].dim

    def labels(self) -> List[str]:
        names = [g.label or f"b{i}" for i, g in enumerate(self.generators)]
        return [word_label(w, names) for w in self.words]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "size": self.size,
            "depth": self.depth,
            "dim": self.dim,
            "words": [list(w) for w in self.words],
            "gram_condition": float(np.linalg.cond(self.gram)) if self.size else 0.0,
        }


@dataclass
class StructureConstants:
    """f[x, y, z] with O_x O_y = sum_z f[x, y, z] O_z wherever ``defined[x, y]``."""
    f: np.ndarray
    defined: np.ndarray
    words: List[Word]
    residual: float
    n_generators: int
    depth: int

    @property
    def size(self) -> int:
        return self.f.shape[0]

    def to_dict(self, cutoff: float = 1e-12) -> Dict[str, Any]:
        """Sparse JSON form: one entry per nonzero coefficient."""
        entries = []
        for x, y, z in zip(*np.nonzero(np.abs(self.f) > cutoff)):
            v = self.f[x, y, z]
            entries.append([int(x), int(y), int(z), float(v.real), float(v.imag)])
        return {
            "size": self.size,
            "depth": self.depth,
            "generators": self.n_generators,
            "words": [list(w) for w in self.words],
            "defined_pairs": int(self.defined.sum()),
            "residual": float(self.residual),
            "f": entries,
        }


class _Orthonormalizer:
    """Dense orthonormal columns grown block by block; rejects dependent candidates in order."""

    def __init__(self, rows: int, tol: float):
        self.rows = rows
        self.tol = tol
        self.blocks: List[np.ndarray] = []

    def _project(self, block: np.ndarray) -> np.ndarray:
        for Q in self.blocks:
            block -= Q @ (Q.conj().T @ block)
        return block

    def offer(self, block: np.ndarray, limit: int) -> List[int]:
        """Orthogonalize the columns of ``block`` and keep the independent ones, at most ``limit``."""
        norms = np.linalg.norm(block, axis=0)
        block = self._project(self._project(block))
        fresh = np.empty((self.rows, block.shape[1]), dtype=complex)
        kept: List[int] = []
        for j in range(block.shape[1]):
            if len(kept) >= limit:
                break
            if norms[j] <= self.tol:
                continue
            r = block[:, j]
            m = len(kept)
            for _ in range(2):
                if m:
                    r = r - fresh[:, :m] @ (fresh[:, :m].conj().T @ r)
            rn = np.linalg.norm(r)
            if rn <= self.tol * max(1.0, norms[j]):
                continue
            fresh[:, m] = r / rn
            kept.append(j)
        if kept:
            self.blocks.append(fresh[:, :len(kept)].copy())
        return kept


def generate_algebra(bonds: Sequence[SparseOperator], depth: int = DEFAULT_DEPTH,
                     tol: float = DEFAULT_TOL, max_elements: int = MAX_ELEMENTS,
                     dim: Optional[int] = None) -> AlgebraBasis:
    """Basis of span{Id, products of at most ``depth`` bonds}.

    ``dim`` fixes the Hilbert-space dimension when ``bonds`` is empty.

    A candidate word w·g is only formed from words w that were kept, which
    spans the same space as all words of that length.
    """
    bonds = list(bonds)
    if depth < 1:
        raise ValidationError(f"depth must be at least 1, got {depth}")
    if not bonds and dim is None:
        raise ValidationError("an empty generator list needs an explicit dimension")
    D = bonds[0].dim if bonds else int(dim)
    for b in bonds:
        if b.dim != D:
            raise DimensionMismatchError(f"bond {b.label!r} has dimension {b.dim}, expected {D}")

    identity = SparseOperator.identity(D)
    ortho = _Orthonormalizer(D * D, tol)
    elements: List[SparseOperator] = []
    words: List[Word] = []

    def offer(candidates: List[Tuple[Word, SparseOperator]]) -> List[Tuple[Word, SparseOperator]]:
        kept = []
        for start in range(0, len(candidates), CHUNK):
            room = max_elements - len(elements)
            if room <= 0:
                break
            chunk = candidates[start:start + CHUNK]
            dense = _columns([op for _, op in chunk], D).toarray()
            for j in ortho.offer(dense, room):
                word, op = chunk[j]
                elements.append(op)
                words.append(word)
                kept.append((word, op))
        return kept

    frontier = offer([((), identity)])
    for length in range(1, depth + 1):
        pending = [(w + (g,), op, bonds[g]) for w, op in frontier for g in range(len(bonds))]
        products = parallel_map(lambda c: c[1] @ c[2], pending)
        frontier = offer([(word, prod) for (word, _, _), prod in zip(pending, products)])
        if len(elements) >= max_elements:
            logger.warning(f"⚠️ bond algebra truncated at {max_elements} elements (depth {length})")
            break
        if not frontier:
            break

    S = _columns(elements, D)
    gram = (S.conj().T @ S).toarray()
    logger.debug(f"🔧 bond algebra: {len(elements)} elements from {len(bonds)} generators, depth {depth}")
    return AlgebraBasis(elements=elements, words=words, gram=gram, depth=depth,
                        generators=bonds, tol=tol)


def structure_constants(ab: AlgebraBasis, tol: float = DEFAULT_TOL,
                        all_pairs: bool = False) -> StructureConstants:
    """Least-squares expansion of products O_x O_y in the basis.

    Pairs whose combined word length fits in the depth must be reproduced.
    With ``all_pairs`` every product is expanded and longer ones are kept
    when they happen to lie in the span.
    """
    n = ab.size
    D = ab.dim
    S = _columns(ab.elements, D)
    Q, R = la.qr(S.toarray(), mode="economic")
    pivots = np.abs(np.diag(R))
    if n and pivots.min() <= tol:
        x = int(np.argmin(pivots))
        raise RankDeficiencyError(f"basis element {word_label(ab.words[x])} is dependent on earlier ones",
                                  product=ab.words[x])
    lengths = [len(w) for w in ab.words]
    pairs = [(x, y) for x in range(n) for y in range(n)
             if all_pairs or lengths[x] + lengths[y] <= ab.depth]

    def expand(chunk: List[Tuple[int, int]]) -> Tuple[np.ndarray, np.ndarray]:
        P = _columns([ab.elements[x] @ ab.elements[y] for x, y in chunk], D)
        coeffs = la.solve_triangular(R, (P.conj().T @ Q).conj().T)
        diff = S @ coeffs - P.toarray()
        return coeffs, np.linalg.norm(diff, axis=0)

    chunks = [pairs[k:k + CHUNK] for k in range(0, len(pairs), CHUNK)]
    results = parallel_map(expand, chunks)
    f = np.zeros((n, n, n), dtype=complex)
    defined = np.zeros((n, n), dtype=bool)
    worst = 0.0
    for chunk, (coeffs, res) in zip(chunks, results):
        for col, (x, y) in enumerate(chunk):
            r = float(res[col])
            if r <= tol:
                f[x, y] = coeffs[:, col]
                defined[x, y] = True
                worst = max(worst, r)
            elif lengths[x] + lengths[y] <= ab.depth:
                label = f"{word_label(ab.words[x])} * {word_label(ab.words[y])}"
                raise RankDeficiencyError(f"product {label} is not reproduced by the basis (residual {r:.3e})",
                                          product=(ab.words[x], ab.words[y]))
    f.real[np.abs(f.real) < tol] = 0.0
    f.imag[np.abs(f.imag) < tol] = 0.0
    logger.debug(f"🔧 structure constants: {int(defined.sum())}/{len(pairs)} pairs closed, residual {worst:.2e}")
    return StructureConstants(f=f, defined=defined, words=list(ab.words), residual=worst,
                              n_generators=len(ab.generators), depth=ab.depth)


@dataclass
class AlgebraComparison:
    isomorphic_as_presented: bool
    max_deviation: float
    tol: float
    size_a: int
    size_b: int
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "isomorphic_as_presented": self.isomorphic_as_presented,
            "max_deviation": float(self.max_deviation),
            "tol": self.tol,
            "size_a": self.size_a,
            "size_b": self.size_b,
            "reason": self.reason,
        }


def compare_algebras(a: StructureConstants, b: StructureConstants, tol: float = DEFAULT_TOL) -> AlgebraComparison:
    """Entrywise comparison under the generator-induced basis ordering."""
    if a.n_generators != b.n_generators or a.depth != b.depth:
        raise DimensionMismatchError(
            f"algebras presented differently: {a.n_generators} vs {b.n_generators} generators, "
            f"depth {a.depth} vs {b.depth}"
        )
    if a.words != b.words:
        reason = f"different basis words ({a.size} vs {b.size} elements)"
        logger.info(f"❌ {reason}")
        return AlgebraComparison(False, float("inf"), tol, a.size, b.size, reason)
    if not np.array_equal(a.defined, b.defined):
        reason = "products close in one realization but not the other"
        return AlgebraComparison(False, float("inf"), tol, a.size, b.size, reason)
    dev = float(np.abs(a.f - b.f).max()) if a.size else 0.0
    ok = dev <= tol
    logger.info(f"{'✅' if ok else '❌'} structure constants differ by at most {dev:.3e}")
    return AlgebraComparison(ok, dev, tol, a.size, b.size, "" if ok else "structure constants differ")


def check_associativity(sc: StructureConstants, tol: float = DEFAULT_TOL, limit: int = 16) -> CheckReport:
    """(O_x O_y) O_z = O_x (O_y O_z) through f, over the first ``limit`` elements."""
    n = min(sc.size, limit)
    worst, checked = 0.0, 0
    for x in range(n):
        for y in range(n):
            if not sc.defined[x, y]:
                continue
            left_w = np.nonzero(np.abs(sc.f[x, y]) > 0)[0]
            for z in range(n):
                if not sc.defined[y, z]:
                    continue
                right_w = np.nonzero(np.abs(sc.f[y, z]) > 0)[0]
                if not (sc.defined[left_w, z].all() and sc.defined[x, right_w].all()):
                    continue
                lhs = sc.f[x, y, left_w] @ sc.f[left_w, z, :]
                rhs = sc.f[y, z, right_w] @ sc.f[x, right_w, :]
                worst = max(worst, float(np.abs(lhs - rhs).max()))
                checked += 1
    report = CheckReport.from_residual("associativity", worst, tol, checked=checked,
                                       details={"elements": n})
    logger.debug(report.summary_line())
    return report
