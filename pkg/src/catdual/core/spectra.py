"""
Spectra and Duality Reports

Exact diagonalization of chain Hamiltonians, block decomposition by a set of
commuting symmetry operators, and the sector-by-sector comparison of two
dual realizations.

Sector labels are joint eigenvalues of the realized symmetry operators
together with the boundary twist of the ring, e.g.
``twist=m;U_m=-1.000000``.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .errors import CommutatorError, NonHermitianError
from .operators import SparseOperator
from .parallel import parallel_map

logger = logging.getLogger(__name__)

DENSE_LIMIT = 4096
HERMITIAN_TOL = 1e-10
SPECTRAL_TOL = 1e-8
LABEL_DECIMALS = 6

SECTOR_NOTE = (
    "sector labels are joint eigenvalues of the realized symmetry operators "
    "plus twist labels, not tube-algebra idempotents"
)


def format_eigenvalue(z: complex) -> str:
    re = round(float(np.real(z)), LABEL_DECIMALS) + 0.0
    im = round(float(np.imag(z)), LABEL_DECIMALS) + 0.0
    if im == 0.0:
        return f"{re:+.{LABEL_DECIMALS}f}"
    return f"{re:+.{LABEL_DECIMALS}f}{im:+.{LABEL_DECIMALS}f}i"


def twist_text(twist: Any) -> str:
    if twist is None:
        return "none"
    if isinstance(twist, tuple):
        return ",".join(twist_text(x) for x in twist)
    return str(twist)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass
class SpectrumResult:
    """Ascending eigenvalues, optionally with eigenvectors as columns."""
    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    sectors: Optional[List[str]] = None

    def __len__(self) -> int:
        return len(self.eigenvalues)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def to_frame(self) -> pd.DataFrame:
        sectors = self.sectors if self.sectors is not None else [""] * len(self.eigenvalues)
        return pd.DataFrame({
            "index": np.arange(len(self.eigenvalues)),
            "eigenvalue": self.eigenvalues,
            "sector": sectors,
        })

    def to_csv(self, path: Union[str, Path]) -> Path:
        """UTF-8, LF line ends, %.12e floats; identical inputs give identical bytes."""
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format="%.12e", lineterminator="\n", encoding="utf-8")
        return path


@dataclass
class SectorBlock:
    label: str
    dimension: int
    eigenvalues: np.ndarray
    twist: Any = None
    charges: Dict[str, complex] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "dimension": self.dimension,
            "twist": twist_text(self.twist),
            "charges": {k: format_eigenvalue(v) for k, v in self.charges.items()},
            "eigenvalues": [float(x) for x in self.eigenvalues],
        }


@dataclass
class SectorDecomposition:
    blocks: List[SectorBlock]
    dim: int
    note: str = SECTOR_NOTE

    @property
    def labels(self) -> List[str]:
        return [b.label for b in self.blocks]

    def block(self, label: str) -> SectorBlock:
        for b in self.blocks:
            if b.label == label:
                return b
        raise KeyError(label)

    def spectrum(self) -> np.ndarray:
        """All block eigenvalues as one sorted array."""
        if not self.blocks:
            return np.zeros(0)
        return np.sort(np.concatenate([b.eigenvalues for b in self.blocks]))

    def to_spectrum_result(self, metadata: Optional[Dict[str, Any]] = None) -> SpectrumResult:
        pairs = sorted(((float(e), b.label) for b in self.blocks for e in b.eigenvalues), key=lambda p: p[0])
        return SpectrumResult(np.array([p[0] for p in pairs]), metadata=dict(metadata or {}),
                              sectors=[p[1] for p in pairs])

    @classmethod
    def merge(cls, parts: Sequence["SectorDecomposition"]) -> "SectorDecomposition":
        """Union of decompositions of different twisted sectors."""
        blocks = [b for p in parts for b in p.blocks]
        return cls(blocks=blocks, dim=sum(p.dim for p in parts))

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "note": self.note, "blocks": [b.to_dict() for b in self.blocks]}


# ---------------------------------------------------------------------------
# Diagonalization
# ---------------------------------------------------------------------------

def _require_hermitian(H: SparseOperator, tol: float) -> None:
    asym = H.max_asymmetry()
    if asym > tol:
        raise NonHermitianError(f"{H.label or 'operator'} is not Hermitian (max asymmetry {asym:.3e})",
                                asymmetry=asym)


def diagonalize(H: SparseOperator, tol: float = HERMITIAN_TOL, vectors: bool = False,
                count: int = 6, dense_limit: int = DENSE_LIMIT) -> SpectrumResult:
    """Full spectrum for D <= dense_limit, otherwise the ``count`` lowest eigenvalues."""
    _require_hermitian(H, tol)
    meta = {"dim": H.dim, "label": H.label}
    if H.dim <= dense_limit:
        dense = H.to_dense()
        dense = (dense + dense.conj().T) / 2
        if vectors:
            w, v = sla.eigh(dense)
            return SpectrumResult(w, v, meta)
        return SpectrumResult(sla.eigh(dense, eigvals_only=True), None, meta)
    k = min(count, H.dim - 2)
    logger.info(f"🔧 {H.label}: D={H.dim} above the dense limit, computing {k} lowest eigenvalues")
    w, v = spla.eigsh(H.to_csr(), k=k, which="SA")
    order = np.argsort(w)
    meta["partial"] = True
    return SpectrumResult(w[order], v[:, order] if vectors else None, meta)


def _eigenspaces(M: np.ndarray) -> List[Tuple[complex, np.ndarray]]:
    """Orthonormal eigenspaces of a normal matrix, eigenvalues rounded for grouping."""
    if np.abs(M - M.conj().T).max(initial=0.0) <= 1e-10:
        w, v = np.linalg.eigh((M + M.conj().T) / 2)
    else:
        w, v = np.linalg.eig(M)
    groups: Dict[Tuple[float, float], List[int]] = {}
    for n, z in enumerate(w):
        key = (round(float(z.real), LABEL_DECIMALS) + 0.0, round(float(z.imag), LABEL_DECIMALS) + 0.0)
        groups.setdefault(key, []).append(n)
    out = []
    for key in sorted(groups):
        q, _ = np.linalg.qr(v[:, groups[key]])
        out.append((complex(key[0], key[1]), q))
    return out


def sector_decompose(H: SparseOperator, symmetries: Union[Dict[str, SparseOperator], Sequence[SparseOperator]],
                     tol: float = HERMITIAN_TOL, twist: Any = None) -> SectorDecomposition:
    """Block-diagonalize H on the joint eigenspaces of commuting symmetry operators."""
    items = list(symmetries.items()) if isinstance(symmetries, dict) else [(s.label, s) for s in symmetries]
    _require_hermitian(H, tol)
    for name, U in items:
        if U.dim != H.dim:
            raise CommutatorError(f"{name} has dimension {U.dim}, H has {H.dim}", pair=(name, "H"))
        norm = (U @ H - H @ U).max_abs()
        if norm > tol:
            raise CommutatorError(f"[{name}, H] = {norm:.3e} exceeds {tol:.1e}", pair=(name, "H"), norm=norm)
    for i, (a, Ua) in enumerate(items):
        for b, Ub in items[i + 1:]:
            norm = (Ua @ Ub - Ub @ Ua).max_abs()
            if norm > tol:
                raise CommutatorError(f"[{a}, {b}] = {norm:.3e} exceeds {tol:.1e}", pair=(a, b), norm=norm)

    blocks: List[Tuple[Dict[str, complex], np.ndarray]] = [({}, np.eye(H.dim, dtype=complex))]
    for name, U in items:
        dense = U.to_dense()
        refined = []
        for charges, Q in blocks:
            for value, q in _eigenspaces(Q.conj().T @ dense @ Q):
                refined.append(({**charges, name: value}, Q @ q))
        blocks = refined

    Hd = H.to_dense()

    def solve(block):
        charges, Q = block
        h = Q.conj().T @ Hd @ Q
        return np.sort(sla.eigh((h + h.conj().T) / 2, eigvals_only=True)) if h.size else np.zeros(0)

    spectra = parallel_map(solve, blocks)
    out = []
    for (charges, Q), eigs in zip(blocks, spectra):
        label = ";".join([f"twist={twist_text(twist)}"] + [f"{k}={format_eigenvalue(v)}" for k, v in charges.items()])
        out.append(SectorBlock(label=label, dimension=Q.shape[1], eigenvalues=eigs, twist=twist, charges=charges))
    logger.debug(f"🔧 {H.label}: {len(out)} sectors, dims {[b.dimension for b in out]}")
    return SectorDecomposition(blocks=out, dim=H.dim)


# ---------------------------------------------------------------------------
# Spectral comparison
# ---------------------------------------------------------------------------

def degeneracy_strip(eigs: Sequence[float], tol: float = SPECTRAL_TOL) -> np.ndarray:
    """Distinct values of a spectrum; values closer than ``tol`` to the previous one merge."""
    values = np.sort(np.asarray(eigs, dtype=float))
    if values.size == 0:
        return values
    keep = [values[0]]
    for x in values[1:]:
        if x - keep[-1] > tol:
            keep.append(x)
    return np.array(keep)


def multiset_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """max |a_i - b_i| after sorting; infinite when the sizes differ."""
    a, b = np.sort(np.asarray(a, dtype=float)), np.sort(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        return float("inf")
    return float(np.abs(a - b).max()) if a.size else 0.0


def _block_distance(a: SectorBlock, b: SectorBlock, tol: float) -> Tuple[float, str]:
    if a.dimension == b.dimension:
        return multiset_distance(a.eigenvalues, b.eigenvalues), "exact"
    return multiset_distance(degeneracy_strip(a.eigenvalues, tol), degeneracy_strip(b.eigenvalues, tol)), "distinct"


@dataclass
class DualityReport:
    passed: bool
    mode: str
    pairing: Dict[str, str] = field(default_factory=dict)
    deviations: Dict[str, float] = field(default_factory=dict)
    unmatched: List[str] = field(default_factory=list)
    max_deviation: float = 0.0
    tol: float = SPECTRAL_TOL
    sectors_a: int = 0
    sectors_b: int = 0
    dims: Tuple[int, int] = (0, 0)
    notes: List[str] = field(default_factory=lambda: [SECTOR_NOTE])
    models: Tuple[str, str] = ("", "")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": 1,
            "models": list(self.models),
            "pass": self.passed,
            "mode": self.mode,
            "tol": self.tol,
            "max_deviation": float(self.max_deviation),
            "sectors": [self.sectors_a, self.sectors_b],
            "dims": list(self.dims),
            "pairing": dict(self.pairing),
            "deviations": {k: float(v) for k, v in self.deviations.items()},
            "unmatched": list(self.unmatched),
            "notes": list(self.notes),
        }

    def summary_line(self) -> str:
        mark = "✅" if self.passed else "❌"
        return (f"{mark} duality {self.models[0]} <-> {self.models[1]}: mode={self.mode}, "
                f"{len(self.pairing)} pairs, max deviation {self.max_deviation:.3e} (tol {self.tol:.1e})")


def verify_duality(model_a: SectorDecomposition, model_b: SectorDecomposition,
                   pairing_hint: Optional[Dict[str, str]] = None, tol: float = SPECTRAL_TOL,
                   names: Tuple[str, str] = ("A", "B"), by_charges: bool = False,
                   embed: bool = False) -> DualityReport:
    """Greedy sector pairing of two decompositions covering all of their twists.

    Sectors pair when their spectra agree as multisets (equal dimensions) or
    after removing degeneracies (different dimensions). With ``by_charges``
    a sector may only pair with the sector of equal symmetry charges; with
    ``embed`` every sector of the smaller family must equal a distinct
    sector of the larger one. Otherwise, when the sector counts differ, the
    full spectra are compared instead and, failing that, their distinct values.
    """
    report = DualityReport(passed=False, mode="sectors", tol=tol, sectors_a=len(model_a.blocks),
                           sectors_b=len(model_b.blocks), dims=(model_a.dim, model_b.dim), models=names)
    if embed and len(model_a.blocks) != len(model_b.blocks):
        return _embed(model_a, model_b, report)
    if len(model_a.blocks) != len(model_b.blocks):
        return _compare_whole(model_a, model_b, report)
    if by_charges:
        report.mode = "charges"
        pairing_hint = _charge_pairing(model_a, model_b, report)

    free = {b.label: b for b in model_b.blocks}
    worst = 0.0
    if pairing_hint:
        for la, lb in pairing_hint.items():
            a, b = model_a.block(la), free.pop(lb, None)
            if b is None:
                report.unmatched.append(f"{la}: hinted partner {lb} is missing or already used")
                continue
            dev, kind = _block_distance(a, b, tol)
            report.pairing[la] = lb
            report.deviations[la] = dev
            worst = max(worst, dev)
            if dev > tol:
                report.unmatched.append(f"{la} -> {lb}: deviation {dev:.3e} ({kind})")
    for a in model_a.blocks:
        if a.label in report.pairing:
            continue
        best, best_dev, best_kind = None, float("inf"), ""
        for lb, b in free.items():
            dev, kind = _block_distance(a, b, tol)
            if dev < best_dev:
                best, best_dev, best_kind = lb, dev, kind
        if best is None or best_dev > tol:
            report.unmatched.append(f"{a.label}: closest deviation {best_dev:.3e}")
            if np.isfinite(best_dev):
                worst = max(worst, best_dev)
            continue
        free.pop(best)
        report.pairing[a.label] = best
        report.deviations[a.label] = best_dev
        worst = max(worst, best_dev)
    if model_a.dim != model_b.dim:
        report.notes.append(
            f"block dimensions differ ({model_a.dim} vs {model_b.dim}); sectors compared up to degeneracy"
        )
    report.max_deviation = worst
    report.passed = not report.unmatched
    logger.info(report.summary_line())
    return report


def _charge_key(block: SectorBlock) -> Tuple:
    return tuple(sorted((k, format_eigenvalue(v)) for k, v in block.charges.items()))


def _charge_pairing(model_a: SectorDecomposition, model_b: SectorDecomposition,
                    report: DualityReport) -> Dict[str, str]:
    by_key: Dict[Tuple, List[str]] = {}
    for b in model_b.blocks:
        by_key.setdefault(_charge_key(b), []).append(b.label)
    hint = {}
    for a in model_a.blocks:
        partners = by_key.get(_charge_key(a), [])
        if len(partners) != 1:
            report.unmatched.append(f"{a.label}: {len(partners)} sectors carry the same charges")
            continue
        hint[a.label] = partners[0]
    return hint


def _embed(model_a: SectorDecomposition, model_b: SectorDecomposition,
           report: DualityReport) -> DualityReport:
    small, large, swapped = (model_a, model_b, False) if len(model_a.blocks) < len(model_b.blocks) \
        else (model_b, model_a, True)
    report.mode = "embedded"
    free = {b.label: b for b in large.blocks}
    worst = 0.0
    for s in small.blocks:
        best, best_dev = None, float("inf")
        for label, b in free.items():
            if b.dimension != s.dimension:
                continue
            dev = multiset_distance(s.eigenvalues, b.eigenvalues)
            if dev < best_dev:
                best, best_dev = label, dev
        if best is None or best_dev > report.tol:
            report.unmatched.append(f"{s.label}: closest deviation {best_dev:.3e}")
            continue
        free.pop(best)
        la, lb = (best, s.label) if swapped else (s.label, best)
        report.pairing[la] = lb
        report.deviations[la] = best_dev
        worst = max(worst, best_dev)
    report.notes.append(f"{len(free)} sectors of the larger family left unpaired")
    report.max_deviation = worst
    report.passed = not report.unmatched
    logger.info(report.summary_line())
    return report


def _compare_whole(model_a: SectorDecomposition, model_b: SectorDecomposition,
                   report: DualityReport) -> DualityReport:
    tol = report.tol
    report.notes.append(
        f"sector counts differ ({report.sectors_a} vs {report.sectors_b}); compared whole spectra"
    )
    ea, eb = model_a.spectrum(), model_b.spectrum()
    dev = multiset_distance(ea, eb)
    report.mode = "full"
    if dev > tol:
        dev = multiset_distance(degeneracy_strip(ea, tol), degeneracy_strip(eb, tol))
        report.mode = "distinct"
    report.max_deviation = dev
    report.passed = dev <= tol
    if not report.passed:
        report.unmatched.append(f"whole spectra differ by {dev:.3e}")
    logger.info(report.summary_line())
    return report


def intertwiner_compatibility(W: Any, H_a: SparseOperator, H_b: SparseOperator,
                              tol: float = SPECTRAL_TOL) -> float:
    """Largest ||H_b W v - E W v|| over eigenvectors v of H_a with a nonzero image."""
    res = diagonalize(H_a, vectors=True)
    worst = 0.0
    for E, v in zip(res.eigenvalues, res.eigenvectors.T):
        w = W.apply(v)
        norm = np.linalg.norm(w)
        if norm <= tol:
            continue
        w = w / norm
        worst = max(worst, float(np.linalg.norm(H_b @ w - E * w)))
    return worst
