"""
Report Writers

JSON reports (schema 1) for checks and comparisons, CSV files for spectra
and Matrix Market files for operators. Every file is written with LF line
endings so repeated runs are byte-identical.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ..core.checks import CheckReport
from ..core.operators import SparseOperator
from ..core.spectra import SectorDecomposition, SpectrumResult

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FLOAT_FORMAT = "%.12e"

PathLike = Union[str, Path]


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def build_report(command: str, passed: bool, checks: Optional[List[CheckReport]] = None,
                 **payload: Any) -> Dict[str, Any]:
    """Common envelope of every JSON report."""
    report = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "pass": bool(passed),
        "checks": [c.to_dict() for c in (checks or [])],
    }
    report.update(payload)
    return _jsonable(report)


def write_json(data: Dict[str, Any], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(_jsonable(data), f, indent=2, sort_keys=False)
        f.write("\n")
    logger.info(f"✅ wrote report {path}")
    return path


def write_spectrum_csv(result: SpectrumResult, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    result.to_csv(path)
    logger.info(f"✅ wrote {len(result)} eigenvalues to {path}")
    return path


def sectors_frame(decomposition: SectorDecomposition) -> pd.DataFrame:
    """One row per sector: label, dimension and lowest eigenvalue."""
    rows = [
        {
            "sector": b.label,
            "dimension": b.dimension,
            "lowest": float(b.eigenvalues[0]) if len(b.eigenvalues) else float("nan"),
        }
        for b in decomposition.blocks
    ]
    return pd.DataFrame(rows, columns=["sector", "dimension", "lowest"])


def write_sectors_csv(decomposition: SectorDecomposition, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    sectors_frame(decomposition).to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_matrix(op: SparseOperator, path: PathLike) -> Path:
    """Matrix Market coordinate file of a sparse operator."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    op.to_matrix_market(path)
    logger.info(f"✅ wrote {op.dim}x{op.dim} matrix ({op.nnz} nonzeros) to {path}")
    return path


def load_json(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
