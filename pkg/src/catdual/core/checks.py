"""Report objects returned by every consistency check."""

from dataclasses import dataclass, field
from typing import Any, Dict, List


@dataclass
class CheckReport:
    """Outcome of a numerical consistency check."""
    name: str
    passed: bool
    max_residual: float = 0.0
    tol: float = 1e-10
    checked: int = 0
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "max_residual": float(self.max_residual),
            "tol": self.tol,
            "checked": self.checked,
            "errors": list(self.errors),
            "warnings": list(self.warnings),
            "details": self.details,
        }

    def summary_line(self) -> str:
        mark = "✅" if self.passed else "❌"
        return (
            f"{mark} {self.name}: max_residual={self.max_residual:.3e} "
            f"(tol {self.tol:.1e}, {self.checked} checked)"
        )

    @classmethod
    def from_residual(cls, name: str, residual: float, tol: float, **kwargs) -> "CheckReport":
        return cls(name=name, passed=bool(residual <= tol), max_residual=float(residual),
                   tol=tol, **kwargs)
