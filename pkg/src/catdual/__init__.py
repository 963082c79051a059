"""
catdual - generalized dualities of 1D lattice models.

Lattice Hamiltonians are assembled from a fusion category, a module category
over it and a list of bonds; picking a different module of the same category
gives a dual model with the same bond algebra.

Usage:
    from src.catdual import get_preset, verify_duality, sector_family

    report = verify_duality(sector_family("tfim", 8), sector_family("tfim_kw", 8))
    print(report.summary_line())
"""

from .core.spectra import verify_duality
from .harness import get_preset, registry, sector_family

__version__ = "0.1.0"

__all__ = ["get_preset", "registry", "sector_family", "verify_duality", "__version__"]
