#!/usr/bin/env python3
"""
Basic import tests for CI/CD pipeline.
Tests that all modules can be imported without errors.
"""

import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))


def test_core_imports():
    """Test core module imports"""
    from src.catdual.core import CatDualError, FusionCategory, ModuleCategory, SparseOperator
    assert issubclass(CatDualError, Exception)
    assert FusionCategory.__name__ == "FusionCategory"
    assert ModuleCategory.__name__ == "ModuleCategory"
    assert SparseOperator.__name__ == "SparseOperator"


def test_harness_imports():
    """Test harness imports"""
    from src.catdual.harness import get_preset, load_config, main, registry
    assert callable(main)
    assert callable(load_config)
    names = [p.name for p in registry()]
    assert "tfim" in names
    assert get_preset("tfim").name == "tfim"


def test_error_hierarchy():
    """Every concrete error derives from CatDualError"""
    from src.catdual.core import errors

    for name in ("LabelNotFoundError", "SplittingIndexError", "ValidationError",
                 "PentagonInconsistencyError", "GeometryError", "NotRealizableError",
                 "DimensionMismatchError", "NonHermitianError", "CommutatorError",
                 "RankDeficiencyError", "ConfigError"):
        cls = getattr(errors, name)
        assert issubclass(cls, errors.CatDualError), f"{name} is not a CatDualError"
    assert issubclass(errors.LabelNotFoundError, KeyError)
    assert issubclass(errors.SplittingIndexError, IndexError)


def test_project_structure():
    """Test required directories exist"""
    project_root = Path(__file__).parent.parent

    required_dirs = ["src", "src/catdual", "src/catdual/core", "src/catdual/harness", "tests"]

    for dir_path in required_dirs:
        full_path = project_root / dir_path
        assert full_path.exists(), f"Missing directory: {dir_path}"


def test_default_config_exists():
    """Project defaults are shipped at the root"""
    project_root = Path(__file__).parent.parent
    assert (project_root / "catdual_config.json").exists()
    assert (project_root / "main.py").exists()
