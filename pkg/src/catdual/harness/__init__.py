"""
Harness - model presets, run configuration, reports and the CLI.

Usage:
    from src.catdual.harness import get_preset, sector_family

    model = get_preset("tfim").build(8, {"g": 0.5})
    print(model.dim, list(model.symmetries))

    family = sector_family("tfim_kw", 8)
    print(family.labels)
"""

from .config import RunConfig, ConfigManager, load_config, get_config_manager
from .registry import ModelPreset, BuiltModel, registry, get_preset, build_model, family_bonds, sector_family
from .cli import main

__all__ = [
    "RunConfig",
    "ConfigManager",
    "load_config",
    "get_config_manager",
    "ModelPreset",
    "BuiltModel",
    "registry",
    "get_preset",
    "build_model",
    "family_bonds",
    "sector_family",
    "main",
]
