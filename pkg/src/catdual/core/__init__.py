"""
Core - categorical data, chains, operators and spectra.

Usage:
    from src.catdual.core import ising, check_pentagon, regular_module, ChainSpec, enumerate_basis

    cat = ising()
    print(check_pentagon(cat).summary_line())

    mod = regular_module(cat)
    basis = enumerate_basis(mod, ChainSpec.uniform(6, ["sigma"]))
    print(basis.dim)
"""

from .errors import (
    CatDualError,
    LabelNotFoundError,
    SplittingIndexError,
    ValidationError,
    PentagonInconsistencyError,
    GeometryError,
    NotRealizableError,
    DimensionMismatchError,
    NonHermitianError,
    CommutatorError,
    RankDeficiencyError,
    ConfigError,
)
from .checks import CheckReport
from .fusion_core import (
    FusionCategory,
    fuse,
    f_symbol,
    check_pentagon,
    vec_g,
    vec_z2,
    ising,
    svec,
    deligne_product,
    ising_op_x_ising,
    rep_uq_sl2,
    category_from_name,
)
from .module_data import (
    ModuleCategory,
    SuperBlock,
    check_module_pentagon,
    check_super_blocks,
    regular_module,
    vec_forgetful,
    svec_condense,
    ising_fermion,
    double_fermion,
    bimodule_over_double,
    vec_over_uqsl2,
    builtin_module,
)
from .chain_space import ChainSpec, ChainBasis, BasisState, enumerate_basis, sector_twist
from .operators import SparseOperator, BondSpec, HamiltonianSpec, HamiltonianTerm, build_bond, build_hamiltonian
from .bond_algebra import generate_algebra, structure_constants, compare_algebras
from .mpo_engine import (
    symmetry_mpo,
    symmetry_operators,
    verify_pulling_through,
    intertwiner_mpo,
    check_intertwining,
    gauging_map,
)
from .spectra import diagonalize, sector_decompose, verify_duality, DualityReport

__all__ = [
    # Errors
    "CatDualError",
    "LabelNotFoundError",
    "SplittingIndexError",
    "ValidationError",
    "PentagonInconsistencyError",
    "GeometryError",
    "NotRealizableError",
    "DimensionMismatchError",
    "NonHermitianError",
    "CommutatorError",
    "RankDeficiencyError",
    "ConfigError",
    "CheckReport",
    # Categories
    "FusionCategory",
    "fuse",
    "f_symbol",
    "check_pentagon",
    "vec_g",
    "vec_z2",
    "ising",
    "svec",
    "deligne_product",
    "ising_op_x_ising",
    "rep_uq_sl2",
    "category_from_name",
    # Modules
    "ModuleCategory",
    "SuperBlock",
    "check_module_pentagon",
    "check_super_blocks",
    "regular_module",
    "vec_forgetful",
    "svec_condense",
    "ising_fermion",
    "double_fermion",
    "bimodule_over_double",
    "vec_over_uqsl2",
    "builtin_module",
    # Chains and operators
    "ChainSpec",
    "ChainBasis",
    "BasisState",
    "enumerate_basis",
    "sector_twist",
    "SparseOperator",
    "BondSpec",
    "HamiltonianSpec",
    "HamiltonianTerm",
    "build_bond",
    "build_hamiltonian",
    # Algebras, MPOs, spectra
    "generate_algebra",
    "structure_constants",
    "compare_algebras",
    "symmetry_mpo",
    "symmetry_operators",
    "verify_pulling_through",
    "intertwiner_mpo",
    "check_intertwining",
    "gauging_map",
    "diagonalize",
    "sector_decompose",
    "verify_duality",
    "DualityReport",
]
