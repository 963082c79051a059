"""Tests for bond-algebra bases, structure constants and their comparison."""

import numpy as np
import pytest

from src.catdual.core.bond_algebra import (
    check_associativity,
    compare_algebras,
    generate_algebra,
    hs_inner,
    structure_constants,
)
from src.catdual.core.errors import DimensionMismatchError, ValidationError
from src.catdual.core.operators import SparseOperator, pauli_string
from src.catdual.harness.registry import build_model, family_bonds

N = 4
DEPTH = 2


def _constants(name, **params):
    bonds = family_bonds(name, N, params or None)
    return structure_constants(generate_algebra(bonds, DEPTH))


def _six_site_bonds(name):
    if name == "ising_anyonchain":
        return build_model(name, 6).bonds
    if name == "ising_fermion":
        return build_model(name, 6, twist="periodic").bonds
    return family_bonds(name, 6, {"g": 0.7})


@pytest.fixture(scope="module")
def tfim_constants():
    return _constants("tfim", g=0.7)


def test_hs_inner_normalization():
    X = pauli_string(2, {0: "X"})
    assert hs_inner(X, X) == pytest.approx(1.0)
    assert hs_inner(X, pauli_string(2, {1: "X"})) == pytest.approx(0.0)


def test_pauli_algebra_closes():
    """Single-qubit Paulis span M_2 with the identity at depth 2"""
    bonds = [pauli_string(1, {0: "X"}, 1.0), pauli_string(1, {0: "Z"}, 1.0)]
    ab = generate_algebra(bonds, depth=2)
    assert ab.size == 4
    assert ab.words == [(), (0,), (1,), (0, 1)]
    sc = structure_constants(ab, all_pairs=True)
    assert sc.defined.all()
    # X X = Id
    assert sc.f[1, 1, 0] == pytest.approx(1.0)
    assert check_associativity(sc).passed


def test_kramers_wannier_bond_algebras_agree(tfim_constants):
    """Regular and Vec realizations over Vec_Z2 share their structure constants"""
    dual = _constants("tfim_kw", g=0.7)
    result = compare_algebras(tfim_constants, dual)
    assert result.isomorphic_as_presented, result.reason
    assert result.max_deviation <= 1e-10


def test_structure_constants_are_associative(tfim_constants):
    report = check_associativity(tfim_constants, limit=24)
    assert report.passed, report.summary_line()
    assert report.checked > 0


def test_different_base_categories_disagree():
    """Z3 clock bonds are not a realization of the Z2 bond algebra"""
    ising_sc = structure_constants(generate_algebra(family_bonds("tfim", 2), DEPTH))
    clock = structure_constants(generate_algebra(family_bonds("gauge_zN", 2, {"n": 3}), DEPTH))
    result = compare_algebras(ising_sc, clock)
    assert not result.isomorphic_as_presented


def test_generator_count_mismatch_raises(tfim_constants):
    anyon = structure_constants(generate_algebra(build_model("ising_anyonchain", N).bonds, DEPTH))
    with pytest.raises(DimensionMismatchError):
        compare_algebras(tfim_constants, anyon)


def test_family_bonds_are_block_diagonal():
    bonds = family_bonds("tfim", N)
    assert len(bonds) == 2 * N
    assert all(b.dim == 2 * 2 ** N for b in bonds)
    upper_right = bonds[0].to_dense()[: 2 ** N, 2 ** N:]
    assert np.allclose(upper_right, 0)


def test_generate_algebra_input_errors():
    with pytest.raises(ValidationError):
        generate_algebra([pauli_string(1, {0: "X"})], depth=0)
    with pytest.raises(ValidationError):
        generate_algebra([])
    assert generate_algebra([], dim=3).size == 1
    with pytest.raises(DimensionMismatchError):
        generate_algebra([SparseOperator.identity(2), SparseOperator.identity(4)])


def test_default_expansion_covers_products_within_depth(tfim_constants):
    lengths = np.array([len(w) for w in tfim_constants.words])
    within = lengths[:, None] + lengths[None, :] <= DEPTH
    assert tfim_constants.defined[within].all()
    assert not tfim_constants.defined[~within].any()


@pytest.mark.parametrize("first,second", [("tfim", "tfim_kw"), ("ising_anyonchain", "ising_fermion")])
def test_six_site_bond_algebras_agree_at_depth_three(first, second):
    """Words up to length three on six sites close identically in both realizations"""
    a = structure_constants(generate_algebra(_six_site_bonds(first), 3))
    b = structure_constants(generate_algebra(_six_site_bonds(second), 3))
    result = compare_algebras(a, b)
    assert result.isomorphic_as_presented, result.reason
    assert a.size == b.size > 6

