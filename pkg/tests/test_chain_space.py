"""Tests for chain specifications, basis enumeration and twists."""

import pytest

from src.catdual.core.chain_space import (
    BasisState,
    ChainSpec,
    enumerate_basis,
    resolve_twist,
    sector_twist,
    state_index,
    state_unindex,
)
from src.catdual.core.errors import (
    GeometryError,
    LabelNotFoundError,
    NotRealizableError,
    ValidationError,
)
from src.catdual.core.module_data import regular_module


@pytest.mark.parametrize("N", [2, 3, 5])
@pytest.mark.parametrize("twist", [None, "m"])
def test_z2_ring_dimension(z2_regular, N, twist):
    """Regular Z2 ring has 2^N states in both twist sectors"""
    basis = enumerate_basis(z2_regular, ChainSpec(N, twist=twist))
    assert basis.dim == 2 ** N


def test_ising_anyon_chain_dimension(ising_cat):
    """sigma strands force alternating invertible and sigma labels"""
    mod = regular_module(ising_cat)
    assert enumerate_basis(mod, ChainSpec.uniform(4, ["sigma"])).dim == 8
    assert enumerate_basis(mod, ChainSpec.uniform(6, ["sigma"])).dim == 16
    odd = enumerate_basis(mod, ChainSpec.uniform(3, ["sigma"]))
    assert odd.dim == 0
    assert not odd.report().passed


def test_open_chain_with_fixed_ends(ising_cat):
    mod = regular_module(ising_cat)
    spec = ChainSpec.uniform(2, ["sigma"], geometry="open", boundary=("1", "1"))
    basis = enumerate_basis(mod, spec)
    assert basis.dim == 1
    assert basis.states[0].labels == ("1", "sigma", "1")
    assert basis.bond_sites() == [1]


def test_open_vec_chain_dimension(z2_vec):
    basis = enumerate_basis(z2_vec, ChainSpec(3, geometry="open"))
    assert basis.dim == 8
    assert all(set(s.labels) == {"1"} for s in basis)


def test_chain_spec_validation():
    with pytest.raises(GeometryError):
        ChainSpec(3, geometry="torus")
    with pytest.raises(ValidationError):
        ChainSpec(1, geometry="ring")
    with pytest.raises(ValidationError):
        ChainSpec(0, geometry="open")
    with pytest.raises(GeometryError):
        ChainSpec(3, geometry="open", twist="m")
    with pytest.raises(GeometryError):
        ChainSpec(3, geometry="ring", boundary=("1", None))
    with pytest.raises(ValidationError):
        ChainSpec(3, strands=[["m"], ["m"]])


def test_sector_twist_errors(ising_cat):
    with pytest.raises(GeometryError):
        sector_twist(ChainSpec(3, geometry="open"), "psi")
    with pytest.raises(NotRealizableError):
        sector_twist(ChainSpec(4), "sigma", ising_cat)
    assert sector_twist(ChainSpec(4), "psi", ising_cat).twist == "psi"


def test_resolve_twist_kinds(z2_regular, z2_vec, ising_cat):
    """Object twists need a regular module, characters need a vec module"""
    geometric = resolve_twist(z2_regular, "m")
    assert geometric.geometric
    assert geometric.target == {"1": "m", "m": "1"}
    character = resolve_twist(z2_vec, "chi1")
    assert not character.geometric
    assert character.character["m"] == pytest.approx(-1.0)
    assert resolve_twist(z2_vec, None).label is None
    with pytest.raises(NotRealizableError):
        resolve_twist(z2_vec, "m")
    with pytest.raises(NotRealizableError):
        resolve_twist(regular_module(ising_cat), "sigma")
    with pytest.raises(LabelNotFoundError):
        resolve_twist(z2_regular, "chi1")


def test_unknown_strand_label(z2_regular):
    with pytest.raises(LabelNotFoundError):
        enumerate_basis(z2_regular, ChainSpec.uniform(3, ["sigma"]))


def test_basis_order_and_index(z2_regular):
    """Basis is lexicographic and state_index inverts state_unindex"""
    basis = enumerate_basis(z2_regular, ChainSpec(3))
    first, last = basis.states[0], basis.states[-1]
    assert first == BasisState(("1", "1", "1"), ("1", "1", "1"), (0, 0, 0))
    assert last.labels[0] == "m"
    for n in range(basis.dim):
        assert state_index(basis, state_unindex(basis, n)) == n
    bogus = BasisState(("1", "1", "1"), ("m", "1", "1"), (0, 0, 0))
    with pytest.raises(LabelNotFoundError):
        state_index(basis, bogus)
    with pytest.raises(IndexError):
        state_unindex(basis, basis.dim)


def test_twisted_ring_closure(z2_regular):
    """On the m-twisted ring the last link lands on A_0 x m"""
    basis = enumerate_basis(z2_regular, ChainSpec(3, twist="m"))
    for state in basis:
        assert basis.closure(state) != state.labels[0]
        local = basis.local(state, 0)
        assert local.left == basis.twist.source[state.labels[2]]
        assert local.alpha == state.links[2]


def test_bond_geometry(z2_regular):
    ring = enumerate_basis(z2_regular, ChainSpec(4))
    assert ring.bond_sites() == [0, 1, 2, 3]
    chain = enumerate_basis(z2_regular, ChainSpec(4, geometry="open"))
    assert chain.bond_sites() == [1, 2, 3]
    with pytest.raises(GeometryError):
        chain.local(chain.states[0], 0)


def test_graded_state_parity(svec_module):
    """Parity of a state counts the odd psi links"""
    basis = enumerate_basis(svec_module, ChainSpec(3))
    assert basis.dim == 8
    for n, state in enumerate(basis):
        assert basis.state_parity(n) == state.links.count("psi") % 2


def test_chain_spec_json_broadcast():
    spec = ChainSpec.from_dict({"length": 3, "geometry": "ring", "strands": {"all": ["sigma"]}})
    assert spec.strands == [["sigma"]] * 3
    again = ChainSpec.from_dict(spec.to_dict())
    assert again == spec
