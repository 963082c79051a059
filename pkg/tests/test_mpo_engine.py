"""Tests for symmetry MPOs, intertwiners and the gauging map."""

import numpy as np
import pytest

from src.catdual.core.chain_space import ChainSpec, enumerate_basis
from src.catdual.core.errors import (
    DimensionMismatchError,
    NotRealizableError,
    ValidationError,
)
from src.catdual.core.fusion_core import rep_uq_sl2
from src.catdual.core.module_data import regular_module, vec_over_uqsl2
from src.catdual.core.mpo_engine import (
    CharacterSymmetry,
    NoSymmetry,
    ParitySymmetry,
    RegularSymmetry,
    apply_mpo_to_state,
    check_commutation,
    check_gauging,
    check_intertwining,
    check_mpo_fusion,
    gauging_map,
    intertwiner_mpo,
    read_state_csv,
    realization_for,
    state_fidelity,
    symmetry_mpo,
    symmetry_operators,
    verify_pulling_through,
    write_state_csv,
)
from src.catdual.core.operators import BondSpec, HamiltonianSpec, HamiltonianTerm, SparseOperator
from src.catdual.core.spectra import intertwiner_compatibility
from src.catdual.harness.registry import build_model


@pytest.mark.parametrize("name", ["tfim", "tfim_kw", "ising_anyonchain", "coupled_ising_1"])
def test_symmetry_mpos_commute_with_every_bond(name):
    """Each realized MPO commutes with each F◁-built bond of the preset, site by site"""
    m = build_model(name, 4)
    report = verify_pulling_through(m.module, m.basis, m.spec)
    assert report.passed, report.summary_line()
    assert report.checked == len(m.bonds) * len(symmetry_operators(m.module, m.basis))
    assert report.checked > 0


def test_symmetry_breaking_bond_fails_pulling_through():
    m = build_model("tfim", 4)
    pin = BondSpec({("1", "1", "1", "1", "1", 0, 0): 1.0}, name="pin")
    spec = HamiltonianSpec(terms=[HamiltonianTerm(1.0, pin)], chain=m.spec.chain, name="pinned")
    report = verify_pulling_through(m.module, m.basis, spec)
    assert not report.passed
    assert "pin" in report.details["worst"]
    assert report.details["symmetries"] == ["U_m"]


def test_realization_kinds(ising_cat, z2_vec, svec_module):
    assert isinstance(realization_for(regular_module(ising_cat)), RegularSymmetry)
    assert isinstance(realization_for(z2_vec), CharacterSymmetry)
    # svec_condense is a vec module over a cyclic base, so its characters are the parity
    assert isinstance(realization_for(svec_module), CharacterSymmetry)
    assert isinstance(realization_for(vec_over_uqsl2(rep_uq_sl2(1.0, 2.0))), NoSymmetry)
    assert isinstance(realization_for(build_model("ising_fermion", 4).module), ParitySymmetry)


def test_ising_mpo_fusion(ising_cat):
    """U_sigma U_sigma = U_1 + U_psi on the anyon chain"""
    mod = regular_module(ising_cat)
    basis = enumerate_basis(mod, ChainSpec.uniform(4, ["sigma"]))
    report = check_mpo_fusion(mod, basis)
    assert report.passed, report.summary_line()
    assert report.checked == 9
    U_sigma = symmetry_mpo(mod, "sigma", basis)
    U_psi = symmetry_mpo(mod, "psi", basis)
    rhs = U_psi + SparseOperator.identity(basis.dim)
    assert ((U_sigma @ U_sigma) - rhs).max_abs() < 1e-10


@pytest.mark.parametrize("name,twist", [
    ("tfim", "1"), ("tfim", "m"), ("tfim_kw", "chi0"), ("tfim_kw", "chi1"),
    ("ising_anyonchain", None), ("gauge_zN", "0"), ("gauge_zN_vec", "chi1"),
])
def test_symmetries_commute_with_hamiltonian(name, twist):
    N = 4
    model = build_model(name, N, {"g": 0.8}, twist=twist)
    assert model.symmetries, f"{name}: no symmetry operator realized"
    report = check_commutation(model.hamiltonian, model.symmetries)
    assert report.passed, report.summary_line()


def test_twisted_ising_ring_has_no_symmetry_operators():
    """Object twists with nontrivial F leave the symmetry unrealized"""
    model = build_model("ising_anyonchain", 4, twist="psi")
    assert model.dim > 0
    assert model.symmetries == {}


def test_no_symmetry_raises():
    mod = vec_over_uqsl2(rep_uq_sl2(1.0, 2.0))
    basis = enumerate_basis(mod, ChainSpec.uniform(3, ["1/2"], geometry="open"))
    assert symmetry_operators(mod, basis) == {}
    with pytest.raises(NotRealizableError):
        symmetry_mpo(mod, "1/2", basis)


def test_parity_of_fermionic_chain():
    model = build_model("tfim_jw", 4, twist="chi0")
    U = model.symmetries["U_chi1"].to_dense()
    assert np.allclose(U @ U, np.eye(model.dim))
    assert check_commutation(model.hamiltonian, model.symmetries).passed


def test_kramers_wannier_intertwiner():
    """The regular -> Vec intertwiner maps every TFIM bond onto its dual"""
    source = build_model("tfim", 4, {"g": 0.6})
    target = build_model("tfim_kw", 4, {"g": 0.6})
    W = intertwiner_mpo(target.module, source.basis, target.basis)
    assert W.shape == (target.dim, source.dim)
    report = check_intertwining(W, source.bonds, target.bonds)
    assert report.passed, report.summary_line()
    # W kills the odd sector of the flip symmetry
    U_m = source.symmetries["U_m"]
    assert np.allclose(W.to_dense() @ U_m.to_dense(), W.to_dense())
    assert intertwiner_compatibility(W, source.hamiltonian, target.hamiltonian) < 1e-10


def test_intertwiner_input_errors(z2_regular, z2_vec):
    reg = enumerate_basis(z2_regular, ChainSpec(3))
    vec = enumerate_basis(z2_vec, ChainSpec(3))
    with pytest.raises(ValidationError):
        intertwiner_mpo(z2_vec, vec, vec)
    with pytest.raises(NotRealizableError):
        intertwiner_mpo(z2_vec, enumerate_basis(z2_regular, ChainSpec(3, twist="m")), vec)
    W = intertwiner_mpo(z2_vec, reg, vec)
    with pytest.raises(DimensionMismatchError):
        check_intertwining(W, [], [W])
    with pytest.raises(DimensionMismatchError):
        W.apply(np.ones(3))


@pytest.mark.parametrize("group,N", [("Z2", 4), ("Z3", 3), ("S3", 3)])
def test_gauging_map(group, N):
    """Gauging intertwines matter symmetries with link actions"""
    gm = gauging_map(group, N)
    report = check_gauging(gm)
    assert report.passed, report.summary_line()
    n = len(gm.category.labels)
    image = apply_mpo_to_state(gm, gm.product_state(np.ones(n) / np.sqrt(n)))
    assert state_fidelity(image, gm.flat_state()) == pytest.approx(1.0)


def test_state_csv_io(tmp_path):
    vec = np.array([0.6, 0.0, 0.8j])
    path = write_state_csv(vec, tmp_path / "state.csv", cutoff=1e-14)
    assert path.read_text().splitlines()[0] == "index,re,im"
    again = read_state_csv(path, dim=3)
    assert np.allclose(again, vec)
    (tmp_path / "bad.csv").write_text("n,re\n0,1.0\n")
    with pytest.raises(ValidationError):
        read_state_csv(tmp_path / "bad.csv")
    with pytest.raises(DimensionMismatchError):
        read_state_csv(path, dim=2)
