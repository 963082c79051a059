"""Tests for diagonalization, sector decomposition and duality verification."""

from fractions import Fraction

import numpy as np
import pytest

from src.catdual.core.errors import CommutatorError, NonHermitianError
from src.catdual.core.fermions import free_fermion_tfim_energies, preset_fermion_hamiltonian
from src.catdual.core.operators import SparseOperator, pauli_string
from src.catdual.core.spectra import (
    SECTOR_NOTE,
    SectorDecomposition,
    degeneracy_strip,
    diagonalize,
    format_eigenvalue,
    multiset_distance,
    sector_decompose,
    verify_duality,
)
from src.catdual.harness.registry import (
    DUAL_PAIRS,
    build_model,
    family_spectrum,
    sector_family,
    verify_pair,
)

N = 6


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
def test_kramers_wannier_sectors_pair_up(n_sites, g):
    """Charge and twist swap between the regular and Vec realizations"""
    params = {"J": 1.0, "g": g}
    a = sector_family("tfim", n_sites, params)
    b = sector_family("tfim_kw", n_sites, params)
    report = verify_duality(a, b, pairing_hint=DUAL_PAIRS[("tfim", "tfim_kw")].hint, names=("tfim", "tfim_kw"))
    assert report.passed, report.unmatched
    assert report.mode == "sectors"
    assert len(report.pairing) == 4
    assert report.max_deviation <= 1e-8


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("g", [0.5, 1.0, 2.0])
def test_jordan_wigner_sectors_pair_up(n_sites, g):
    params = {"J": 1.0, "g": g}
    report = verify_pair("tfim", "tfim_jw", n_sites, params)
    assert report.passed, report.unmatched
    assert len(report.pairing) == 4


def test_even_untwisted_sector_is_free_fermion():
    decomp = sector_family("tfim", N, {"J": 1.0, "g": 0.6})
    block = decomp.block("twist=1;U_m=+1.000000")
    assert block.dimension == 2 ** (N - 1)
    assert np.allclose(block.eigenvalues, free_fermion_tfim_energies(N, 1.0, 0.6), atol=1e-9)


def test_anyon_chain_is_two_critical_ising_chains():
    """Sigma chain of length 6 splits into two copies of the 3-site critical TFIM"""
    anyon = diagonalize(build_model("ising_anyonchain", N).hamiltonian)
    tfim = diagonalize(build_model("tfim", N // 2, {"J": 1.0, "g": 1.0}, twist="1").hamiltonian)
    doubled = np.concatenate([tfim.eigenvalues, tfim.eigenvalues])
    assert multiset_distance(anyon.eigenvalues, doubled) <= 1e-8


def _sector_levels(model, keep):
    idx = [k for k, state in enumerate(model.basis.states) if keep(state)]
    H = model.hamiltonian.to_dense()
    return np.linalg.eigvalsh(H[np.ix_(idx, idx)]) if idx else np.zeros(0)


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("q", [1.0, 1.3])
def test_irf_end_height_sectors_are_highest_weight_levels(n_sites, q):
    """Heights ending at j carry the six-vertex levels of S_z = j that do not reach S_z = j + 1"""
    params = {"J": 1.0, "q": q, "jmax": float(n_sites // 2)}
    irf = build_model("irf", n_sites, params)
    vertex = build_model("six_vertex", n_sites, params)

    def magnetization(m):
        return _sector_levels(vertex, lambda s: n_sites - 2 * sum(s.homs) == 2 * m)

    seen = 0
    for two_j in range(n_sites % 2, n_sites + 1, 2):
        j = two_j / 2
        heights = _sector_levels(irf, lambda s: float(Fraction(s.labels[-1])) == j)
        seen += heights.size
        assert heights.size > 0
        assert multiset_distance(np.concatenate([heights, magnetization(j + 1)]), magnetization(j)) <= 1e-8
    assert seen == irf.dim


def test_non_hermitian_input_raises():
    X, Y = pauli_string(1, {0: "X"}), pauli_string(1, {0: "Y"})
    with pytest.raises(NonHermitianError) as err:
        diagonalize(X @ Y)
    assert err.value.asymmetry > 0


def test_non_commuting_symmetry_raises():
    H = pauli_string(2, {0: "Z", 1: "Z"})
    with pytest.raises(CommutatorError):
        sector_decompose(H, {"X0": pauli_string(2, {0: "X"})})
    with pytest.raises(CommutatorError):
        sector_decompose(H, {"flip": SparseOperator.identity(8)})


def test_sector_decompose_labels_joint_charges():
    H = pauli_string(2, {0: "X", 1: "X"}) + pauli_string(2, {0: "Z"}) * 0.3 + pauli_string(2, {1: "Z"}) * 0.3
    decomp = sector_decompose(H, {"P": pauli_string(2, {0: "Z", 1: "Z"})}, twist="none")
    assert decomp.labels == ["twist=none;P=-1.000000", "twist=none;P=+1.000000"]
    assert [b.dimension for b in decomp.blocks] == [2, 2]
    assert np.allclose(decomp.spectrum(), np.linalg.eigvalsh(H.to_dense()))
    assert decomp.note == SECTOR_NOTE
    with pytest.raises(KeyError):
        decomp.block("twist=none;P=+2.000000")


def test_merge_keeps_every_block():
    first = sector_family("tfim", 4, {"g": 0.5})
    merged = SectorDecomposition.merge([first, first])
    assert merged.dim == 2 * first.dim
    assert len(merged.blocks) == 2 * len(first.blocks)
    frame = merged.to_spectrum_result().to_frame()
    assert list(frame.columns) == ["index", "eigenvalue", "sector"]
    assert frame["eigenvalue"].is_monotonic_increasing


def test_mismatched_sector_counts_fall_back_to_whole_spectra():
    params = {"J": 1.0, "g": 0.8}
    a = sector_family("tfim", 4, params)
    b = sector_decompose(build_model("tfim", 4, params, twist="1").hamiltonian, {}, twist="1")
    report = verify_duality(a, b)
    assert report.mode == "distinct"
    assert report.sectors_a == 4 and report.sectors_b == 1
    assert not report.passed


def test_degeneracy_strip_and_distance():
    assert np.allclose(degeneracy_strip([1.0, 0.0, 1.0 + 1e-12, 2.0]), [0.0, 1.0, 2.0])
    assert degeneracy_strip([]).size == 0
    assert multiset_distance([1, 2], [2, 1.5]) == pytest.approx(0.5)
    assert multiset_distance([1], [1, 2]) == float("inf")
    assert multiset_distance([], []) == 0.0


def test_format_eigenvalue():
    assert format_eigenvalue(1) == "+1.000000"
    assert format_eigenvalue(-0.0000001) == "+0.000000"
    assert format_eigenvalue(np.exp(2j * np.pi / 3)) == "-0.500000+0.866025i"


def test_spectrum_csv_is_reproducible(tmp_path):
    result = diagonalize(build_model("tfim", 4, {"g": 0.3}).hamiltonian)
    first = result.to_csv(tmp_path / "a.csv").read_bytes()
    second = result.to_csv(tmp_path / "b.csv").read_bytes()
    assert first == second
    assert first.splitlines()[0] == b"index,eigenvalue,sector"
    assert b"\r" not in first


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("g", [0.3, 1.0])
@pytest.mark.parametrize("a, b", [("xxz", "coupled_ising_1"), ("xxz_nnn", "coupled_ising_2")])
def test_double_ising_chains_pair_by_ring_charges(a, b, n_sites, g):
    """Every (twist, W charges) sector of one realization has a twin with the same charges"""
    report = verify_pair(a, b, n_sites, {"J": 1.0, "g": g})
    assert report.passed, report.unmatched
    assert report.mode == "charges"
    assert len(report.pairing) == report.sectors_a == report.sectors_b


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("g", [0.3, 1.0])
@pytest.mark.parametrize("a, b", [("xxz", "xxz_jw_h1"), ("xxz_nnn", "xxz_jw_h2")])
def test_double_ising_chains_contain_fermion_sectors(a, b, n_sites, g):
    """Each fermion parity sector reappears as one W_b2 sector of the spin chain"""
    report = verify_pair(a, b, n_sites, {"J": 1.0, "g": g})
    assert report.passed, report.unmatched
    assert report.mode == "embedded"
    assert len(report.pairing) == report.sectors_b == 4


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("bc", ["periodic", "antiperiodic"])
def test_ising_fermion_chain_is_two_majorana_chains(n_sites, bc):
    """Bonds from the super F◁ blocks give two sublattice copies of the critical chain"""
    built = diagonalize(build_model("ising_fermion", n_sites, twist=bc).hamiltonian)
    half = preset_fermion_hamiltonian("ising_fermion_chain", n_sites // 2, {"J": 1.0, "bc": bc})
    single = diagonalize(half).eigenvalues
    assert multiset_distance(built.eigenvalues, np.concatenate([single, single])) <= 1e-8


@pytest.mark.parametrize("n_sites", [6, 8])
@pytest.mark.parametrize("g", [0.3, 1.0])
def test_xxz_fermion_matches_hopping_chain(n_sites, g):
    params = {"J": 1.0, "g": g}
    distance = multiset_distance(family_spectrum("xxz_fermion", n_sites, params),
                                 family_spectrum("xxz_jw_h1", n_sites, params))
    assert distance <= 1e-8
