"""Tests for module categories, the mixed pentagon and F◁ completion."""

import numpy as np
import pytest

from src.catdual.core.errors import LabelNotFoundError, PentagonInconsistencyError, ValidationError
from src.catdual.core.fusion_core import ising, rep_uq_sl2, vec_z2
from src.catdual.core.graded import basis_parity, koszul_sign, swap_sign, total_parity
from src.catdual.core.module_data import (
    BUILTIN_MODULES,
    ModuleCategory,
    SuperBlock,
    builtin_module,
    check_evenness,
    check_module_pentagon,
    check_super_blocks,
    double_fermion,
    fusion_key,
    ising_fermion,
    regular_module,
    svec_condense,
    vec_forgetful,
)


def test_regular_module_copies_f_symbols(ising_cat):
    """F◁ of the regular module is F with keys reordered"""
    mod = regular_module(ising_cat)
    assert mod.kind == "regular"
    assert mod.ids == ["1", "psi", "sigma"]
    for key, value in mod.fmod.entries.items():
        assert ising_cat.f.entries[fusion_key(key)] == value
    assert check_module_pentagon(mod).passed


def test_vec_forgetful_over_z2(z2_vec):
    """Fibre functor over Vec_Z2 has one object and trivial F◁"""
    assert z2_vec.kind == "vec"
    assert z2_vec.ids == ["1"]
    assert z2_vec.act("1", "m") == {"1": 1}
    report = check_module_pentagon(z2_vec)
    assert report.passed, report.summary_line()
    for value in z2_vec.fmod.entries.values():
        assert abs(abs(value) - 1.0) < 1e-9


def test_vec_forgetful_fails_with_anomaly():
    """Vec_Z2 with the nontrivial cocycle has no fibre functor"""
    with pytest.raises(PentagonInconsistencyError) as exc:
        vec_forgetful(vec_z2(cocycle_sign=-1))
    assert exc.value.residual > 1e-3


def test_svec_condense_is_graded(svec_module):
    """The fermion acts on the single object through an odd hom space"""
    assert svec_module.graded
    assert svec_module.dims("1", "psi", "1") == (0, 1)
    assert svec_module.dims("1", "1", "1") == (1, 0)
    assert check_module_pentagon(svec_module).passed
    assert check_evenness(svec_module).passed


def test_ising_fermion_condensed_view():
    """Ising / psi presents sigma as the q-type object beta"""
    mod = ising_fermion()
    assert mod.kind == "condensed"
    assert mod.graded
    view = mod.condensed
    assert [x.id for x in view.labels] == ["1", "beta"]
    assert [x.end_dim for x in view.labels] == [(1, 0), (1, 1)]
    assert mod.dims("1", "sigma", "beta") == (1, 1)
    # the even shadow keeps sigma -> psi odd and sigma -> 1 even
    assert mod.action.graded("sigma", "sigma", "psi") == (0, 1)
    assert mod.action.graded("sigma", "sigma", "1") == (1, 0)
    assert check_module_pentagon(mod).passed
    assert check_evenness(mod).passed


@pytest.mark.parametrize("name", ["ising_over_double", "double_fermion"])
def test_double_modules(name):
    """Ising as a bimodule over its double satisfies the mixed pentagon"""
    mod = builtin_module(name)
    assert len(mod.base.labels) == 9
    assert mod.act("1", ("sigma", "sigma")) == {"1": 1, "psi": 1}
    assert check_module_pentagon(mod).passed


@pytest.mark.parametrize("q", [1.0, 1.3])
def test_vec_over_quantum_group(q):
    """q-Clebsch-Gordan coefficients satisfy the mixed pentagon"""
    base = rep_uq_sl2(q, 2.0)
    mod = builtin_module("vec_over_uqsl2", base)
    assert mod.kind == "vec"
    assert mod.action.graded("1", "1", "1") == (3, 0)
    assert mod.action.graded("1", "3/2", "1") == (4, 0)


def test_builtin_module_errors():
    with pytest.raises(LabelNotFoundError):
        builtin_module("fibonacci_edge")
    with pytest.raises(ValidationError):
        builtin_module("regular")
    with pytest.raises(ValidationError):
        builtin_module("vec_over_uqsl2", ising())
    assert "ising_fermion" in BUILTIN_MODULES


def test_tampered_module_fails_pentagon(ising_cat):
    """Flipping one F◁ sign is reported, not raised"""
    data = regular_module(ising_cat).to_dict()
    for row in data["module"]["f_mod"]:
        if row[:6] == ["sigma", "sigma", "1", "sigma", "sigma", "1"]:
            row[10] = -row[10]
    broken = ModuleCategory.from_dict(data)
    report = check_module_pentagon(broken)
    assert not report.passed
    assert report.max_residual > 1e-3


def test_module_round_trip_preserves_grading(svec_module):
    again = ModuleCategory.from_dict(svec_module.to_dict())
    assert again.graded
    assert again.action.dims == svec_module.action.dims
    assert again.kind == "vec"
    assert check_module_pentagon(again).passed


def test_ungraded_module_rejects_odd_spaces(z2_vec):
    data = z2_vec.to_dict()
    data["module"]["action"][0][3:5] = [0, 1]
    with pytest.raises(ValidationError):
        ModuleCategory.from_dict(data)


def test_unknown_module_label(z2_regular):
    with pytest.raises(LabelNotFoundError):
        z2_regular.require("psi")


def test_graded_sign_rules():
    """Only exchanges of two odd vectors cost a sign"""
    assert swap_sign(1, 1) == -1
    assert swap_sign(1, 0) == 1
    # move the last vector to the front past two odd ones
    assert koszul_sign([1, 0, 1, 1], [3, 0, 1, 2]) == 1
    assert koszul_sign([1, 0, 0, 1], [3, 0, 1, 2]) == -1
    assert total_parity([1, 1, 1]) == 1
    assert [basis_parity((2, 1), k) for k in range(3)] == [0, 0, 1]
    with pytest.raises(IndexError):
        basis_parity((1, 1), 2)


def test_svec_pentagon_sees_odd_base_vertices():
    """Grading psi ⊗ psi -> 1 as odd costs a sign against the odd 1 ◁ psi vertex"""
    mod = svec_condense()
    assert check_module_pentagon(mod).passed
    odd_pair = check_module_pentagon(mod, base_parity=lambda b, c, l, dl: int((b, c) == ("psi", "psi")))
    assert not odd_pair.passed
    assert odd_pair.max_residual == pytest.approx(2.0)


def test_ising_fermion_super_blocks_entrywise():
    d = np.sqrt(2.0)
    view = ising_fermion().condensed
    on_beta = view.block("1", "sigma", "sigma", "1")
    assert np.allclose(on_beta.bond({"1": 1.0, "psi": -1.0}), np.diag([1.0, -1.0]))

    between = view.block("beta", "sigma", "sigma", "beta")
    assert between.rows == [("1", 0, 0), ("1", 0, 1), ("1", 1, 0), ("1", 1, 1)]
    assert between.matrix[3, 0] == pytest.approx(1j / d)
    assert between.matrix[3, 1] == pytest.approx(-1j / d)
    assert between.matrix[1, 3] == pytest.approx(-1 / d)
    # rows ee, eo, oe, oo: swap of the odd pair plus i between ee and oo
    expected = np.array([
        [0, 0, 0, -1j],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [1j, 0, 0, 0],
    ])
    assert np.allclose(between.bond({"1": 1.0, "psi": -1.0}), expected)
    assert between.odd_entries() == []


def test_double_fermion_bonds_close_under_products():
    """b1 b2 = b3 and each bond is an even involution on the two link modes"""
    block = double_fermion().condensed.block("1", ("sigma", "sigma"), ("sigma", "sigma"), "1")
    assert block.unitarity_residual() < 1e-12
    w = {"plus": {"1": 1.0, "psi": 1.0}, "minus": {"1": 1.0, "psi": -1.0}}

    def bond(first, second):
        return block.bond({(x, y): w[first][x] * w[second][y] for x in ("1", "psi") for y in ("1", "psi")})

    b1, b2, b3 = bond("plus", "minus"), bond("minus", "plus"), bond("minus", "minus")
    parity = np.diag([1.0, -1.0, -1.0, 1.0])
    for b in (b1, b2, b3):
        assert np.allclose(b @ b, np.eye(4))
        assert np.allclose(b, b.conj().T)
        assert np.allclose(parity @ b, b @ parity)
    assert np.allclose(b1 @ b2, b3)
    assert np.allclose(b1, [[0, 0, 0, -1], [0, 0, -1j, 0], [0, 1j, 0, 0], [-1, 0, 0, 0]])


@pytest.mark.parametrize("name", ["ising_fermion", "double_fermion"])
def test_condensed_super_blocks_pass(name):
    report = check_super_blocks(builtin_module(name))
    assert report.passed, report.summary_line()
    assert report.checked >= 1


def test_odd_super_block_entry_is_reported():
    mod = ising_fermion()
    mod.condensed.blocks[("1", "sigma", "sigma", "1")] = SuperBlock(
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        rows=[("beta", 0, 0), ("beta", 0, 1)], cols=[("1", 0), ("psi", 1)],
    )
    report = check_super_blocks(mod)
    assert not report.passed
    assert any("odd entry" in e for e in report.errors)


def test_super_blocks_need_a_condensed_module(ising_cat):
    with pytest.raises(ValidationError):
        check_super_blocks(regular_module(ising_cat))
    with pytest.raises(LabelNotFoundError):
        ising_fermion().condensed.block("1", "psi", "psi", "1")
