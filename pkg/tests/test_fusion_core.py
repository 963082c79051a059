"""Tests for fusion category data, constructors and the pentagon checker."""

import numpy as np
import pytest

from src.catdual.core.errors import LabelNotFoundError, SplittingIndexError, ValidationError
from src.catdual.core.fusion_core import (
    FusionCategory,
    category_from_name,
    check_f_blocks,
    check_fusion_ring,
    check_pentagon,
    check_qdims,
    f_symbol,
    fuse,
    group_table,
    ising_op_x_ising,
    rep_uq_sl2,
    vec_g,
    vec_z2,
)


@pytest.mark.parametrize("address", [
    "vec_z2", "vec_z2_omega", "svec", "vec_g:Z2", "vec_g:Z3", "vec_g:S3", "ising",
    "rep_uq_sl2:q=1.0,jmax=3", "rep_uq_sl2:q=1.3,jmax=3",
])
def test_builtin_categories_satisfy_pentagon(address):
    """Every built-in category passes the pentagon at 1e-10"""
    cat = category_from_name(address)
    report = check_pentagon(cat, 1e-10)
    assert report.passed, report.summary_line()
    assert report.checked > 0, f"{address}: no pentagon entries compared"
    assert check_fusion_ring(cat).passed
    assert check_qdims(cat).passed
    assert check_f_blocks(cat).passed


def test_deligne_product_pentagon():
    """Ising^op x Ising has 9 simples and a consistent associator"""
    cat = ising_op_x_ising()
    assert len(cat.labels) == 9
    assert cat.unit == ("1", "1")
    assert fuse(cat, ("sigma", "1"), ("sigma", "psi")) == {("1", "psi"): 1, ("psi", "psi"): 1}
    report = check_pentagon(cat)
    assert report.passed, report.summary_line()


def test_ising_fusion_and_f_symbols(ising_cat):
    """sigma x sigma = 1 + psi and F^{sss}_s is the Hadamard matrix"""
    assert fuse(ising_cat, "sigma", "sigma") == {"1": 1, "psi": 1}
    assert fuse(ising_cat, "psi", "sigma") == {"sigma": 1}
    r2 = 1 / np.sqrt(2)
    assert f_symbol(ising_cat, "sigma", "sigma", "sigma", "sigma", "1", "1") == pytest.approx(r2)
    assert f_symbol(ising_cat, "sigma", "sigma", "sigma", "sigma", "psi", "psi") == pytest.approx(-r2)
    assert f_symbol(ising_cat, "sigma", "psi", "sigma", "psi", "sigma", "sigma") == pytest.approx(-1.0)
    # inadmissible labels give zero rather than an error
    assert f_symbol(ising_cat, "psi", "psi", "psi", "psi", "psi", "1") == 0.0


def test_f_symbol_errors(ising_cat):
    with pytest.raises(LabelNotFoundError):
        f_symbol(ising_cat, "tau", "sigma", "sigma", "sigma", "1", "1")
    with pytest.raises(SplittingIndexError):
        f_symbol(ising_cat, "sigma", "sigma", "sigma", "sigma", "1", "1", i=1)


def test_duals_and_invertibility(ising_cat):
    assert ising_cat.dual("sigma") == "sigma"
    assert ising_cat.dual("psi") == "psi"
    assert ising_cat.is_invertible("psi")
    assert not ising_cat.is_invertible("sigma")


def test_tampered_f_symbol_fails_pentagon(ising_cat):
    """Flipping one F-symbol sign breaks the pentagon without raising"""
    data = ising_cat.to_dict()
    for row in data["f_symbols"]:
        if row[:6] == ["sigma", "sigma", "sigma", "sigma", "1", "1"]:
            row[10] = -row[10]
    broken = FusionCategory.from_dict(data)
    report = check_pentagon(broken)
    assert not report.passed
    assert report.max_residual > 1e-3


def test_json_round_trip_keeps_pair_labels():
    """Deligne labels survive the JSON encoding as tuples"""
    cat = ising_op_x_ising()
    again = FusionCategory.from_dict(cat.to_dict())
    assert again.labels == cat.labels
    assert again.f.entries == cat.f.entries


def test_group_tables():
    z3 = group_table("Z3")
    assert z3[("2", "2")] == "1"
    s3 = group_table("S3")
    assert len({g for g, _ in s3}) == 6
    # S3 is non-abelian
    assert any(s3[(a, b)] != s3[(b, a)] for a, b in s3)
    with pytest.raises(ValidationError):
        group_table("D4")


def test_invalid_cocycle_rejected():
    """A unit-modulus function that is not a 3-cocycle is refused"""
    with pytest.raises(ValidationError):
        vec_g(group_table("Z3"), cocycle={("1", "1", "1"): -1.0})


def test_nontrivial_z2_cocycle_is_consistent():
    cat = vec_z2(cocycle_sign=-1)
    assert cat.f_symbol("m", "m", "m", "m", "1", "1") == pytest.approx(-1.0)
    assert check_pentagon(cat).passed


def test_rep_uq_truncation():
    """Fusion above jmax is dropped and the cutoff is recorded"""
    cat = rep_uq_sl2(1.3, 3.0)
    assert cat.labels == ["0", "1/2", "1", "3/2", "2", "5/2", "3"]
    assert set(fuse(cat, "2", "2")) == {"0", "1", "2", "3"}
    assert cat.params == {"q": 1.3, "jmax": 3.0}
    assert cat.qdim["1/2"] == pytest.approx(1.3 + 1 / 1.3)


def test_rep_uq_f_blocks_orthogonal_at_q1(rep_q1):
    """At q = 1 every F block is a real orthogonal matrix"""
    mat, rows, cols = rep_q1.f_block("1/2", "1/2", "1/2", "1/2")
    assert mat.shape == (2, 2)
    assert np.allclose(mat @ mat.T, np.eye(2), atol=1e-12)


def test_rep_uq_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        rep_uq_sl2(-1.0)
    with pytest.raises(ValidationError):
        rep_uq_sl2(1.0, 0.5)


def test_category_from_name_errors():
    with pytest.raises(LabelNotFoundError) as exc:
        category_from_name("fibonacci")
    assert "ising" in str(exc.value)
    with pytest.raises(ValidationError):
        category_from_name("rep_uq_sl2:k=3")
