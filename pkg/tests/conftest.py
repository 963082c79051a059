"""Shared fixtures for the catdual test suite."""

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.catdual.core.fusion_core import ising, rep_uq_sl2, vec_z2  # noqa: E402
from src.catdual.core.module_data import regular_module, svec_condense, vec_forgetful  # noqa: E402


@pytest.fixture(autouse=True)
def single_worker(monkeypatch):
    """Run every test with one worker so results are reproducible."""
    monkeypatch.setenv("CATDUAL_THREADS", "1")


@pytest.fixture(scope="session")
def ising_cat():
    return ising()


@pytest.fixture(scope="session")
def z2_cat():
    return vec_z2()


@pytest.fixture(scope="session")
def z2_regular(z2_cat):
    return regular_module(z2_cat)


@pytest.fixture(scope="session")
def z2_vec(z2_cat):
    return vec_forgetful(z2_cat)


@pytest.fixture(scope="session")
def svec_module():
    return svec_condense()


@pytest.fixture(scope="session")
def rep_q1():
    return rep_uq_sl2(1.0, 3.0)


def qubit_matrix(model, index):
    """Dense Hamiltonian of a built model reordered into the computational basis."""
    import numpy as np

    order = [index(s) for s in model.basis.states]
    H = model.hamiltonian.to_dense()
    out = np.zeros_like(H)
    out[np.ix_(order, order)] = H
    return out
