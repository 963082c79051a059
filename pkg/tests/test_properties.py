"""Property-based tests for q-numbers, q-Clebsch-Gordan data and the gauging map."""

from functools import lru_cache

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from src.catdual.core.mpo_engine import gauging_map
from src.catdual.core.quantum_group import q_clebsch_gordan, qnumber

# q-numbers lose precision as q approaches 1 from either side
deformations = st.floats(min_value=0.5, max_value=2.0, allow_nan=False).filter(
    lambda q: q == 1.0 or abs(q - 1.0) > 1e-3
)
amplitudes = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)


@lru_cache(maxsize=None)
def _z2_gauging():
    return gauging_map("Z2", 4)


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(min_value=0, max_value=8), deformations)
def test_qnumber_is_symmetric_in_q(n, q):
    assert np.isclose(qnumber(n, q), qnumber(n, 1.0 / q))


@settings(suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(min_value=1, max_value=8), deformations)
def test_qnumber_recursion(n, q):
    """[2][n] = [n+1] + [n-1]"""
    assert np.isclose(qnumber(2, q) * qnumber(n, q), qnumber(n + 1, q) + qnumber(n - 1, q))


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3), deformations)
def test_clebsch_gordan_is_orthogonal(two_a, two_b, q):
    """All coupled channels together form an orthogonal change of basis"""
    cg = q_clebsch_gordan(two_a, two_b, q)
    columns = np.concatenate([c.reshape((two_a + 1) * (two_b + 1), -1) for c in cg.values()], axis=1)
    assert columns.shape[0] == columns.shape[1]
    assert np.allclose(columns.T @ columns, np.eye(columns.shape[1]), atol=1e-10)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(amplitudes, amplitudes)
def test_gauging_forgets_global_flips(a, b):
    """Flipping every matter spin does not change the gauge-field image"""
    gm = _z2_gauging()
    image = gm.apply(gm.product_state(np.array([a, b])))
    flipped = gm.apply(gm.product_state(np.array([b, a])))
    assert np.allclose(image, flipped, atol=1e-12)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(amplitudes, amplitudes)
def test_gauging_lands_on_flat_configurations(a, b):
    """Gauge-field images carry no weight on configurations with nontrivial holonomy"""
    gm = _z2_gauging()
    image = gm.apply(gm.product_state(np.array([a, b])))
    support = np.abs(gm.flat_state()) > 0
    assert np.allclose(image[~support], 0, atol=1e-12)
