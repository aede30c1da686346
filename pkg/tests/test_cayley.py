import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from llgsp.cayley import (cayley_apply, cayley_matrix, preserving_step_field, preserving_step_point,
                          rotation_vector)

vec = arrays(np.float64, 3, elements=st.floats(-50, 50))


def _unit(v):
    n = np.linalg.norm(v)
    return v / n if n > 1e-6 else np.array([0.0, 0.0, 1.0])


@settings(max_examples=200, deadline=None)
@given(vec)
def test_cayley_matrix_is_orthogonal(w):
    Q = cayley_matrix(w)
    assert np.max(np.abs(Q.T @ Q - np.eye(3))) <= 1e-13
    assert np.linalg.det(Q) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(vec, vec, st.floats(0, 1), st.floats(1e-6, 1.0))
def test_point_step_preserves_norm_and_solves_relation(m, h, alpha, dt):
    m0 = _unit(m)
    m1 = preserving_step_point(m0, h, alpha, dt)
    assert abs(np.linalg.norm(m1) - 1.0) <= 1e-14
    # midpoint relation
    u = 0.5 * (m0 + m1)
    lhs = (m1 - m0) / dt
    rhs = -np.cross(u, h) - alpha * np.cross(u, np.cross(m0, h))
    assert np.max(np.abs(lhs - rhs)) <= 1e-9 * (1 + np.abs(h).max())


def test_closed_form_matches_matrix():
    rng = np.random.default_rng(7)
    w = rng.normal(size=(3, 50))
    m = rng.normal(size=(3, 50))
    out = cayley_apply(w, m)
    for j in range(50):
        np.testing.assert_allclose(out[:, j], cayley_matrix(w[:, j]) @ m[:, j], atol=1e-13)


def test_field_step_parallel_field_is_identity():
    m = np.zeros((3, 4))
    m[2] = 1.0
    h = 5.0 * m
    np.testing.assert_array_equal(preserving_step_field(m, h, 0.3, 0.1), m)


def test_field_step_drift_enters_linearly():
    m = np.zeros((3, 1))
    m[2] = 1.0
    drift = np.array([[1.0], [0.0], [0.0]])
    out = preserving_step_field(m, np.zeros_like(m), 0.0, 0.1, drift)
    np.testing.assert_allclose(out[:, 0], [0.1, 0.0, 1.0])


def test_rotation_vector_formula():
    m = np.array([1.0, 0.0, 0.0])
    h = np.array([0.0, 1.0, 0.0])
    np.testing.assert_allclose(rotation_vector(m, h, 0.5, 0.2), 0.1 * np.array([0.0, 1.0, 0.5]))


def test_invalid_inputs():
    with pytest.raises(ValueError):
        preserving_step_point([1, 0, 0], [0, 0, np.nan], 0.1, 0.1)
    with pytest.raises(ValueError):
        preserving_step_point([1, 0, 0], [0, 0, 1], 0.1, 0.0)
    with pytest.raises(ValueError):
        preserving_step_point([1, 0, 0], [0, 0, 1], -0.1, 0.1)
    with pytest.raises(ValueError, match="shape mismatch"):
        preserving_step_field(np.zeros((3, 2)), np.zeros((3, 3)), 0.1, 0.1)
