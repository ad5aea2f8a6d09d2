import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptwell.chebyshev import cheb_t, cheb_u, cheb_u_all, cheb_u_mat, complex_to_mat2
from ptwell.errors import DomainError

bounded = st.floats(-2, 2, allow_nan=False)
zs = st.builds(complex, bounded, bounded).filter(lambda z: abs(z) <= 2)


def test_u_examples():
    assert cheb_u(0, 0.3 - 1.7j) == 1
    assert abs(cheb_u(2, 0.5 + 0j)) < 1e-15
    assert cheb_u(3, 0.5j) == -3j


def test_t_examples():
    assert cheb_t(0, 5 + 2j) == 1
    assert cheb_t(1, 0.25 - 1j) == 0.25 - 1j
    assert cheb_t(2, 0.5j) == -1.5


def test_u_mat_examples():
    X = np.array([[0.3, -1.1], [1.1, 0.3]])
    assert np.array_equal(cheb_u_mat(0, X / 2), np.eye(2))
    assert np.allclose(cheb_u_mat(1, X / 2), X, rtol=0, atol=1e-15)
    X = np.array([[-1.0, 0.0], [0.0, -1.0]])  # F = 1, xi = 0
    assert np.allclose(cheb_u_mat(2, X / 2), 0, atol=1e-15)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        cheb_u(-1, 0.5)
    with pytest.raises(DomainError):
        cheb_u(2, complex(np.nan, 0))
    with pytest.raises(DomainError):
        cheb_t(1, np.inf)
    with pytest.raises(DomainError):
        cheb_u_mat(2, [[np.nan, 0], [0, 1]])
    with pytest.raises(DomainError):
        cheb_u_mat(2, np.eye(3))


@given(zs, st.integers(1, 29))
def test_recurrence(z, k):
    lhs = cheb_u(k + 1, z) - 2 * z * cheb_u(k, z) + cheb_u(k - 1, z)
    scale = max(1.0, abs(cheb_u(k + 1, z)), abs(2 * z * cheb_u(k, z)))
    assert abs(lhs) <= 1e-12 * scale


@given(st.floats(1e-3, np.pi - 1e-3), st.integers(0, 30))
def test_trigonometric_identity(theta, k):
    assert abs(cheb_u(k, np.cos(theta)) - np.sin((k + 1) * theta) / np.sin(theta)) <= 1e-10 * (k + 1)


@given(zs, st.integers(1, 30))
def test_t_u_relation(z, k):
    lhs = cheb_t(k, z)
    rhs = cheb_u(k, z) - z * cheb_u(k - 1, z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(cheb_u(k, z)))


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 25))
def test_matrix_argument_is_complex_embedding(F, xi, k):
    X = np.array([[-F, -xi], [xi, -F]])
    want = complex_to_mat2(cheb_u(k, complex(-F, xi) / 2))
    got = cheb_u_mat(k, X / 2)
    assert np.max(np.abs(got - want)) <= 1e-12 * max(1.0, np.max(np.abs(want)))


def test_all_matches_single():
    z = 0.3 + 0.8j
    assert np.allclose(cheb_u_all(12, z), [cheb_u(k, z) for k in range(13)], rtol=1e-14)


def test_array_argument():
    z = np.linspace(-1, 1, 7)
    assert np.allclose(cheb_u(4, z), [cheb_u(4, float(v)) for v in z])
