import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptwell.charpoly import is_real, tridiagonal_roots
from ptwell.errors import DomainError, InconsistencyError
from ptwell.realform import (
    build_real_system,
    complex_amplitudes,
    null_vector,
    real_system_determinant,
    real_system_roots,
    verify_matrix_chebyshev,
)
from ptwell.secular import eigenvector, model_for
from ptwell.spectral import critical_coupling

XI_CRIT = {n: critical_coupling(model_for(n, "even"), tol=1e-6).xi for n in range(9)}


def test_layout():
    M = build_real_system(0, 0.0, 0.0).matrix
    assert np.array_equal(M, [[0, 0, -1], [0, 0, 0], [-2, 0, 0]])
    s = build_real_system(1, 0.7, 0.3)
    assert s.dim == 5 and s.matrix.shape == (5, 5)
    assert np.array_equal(s.matrix[-1], [0, 0, -2, 0, -0.7])
    assert np.array_equal(s.matrix[:2, :2], [[-0.7, -0.3], [0.3, -0.7]])
    assert np.array_equal(s.matrix[:2, 2:4], -np.eye(2))
    with pytest.raises(DomainError):
        build_real_system(-1, 0.0, 0.0)


def test_determinant_examples():
    assert abs(real_system_determinant(0, 1.0, 1.0)) < 1e-10
    assert real_system_determinant(0, 0.0, 0.0) == 0
    assert abs(real_system_determinant(1, np.sqrt(3), 0.0)) < 1e-10


def test_matrix_chebyshev_examples():
    assert verify_matrix_chebyshev(0, 1.0, 1.0) <= 1e-10
    for k in range(1, 8):
        F = -2 * np.cos(k * np.pi / 8)
        if abs(F) > 1e-12:  # F = 0 has a two-dimensional null space at xi = 0
            assert verify_matrix_chebyshev(2, F, 0.0) <= 1e-10
    with pytest.raises(InconsistencyError):
        verify_matrix_chebyshev(0, 0.123, 1.0)


@given(st.integers(0, 8), st.floats(-4, 4), st.floats(-3, 3))
def test_determinant_matches_dense(n, F, xi):
    M = build_real_system(n, F, xi).matrix
    ref = np.linalg.det(M)
    got = real_system_determinant(n, F, xi)
    scale = np.prod(np.linalg.norm(M, axis=1))
    assert abs(got - ref) <= 1e-12 * max(scale, abs(ref))


@given(st.integers(0, 8), st.floats(0, 0.97))
def test_real_route_completeness(n, frac):
    xi = frac * XI_CRIT[n]
    F = tridiagonal_roots(model_for(n, "even").hamiltonian(xi)).roots
    assert np.all(is_real(F))
    got = real_system_roots(n, xi)
    assert got.size == F.size
    assert np.max(np.abs(got - np.sort(F.real))) <= 1e-8


@given(st.integers(0, 8), st.floats(0.01, 0.97))
def test_block_to_scalar(n, frac):
    xi = frac * XI_CRIT[n]
    for F in tridiagonal_roots(model_for(n, "even").hamiltonian(xi)).roots.real:
        alpha = complex_amplitudes(null_vector(n, F, xi))
        ref, _ = eigenvector(n, F, xi)
        # one global complex factor aligns the two
        c = np.vdot(ref, alpha) / np.vdot(ref, ref)
        assert np.max(np.abs(alpha - c * ref)) <= 1e-9 * np.max(np.abs(alpha))
        assert verify_matrix_chebyshev(n, F, xi) <= 1e-10 * max(1.0, xi)
