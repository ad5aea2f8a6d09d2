import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ptwell.errors import DegeneracyError, DomainError, NonConstructibleError
from ptwell.metric import (
    ParityMatrix,
    biorthogonalize,
    build_metric,
    completeness_defect,
    left_residual,
    reconstruction_defect,
    verify_pseudo_hermiticity,
    verify_quasi_hermiticity,
)
from ptwell.model import shifted_well, square_well
from ptwell.spectral import critical_coupling

SUBCRITICAL = [
    (square_well(3), 1.0),
    (square_well(4), np.sqrt(2)),
    (square_well(5), np.sqrt(5) / 4),
    (square_well(6), 0.5),
    (square_well(8), 4.4627 / 16),
    (shifted_well(6, "1/2"), np.sqrt(1.5)),
    (shifted_well(8, "1/2"), 0.845479352),
    (shifted_well(8, "5/8"), 1.1547005),
    (shifted_well(8, "3/8"), 0.5875691),
]


def test_parity_matrix():
    P = ParityMatrix(5).matrix
    assert np.array_equal(P @ P, np.eye(5)) and np.array_equal(P, P.conj().T)


def test_hermitian_limit():
    basis = biorthogonalize(square_well(6), 0.0)
    assert np.all(basis.right.imag == 0)
    assert np.array_equal(basis.left, basis.right)
    theta = build_metric(basis)
    assert np.allclose(theta.theta, np.eye(5), atol=1e-12)
    assert verify_quasi_hermiticity(basis.H, np.eye(5)) == 0


def test_n4_xi1():
    basis = biorthogonalize(square_well(4), 1.0)
    assert np.allclose(basis.eigenvalues, [-1, 0, 1], atol=1e-14)
    assert basis.biorthogonality_defect() <= 1e-10
    theta = build_metric(basis)
    assert theta.is_positive_definite() and np.all(theta.eigenvalues() > 0)
    assert verify_quasi_hermiticity(basis.H, theta) <= 1e-10


def test_exceptional_point_is_degenerate():
    with pytest.raises(DegeneracyError) as info:
        biorthogonalize(shifted_well(6, "1/2"), np.sqrt(1.5))
    assert info.value.pair is not None


def test_weights():
    basis = biorthogonalize(square_well(6), 0.3)
    a = build_metric(basis).theta
    b = build_metric(basis, [2, 1, 1, 1, 1]).theta
    assert np.max(np.abs(a - b)) > 1e-3
    assert verify_quasi_hermiticity(basis.H, b) <= 1e-10
    for bad in ([1, 1, 1, 1, 0], [1, 1, 1, 1, -2], [1, 1]):
        with pytest.raises(DomainError):
            build_metric(basis, bad)


def test_dirac_metric_fails():
    H = square_well(6).hamiltonian(0.3)
    assert verify_quasi_hermiticity(H, np.eye(5)) > 0.1


def test_refusal_past_critical():
    m = square_well(4)
    with pytest.raises(NonConstructibleError):
        build_metric(biorthogonalize(m, 2.0))
    # built anyway, the sum is positive but does not intertwine H and H^dagger
    theta = build_metric(biorthogonalize(m, 2.0), allow_complex=True)
    assert verify_quasi_hermiticity(m.hamiltonian(2.0), theta) > 1e-3


@pytest.mark.parametrize("model", [square_well(4), shifted_well(8, "3/8"), square_well(7)])
def test_pseudo_hermiticity(model):
    for xi in (0.0, 0.4, 3.0):
        assert verify_pseudo_hermiticity(model.hamiltonian(xi)) == 0


@given(st.sampled_from(SUBCRITICAL), st.floats(0, 0.98), st.lists(st.floats(0.1, 10), min_size=9, max_size=9))
def test_metric_properties(case, frac, w):
    model, crit = case
    xi = frac * crit
    basis = biorthogonalize(model, xi)
    theta = build_metric(basis, w[: model.dim])
    assert theta.hermiticity_defect <= 1e-12 * np.max(np.abs(theta.theta))
    assert theta.is_positive_definite()
    assert verify_quasi_hermiticity(basis.H, theta) <= 1e-10
    assert basis.biorthogonality_defect() <= 1e-10 * max(1.0, 1 / np.min(basis.raw_pairings))
    assert completeness_defect(basis) <= 1e-9 * max(1.0, 1 / np.min(basis.raw_pairings))
    assert reconstruction_defect(basis) <= 1e-9 * max(1.0, 1 / np.min(basis.raw_pairings))
    assert left_residual(basis) <= 1e-10 * max(1.0, 1 / np.min(basis.raw_pairings))


@given(st.sampled_from([3, 4, 5, 6, 7, 8, 10]), st.floats(1.05, 3))
def test_refuses_past_critical(N, factor):
    m = square_well(N)
    xi = factor * critical_coupling(m, tol=1e-6).bracket[1]
    try:
        basis = biorthogonalize(m, xi)
    except DegeneracyError:
        return
    with pytest.raises(NonConstructibleError):
        build_metric(basis)
