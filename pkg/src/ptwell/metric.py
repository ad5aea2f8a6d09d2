"""Biorthogonal eigenbasis and the quasi-Hermiticity metric.

The scaled matrix ``A`` equals its own transpose, so a left eigenvector is
the plain transpose of the right one: with ``A x = F x`` we have
``x^T A = F x^T``. The dual ket is therefore ``conj(x)`` and the pairing
``<<n|n>`` is the bilinear product ``x^T x``, normalised to one.

The metric is the weighted sum ``Theta = sum_n theta_n conj(x_n) x_n^T``.
Each term is a positive rank-one Hermitian matrix, so ``Theta`` is positive
definite for any basis and any positive weights. What ties the metric to a
real spectrum is the intertwining ``A^dagger Theta = Theta A``, which holds
term by term only when ``F_n`` is real. Construction is refused otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_banded

from .charpoly import is_real, tridiagonal_roots
from .errors import DegeneracyError, DomainError, NonConstructibleError, NumericFailure
from .model import ScaledHamiltonian, WellModel
from .spectral import spectrum

__all__ = [
    "BiorthogonalBasis",
    "MetricMatrix",
    "ParityMatrix",
    "biorthogonalize",
    "build_metric",
    "metric_for",
    "verify_quasi_hermiticity",
    "verify_pseudo_hermiticity",
    "completeness_defect",
    "reconstruction_defect",
    "left_residual",
]

GAP_TOL = 1e-8
PAIRING_TOL = 1e-6
RESIDUAL_TOL = 1e-11
SEED = 20240601


def _dense(H) -> np.ndarray:
    if isinstance(H, ScaledHamiltonian):
        return H.dense()
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {H.shape}")
    return H


@dataclass(frozen=True)
class ParityMatrix:
    """Anti-diagonal flip ``P`` of dimension ``dim``."""

    dim: int

    @property
    def matrix(self) -> np.ndarray:
        return np.eye(self.dim)[::-1]

    def apply(self, v):
        return np.asarray(v)[::-1]

    def conjugate(self, M):
        """``P M P`` without forming ``P``."""
        return np.asarray(M)[::-1, ::-1]


@dataclass(frozen=True)
class BiorthogonalBasis:
    """Right eigenvectors as columns of ``right``; ``eigenvalues`` in the same order."""

    H: ScaledHamiltonian
    eigenvalues: np.ndarray
    right: np.ndarray
    raw_pairings: np.ndarray  # x^T x / |x|**2 before normalisation

    @property
    def left(self) -> np.ndarray:
        """Dual kets ``|n>>`` as columns; ``<<n|`` is the transpose of column ``n`` conjugated."""
        return self.right.conj()

    @property
    def pairings(self) -> np.ndarray:
        """``<<n|n>`` after normalisation (ones)."""
        return np.einsum("in,in->n", self.right, self.right)

    def overlap(self) -> np.ndarray:
        """Matrix of ``<<m|n> = x_m^T x_n``."""
        return self.right.T @ self.right

    def biorthogonality_defect(self) -> float:
        G = self.overlap()
        return float(np.max(np.abs(G - np.eye(G.shape[0]))))


@dataclass(frozen=True)
class MetricMatrix:
    theta: np.ndarray
    weights: np.ndarray
    hermiticity_defect: float  # before symmetrisation

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.theta)

    def is_positive_definite(self) -> bool:
        try:
            cholesky(self.theta, lower=True)
        except LinAlgError:
            return False
        return True

    def to_dict(self) -> dict:
        return {
            "theta": [[[float(v.real), float(v.imag)] for v in row] for row in self.theta],
            "weights": [float(w) for w in self.weights],
            "hermiticity_defect": self.hermiticity_defect,
        }


def _inverse_iteration(H: ScaledHamiltonian, F: complex, rng, previous, iterations=2):
    n = H.dim
    # real arithmetic for a real matrix and eigenvalue keeps the vector exactly real
    real = not np.any(H.diagonal.imag) and complex(F).imag == 0
    dtype = float if real else complex
    # a shift exactly on the eigenvalue would make the solve singular
    shift = F + 1e-14 * (1.0 + abs(F)) * (1 if real else 1 + 1j)
    ab = np.zeros((3, n), dtype=dtype)
    ab[0, 1:] = -1.0
    ab[1] = (H.diagonal - shift).real if real else H.diagonal - shift
    ab[2, :-1] = -1.0
    x = rng.standard_normal(n)
    if not real:
        x = x + 1j * rng.standard_normal(n)
    for _ in range(iterations):
        for y in previous:
            x = x - (y @ x) / (y @ y) * y
        x = solve_banded((1, 1), ab, x, check_finite=False)
        x = x / np.linalg.norm(x)
    return x


def biorthogonalize(model: WellModel | ScaledHamiltonian, xi: float | None = None,
                    *, seed: int = SEED) -> BiorthogonalBasis:
    """Right eigenvectors by inverse iteration, normalised so ``x^T x = 1``.

    Raises :class:`DegeneracyError` when two eigenvalues are closer than
    ``1e-8`` or an eigenvector is (numerically) self-orthogonal, which is the
    signature of an exceptional point.
    """
    if isinstance(model, ScaledHamiltonian):
        H = model
        F = tridiagonal_roots(H).roots
    else:
        if xi is None:
            raise DomainError("xi is required with a model")
        H = model.hamiltonian(xi)
        F = spectrum(model, xi).eigenvalues
    n = F.size
    if n > 1:
        gaps = np.abs(F[:, None] - F[None, :]) + np.diag(np.full(n, np.inf))
        i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
        if gaps[i, j] <= GAP_TOL:
            raise DegeneracyError(
                f"eigenvalues {F[i]:.10g} and {F[j]:.10g} coincide within {GAP_TOL:g}",
                pair=(complex(F[i]), complex(F[j])),
            )
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(np.max(np.abs(H.diagonal))) + 2.0)
    X = np.empty((n, n), dtype=complex)
    raw = np.empty(n)
    for k in range(n):
        twins = [X[:, j] for j in range(k) if abs(F[j] - F[k]) <= GAP_TOL]
        x = _inverse_iteration(H, F[k], rng, twins)
        p = x @ x
        raw[k] = abs(p)
        if abs(p) < PAIRING_TOL:
            j = int(np.argmin(np.abs(F - F[k]) + np.where(np.arange(n) == k, np.inf, 0)))
            raise DegeneracyError(
                f"eigenvector at F = {F[k]:.10g} is self-orthogonal (|x^T x| = {abs(p):.3g}); "
                f"nearest eigenvalue {F[j]:.10g}",
                pair=(complex(F[k]), complex(F[j])),
            )
        res = np.linalg.norm(H.matvec(x) - F[k] * x)
        if res > RESIDUAL_TOL * scale:
            raise NumericFailure(f"inverse iteration residual {res:.3g} at F = {F[k]:.10g}")
        x = x / np.sqrt(p)
        # fix the remaining sign by the largest component
        m = int(np.argmax(np.abs(x)))
        if x[m].real < 0 or (x[m].real == 0 and x[m].imag < 0):
            x = -x
        X[:, k] = x
    return BiorthogonalBasis(H, F, X, raw)


def build_metric(basis: BiorthogonalBasis, weights=None, *, allow_complex: bool = False) -> MetricMatrix:
    """``Theta = sum_n theta_n |n>> <<n|`` with default weights one.

    Refuses with :class:`NonConstructibleError` when the spectrum has
    complex eigenvalues unless ``allow_complex`` is set (the result is then
    not a metric for ``H``; see :func:`verify_quasi_hermiticity`).
    """
    n = basis.eigenvalues.size
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise DomainError(f"need {n} weights, got {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise DomainError("weights must be positive")
    if not allow_complex and not np.all(is_real(basis.eigenvalues)):
        raise NonConstructibleError("spectrum is not real; no metric intertwines H and H^dagger")
    L = basis.left
    theta = (L * w) @ L.conj().T  # sum_n w_n conj(x_n) x_n^T
    defect = float(np.max(np.abs(theta - theta.conj().T)))
    theta = 0.5 * (theta + theta.conj().T)
    return MetricMatrix(theta, w, defect)


def metric_for(model: WellModel, xi: float, weights=None) -> tuple[BiorthogonalBasis, MetricMatrix]:
    basis = biorthogonalize(model, xi)
    return basis, build_metric(basis, weights)


def verify_quasi_hermiticity(H, theta) -> float:
    """``max|H^dagger Theta - Theta H| / max|Theta|``."""
    A = _dense(H)
    T = theta.theta if isinstance(theta, MetricMatrix) else np.asarray(theta, dtype=complex)
    if T.shape != A.shape:
        raise DomainError(f"shapes {A.shape} and {T.shape} do not conform")
    return float(np.max(np.abs(A.conj().T @ T - T @ A)) / np.max(np.abs(T)))


def verify_pseudo_hermiticity(H) -> float:
    """``max|H^dagger - P H P|`` with ``P`` the anti-diagonal flip."""
    A = _dense(H)
    return float(np.max(np.abs(A.conj().T - ParityMatrix(A.shape[0]).conjugate(A))))


def completeness_defect(basis: BiorthogonalBasis) -> float:
    """``max|sum_n |n> <<n| - I|``."""
    X = basis.right
    return float(np.max(np.abs(X @ X.T - np.eye(X.shape[0]))))


def reconstruction_defect(basis: BiorthogonalBasis) -> float:
    """``max|sum_n |n> F_n <<n| / <<n|n> - A|``."""
    X = basis.right
    R = (X * (basis.eigenvalues / basis.pairings)) @ X.T
    return float(np.max(np.abs(R - basis.H.dense())))


def left_residual(basis: BiorthogonalBasis) -> float:
    """``max_n |<<n| A - F_n <<n||``."""
    X = basis.right
    A = basis.H.dense()
    return float(np.max(np.abs(X.T @ A - basis.eigenvalues[:, None] * X.T)))
