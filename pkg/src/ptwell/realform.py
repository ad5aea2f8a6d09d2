"""Real embedding of the even-``N`` square-well eigenproblem.

Writing ``alpha_k = a_k + i b_k`` and using ``beta_k = conj(alpha_k)`` with a
real central amplitude ``gamma``, the complex equations on the left half
split into real and imaginary parts. The unknowns ``(a_0, b_0, ..., a_n,
b_n, gamma)`` satisfy a real system of size ``2n + 3`` made of 2x2 blocks

    X = [[-F, -xi], [xi, -F]]

on the diagonal and ``-I`` beside it. The last row is the central equation
``-alpha_n - F gamma - beta_n = 0``, folded to ``-2 a_n - F gamma = 0``; the
doubled entry makes the real matrix non-symmetric.

Solutions are ``c_k = U_k(X/2) c_0`` with ``c_k = (a_k, b_k)``, so this is
a third, independent route to the real eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack

from .chebyshev import cheb_u_mat
from .errors import DomainError, InconsistencyError
from .secular import scan_real_zeros

__all__ = [
    "PentadiagonalSystem",
    "build_real_system",
    "real_system_determinant",
    "scaled_determinant",
    "real_system_roots",
    "null_vector",
    "complex_amplitudes",
    "verify_matrix_chebyshev",
    "block_matrix",
]

NULL_TOL = 1e-8
D_VEC = np.array([1.0, 0.0])


def block_matrix(F: float, xi: float) -> np.ndarray:
    return np.array([[-F, -xi], [xi, -F]], dtype=float)


@dataclass(frozen=True)
class PentadiagonalSystem:
    n: int
    F: float
    xi: float
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.n + 3

    @property
    def X(self) -> np.ndarray:
        return block_matrix(self.F, self.xi)

    def banded(self, kl: int = 2, ku: int = 2) -> np.ndarray:
        """LAPACK general-band storage with ``kl`` extra rows for pivoting."""
        m = self.dim
        ab = np.zeros((2 * kl + ku + 1, m))
        for j in range(m):
            for i in range(max(0, j - ku), min(m, j + kl + 1)):
                ab[kl + ku + i - j, j] = self.matrix[i, j]
        return ab


def build_real_system(n: int, F: float, xi: float) -> PentadiagonalSystem:
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    n = int(n)
    m = 2 * n + 3
    M = np.zeros((m, m))
    X = block_matrix(F, xi)
    for k in range(n + 1):
        M[2 * k:2 * k + 2, 2 * k:2 * k + 2] = X
        if k < n:
            M[2 * k:2 * k + 2, 2 * k + 2:2 * k + 4] = -np.eye(2)
            M[2 * k + 2:2 * k + 4, 2 * k:2 * k + 2] = -np.eye(2)
    M[2 * n:2 * n + 2, -1] = -D_VEC
    M[-1, 2 * n:2 * n + 2] = -2 * D_VEC
    M[-1, -1] = -F
    return PentadiagonalSystem(n, float(F), float(xi), M)


def real_system_determinant(n: int, F: float, xi: float) -> float:
    """Determinant by banded LU with partial pivoting (LAPACK ``dgbtrf``)."""
    sys = build_real_system(n, F, xi)
    lu, piv, info = lapack.dgbtrf(sys.banded(), 2, 2)
    if info < 0:
        raise RuntimeError(f"dgbtrf: illegal argument {-info}")
    u = lu[4]  # main diagonal of U sits at row kl + ku
    swaps = int(np.sum(piv != np.arange(sys.dim)))
    det = float((-1) ** swaps * np.prod(u))
    if not np.isfinite(det):
        # dgbtrf inverts subnormal pivots to inf; dense LU scales rows first
        with np.errstate(all="ignore"):
            det = float(np.linalg.det(sys.matrix))
    return det + 0.0


def scaled_determinant(n: int, F: float, xi: float) -> float:
    """Determinant divided by ``prod max(|row|, 1)``, a Hadamard bound, so in ``[-1, 1]``.

    Clamping at one keeps the ratio continuous where a row norm vanishes.
    """
    rows = np.linalg.norm(build_real_system(n, F, xi).matrix, axis=1)
    return real_system_determinant(n, F, xi) / float(np.prod(np.maximum(rows, 1.0)))


def real_system_roots(n: int, xi: float, *, xtol: float = 1e-12, points: int | None = None) -> np.ndarray:
    """Real ``F`` at which the real system is singular."""
    lim = 2.0 + abs(xi)
    return scan_real_zeros(lambda F: scaled_determinant(n, F, xi), -lim, lim,
                           points or 20 * (n + 2), xtol=xtol)


def null_vector(n: int, F: float, xi: float, tol: float = NULL_TOL) -> np.ndarray:
    """Unit null vector ``(a_0, b_0, ..., a_n, b_n, gamma)``.

    Raises :class:`InconsistencyError` when the smallest singular value
    exceeds ``tol`` relative to the largest.
    """
    M = build_real_system(n, F, xi).matrix
    _, s, vt = np.linalg.svd(M)
    if s[-1] > tol * s[0]:
        raise InconsistencyError(
            f"no null vector at F = {F!r}, xi = {xi!r} (sigma_min / sigma_max = {s[-1] / s[0]:.3g})"
        )
    v = vt[-1]
    m = int(np.argmax(np.abs(v)))
    return v if v[m] > 0 else -v


def complex_amplitudes(v: np.ndarray) -> np.ndarray:
    """``alpha_k = a_k + i b_k`` from a real null vector."""
    v = np.asarray(v)
    n1 = (v.size - 1) // 2
    return v[0:2 * n1:2] + 1j * v[1:2 * n1:2]


def verify_matrix_chebyshev(n: int, F: float, xi: float, tol: float = NULL_TOL) -> float:
    """Max residual of the block recurrence with ``c_k = U_k(X/2) c_0``.

    ``c_0`` comes from the null space of the real system and ``gamma`` from
    the closed form ``c_{n+1} = (gamma, 0)``. The rows checked are the
    ``n + 1`` block rows and the anomalous last row.
    """
    v = null_vector(n, F, xi, tol)
    c0 = v[:2] / np.linalg.norm(v[:2])
    half = block_matrix(F, xi) / 2
    c = [cheb_u_mat(k, half) @ c0 for k in range(n + 2)]
    gamma = c[n + 1][0]
    X = block_matrix(F, xi)
    res = []
    for k in range(n + 1):
        r = X @ c[k] - (c[k - 1] if k > 0 else 0.0)
        r = r - (c[k + 1] if k < n else D_VEC * gamma)
        res.append(np.max(np.abs(r)))
    res.append(abs(-2 * D_VEC @ c[n] - F * gamma))
    return float(max(res))
