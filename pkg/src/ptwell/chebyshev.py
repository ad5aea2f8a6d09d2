"""Chebyshev polynomials of scalar and 2x2 matrix argument.

Both kinds share the recurrence ``Q[k+1] = 2 z Q[k] - Q[k-1]`` and differ
only in the seeds::

    T_0 = 1, T_1 = z
    U_0 = 1, U_1 = 2 z

Evaluation is by plain forward recurrence. For the degrees used here
(at most a few hundred) and complex arguments this is ordinary polynomial
arithmetic, so no trigonometric shortcut is taken.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

__all__ = ["cheb_u", "cheb_t", "cheb_u_mat", "cheb_u_all", "complex_to_mat2"]


def _check_k(k):
    if int(k) != k or k < 0:
        raise DomainError(f"degree must be a non-negative integer, got {k!r}")
    return int(k)


def _check_finite(z):
    if not np.all(np.isfinite(z)):
        raise DomainError(f"non-finite argument {z!r}")


def _recur(k, q0, q1, two_z):
    if k == 0:
        return q0
    prev, cur = q0, q1
    for _ in range(k - 1):
        prev, cur = cur, two_z * cur - prev
    return cur


def cheb_u(k: int, z):
    """Second-kind Chebyshev polynomial ``U_k(z)``.

    ``z`` may be a real or complex scalar, or a numpy array (evaluated
    elementwise).
    """
    k = _check_k(k)
    _check_finite(z)
    z = np.asarray(z) if np.ndim(z) else z
    one = z * 0 + 1
    return _recur(k, one, 2 * z, 2 * z)


def cheb_t(k: int, z):
    """First-kind Chebyshev polynomial ``T_k(z)``."""
    k = _check_k(k)
    _check_finite(z)
    z = np.asarray(z) if np.ndim(z) else z
    one = z * 0 + 1
    return _recur(k, one, z, 2 * z)


def cheb_u_all(kmax: int, z):
    """Return ``[U_0(z), ..., U_kmax(z)]`` as a complex array."""
    kmax = _check_k(kmax)
    _check_finite(z)
    out = np.empty(kmax + 1, dtype=complex)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2 * z
    for j in range(1, kmax):
        out[j + 1] = 2 * z * out[j] - out[j - 1]
    return out


def cheb_u_mat(k: int, M) -> np.ndarray:
    """``U_k(M)`` for a 2x2 real matrix ``M``; ``U_0 = I`` and ``U_1 = 2M``.

    Callers working with the real embedding ``X`` of a complex number pass
    ``X / 2`` as the argument.
    """
    k = _check_k(k)
    M = np.asarray(M, dtype=float)
    if M.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got shape {M.shape}")
    _check_finite(M)
    eye = np.eye(2)
    if k == 0:
        return eye
    prev, cur = eye, 2 * M
    for _ in range(k - 1):
        prev, cur = cur, 2 * M @ cur - prev
    return cur


def complex_to_mat2(w: complex) -> np.ndarray:
    """Real 2x2 representation ``[[re, -im], [im, re]]`` of a complex number."""
    w = complex(w)
    return np.array([[w.real, -w.imag], [w.imag, w.real]])
