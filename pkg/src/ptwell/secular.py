"""Matching method for the square well (``q = 0``).

On each half of the lattice the amplitudes obey the Chebyshev recurrence,
so a PT-symmetric eigenvector is fixed by one complex number ``c = a + ib``:

    alpha_k = c U_k(z),   beta_k = conj(alpha_k),   z = (-F + i xi) / 2.

Gluing the two halves at the centre gives two real linear conditions on
``(a, b)``. Their 2x2 determinant, as a function of real ``F``, vanishes
exactly at the real eigenvalues. Even ``N = 2n + 4`` has a central site
``gamma``; odd ``N = 2n + 3`` does not.

The combined closed forms that eliminate ``(a, b)`` analytically are also
evaluated, but only as diagnostics: the even-``N`` combination built from
``T_{n+1}`` and ``U_{n+1}`` does not vanish at the true eigenvalues
(at ``n = 0`` it reduces to ``F**2 + xi**2``), so root finding never uses it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .chebyshev import cheb_t, cheb_u
from .errors import DomainError, SingularPointError
from .model import WellModel, square_well

__all__ = [
    "Parity",
    "MatchingSystem",
    "TrigPoint",
    "matching_matrix",
    "matching_det_even",
    "matching_det_odd",
    "matching_det",
    "normalization",
    "eigenvector",
    "full_vector",
    "secular_printed_even",
    "secular_printed_odd",
    "trig_map",
    "trig_forward",
    "trig_residual",
    "robust_level_check",
    "secular_roots",
    "scan_real_zeros",
    "model_for",
    "block_size",
]

Parity = Literal["even", "odd"]


def _parity(parity: str) -> str:
    if parity not in ("even", "odd"):
        raise DomainError(f"parity must be 'even' or 'odd', got {parity!r}")
    return parity


def model_for(n: int, parity: Parity) -> WellModel:
    """Square-well model of block size ``n``: ``N = 2n + 4`` (even) or ``2n + 3``."""
    return square_well(2 * n + 4 if _parity(parity) == "even" else 2 * n + 3)


def block_size(N: int) -> tuple[int, str]:
    """Inverse of :func:`model_for`: ``(n, parity)`` for lattice size ``N``."""
    if N % 2 == 0:
        if N < 4:
            raise DomainError("even N must be >= 4")
        return (N - 4) // 2, "even"
    if N < 3:
        raise DomainError("odd N must be >= 3")
    return (N - 3) // 2, "odd"


@dataclass(frozen=True)
class MatchingSystem:
    n: int
    parity: str
    F: float
    xi: float

    @property
    def matrix(self) -> np.ndarray:
        return matching_matrix(self.n, self.F, self.xi, self.parity)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


def _uv(n, F, xi):
    z = complex(-F, xi) / 2
    return complex(cheb_u(n + 1, z)), complex(cheb_u(n, z))


def matching_matrix(n: int, F: float, xi: float, parity: Parity = "even") -> np.ndarray:
    """Rows of the two real conditions on ``(a, b)``.

    even: ``Im(c U_{n+1}) = 0`` and ``F Re(c U_{n+1}) + 2 Re(c U_n) = 0``;
    odd:  ``c U_{n+1}(z) = conj(c) U_n(conj z)`` split into real and imaginary parts.
    """
    u, v = _uv(n, F, xi)
    if _parity(parity) == "even":
        return np.array(
            [
                [u.imag, u.real],
                [F * u.real + 2 * v.real, -F * u.imag - 2 * v.imag],
            ]
        )
    return np.array(
        [
            [u.real - v.real, -(u.imag - v.imag)],
            [u.imag + v.imag, u.real + v.real],
        ]
    )


def matching_det_even(n: int, F: float, xi: float) -> float:
    """``-F |U_{n+1}|**2 - 2 Re(U_{n+1} conj U_n)`` at ``z = (-F + i xi)/2``."""
    u, v = _uv(n, F, xi)
    return -F * abs(u) ** 2 - 2 * (u * v.conjugate()).real


def matching_det_odd(n: int, F: float, xi: float) -> float:
    """``|U_{n+1}|**2 - |U_n|**2`` at ``z = (-F + i xi)/2``."""
    u, v = _uv(n, F, xi)
    return abs(u) ** 2 - abs(v) ** 2


def matching_det(n: int, F: float, xi: float, parity: Parity) -> float:
    if _parity(parity) == "even":
        return matching_det_even(n, F, xi)
    return matching_det_odd(n, F, xi)


def normalization(n: int, F: float, xi: float, parity: Parity) -> complex:
    """Unit null vector ``(a, b)`` of the matching system as ``a + ib``.

    Fixed up to sign by ``a >= 0`` (``b > 0`` when ``a = 0``).
    """
    M = matching_matrix(n, F, xi, parity)
    _, s, vt = np.linalg.svd(M)
    a, b = vt[-1]
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return complex(a, b)


def eigenvector(n: int, F, xi: float, c: complex | None = None, parity: Parity = "even"):
    """Amplitudes ``(alpha_0..alpha_n, gamma)``; ``gamma`` is ``None`` for odd ``N``.

    Without ``c`` the matching null vector is used.
    """
    parity = _parity(parity)
    if c is None:
        c = normalization(n, float(np.real(F)), xi, parity)
    z = (-F + 1j * xi) / 2
    alpha = np.array([c * cheb_u(k, z) for k in range(n + 1)], dtype=complex)
    gamma = c * cheb_u(n + 1, z) if parity == "even" else None
    return alpha, gamma


def full_vector(n: int, F, xi: float, c: complex | None = None, parity: Parity = "even"):
    """Eigenvector in lattice order: ``alpha``, then ``gamma`` (even), then reversed ``conj(alpha)``."""
    alpha, gamma = eigenvector(n, F, xi, c, parity)
    beta = np.conj(alpha)[::-1]
    if gamma is None:
        return np.concatenate([alpha, beta])
    return np.concatenate([alpha, [gamma], beta])


def secular_printed_even(n: int, F, xi: float) -> complex:
    """``T_{n+1}(z) U_{n+1}(w) + T_{n+1}(w) U_{n+1}(z)`` with ``w = conj z`` (diagnostic)."""
    z = (-F + 1j * xi) / 2
    w = (-F - 1j * xi) / 2
    return complex(cheb_t(n + 1, z) * cheb_u(n + 1, w) + cheb_t(n + 1, w) * cheb_u(n + 1, z))


def secular_printed_odd(n: int, F, xi: float) -> complex:
    """``U_n(z) U_n(w) - U_{n+1}(z) U_{n+1}(w)``; equals ``-matching_det_odd`` for real F."""
    z = (-F + 1j * xi) / 2
    w = (-F - 1j * xi) / 2
    return complex(cheb_u(n, z) * cheb_u(n, w) - cheb_u(n + 1, z) * cheb_u(n + 1, w))


# ----------------------------------------------------------------------------
# trigonometric parametrisation  (-F + i xi)/2 = cos(alpha + i beta)


@dataclass(frozen=True)
class TrigPoint:
    alpha: float
    beta: float

    @property
    def phi(self) -> complex:
        return complex(self.alpha, self.beta)


def trig_map(F: float, xi: float) -> TrigPoint:
    """Solve ``cos(alpha) cosh(beta) = -F/2``, ``sin(alpha) sinh(beta) = -xi/2`` with ``beta <= 0``.

    ``alpha`` lies in ``[0, pi]`` for ``xi >= 0`` and in ``(-pi, 0]`` for ``xi < 0``.
    """
    if not (np.isfinite(F) and np.isfinite(xi)):
        raise DomainError("F and xi must be finite")
    t = F * F + xi * xi - 4.0
    root = np.hypot(t, 4.0 * xi)
    # sinh(beta)**2 as the positive root of 4 s**2 - t s - xi**2 = 0, cancellation-free
    s = (t + root) / 8.0 if t >= 0 else (2.0 * xi * xi / (root - t) if root - t > 0 else 0.0)
    beta = -np.arcsinh(np.sqrt(s))
    cos_a = -F / (2.0 * np.cosh(beta))
    if beta != 0:
        # atan2 keeps full accuracy near alpha = 0 and alpha = pi
        alpha = float(np.arctan2(-xi / (2.0 * np.sinh(beta)) + 0.0, cos_a))
    else:
        alpha = float(np.arccos(np.clip(cos_a, -1.0, 1.0)))
    return TrigPoint(alpha, float(beta))


def trig_forward(point: TrigPoint) -> tuple[float, float]:
    """``(F, xi)`` from ``(alpha, beta)``."""
    a, b = point.alpha, point.beta
    return -2.0 * np.cos(a) * np.cosh(b), -2.0 * np.sin(a) * np.sinh(b)


def trig_residual(n: int, point: TrigPoint) -> float:
    """``Re[sin((n+1) phi) cos((n+1) conj(phi)) / sin(phi)]`` (diagnostic form)."""
    phi = point.phi
    s = np.sin(phi)
    if abs(s) < 1e-14:
        raise SingularPointError(f"sin(phi) vanishes at phi = {phi}")
    return float((np.sin((n + 1) * phi) * np.cos((n + 1) * np.conj(phi)) / s).real)


def robust_level_check(n: int, parity: Parity = "even", xis=(0.1, 1.0, 10.0)) -> bool | None:
    """Whether ``F = 0`` solves the even-``N`` matching system at every ``xi``.

    Returns ``None`` for odd ``N``, which has no central site.
    """
    if _parity(parity) == "odd":
        return None
    for xi in xis:
        u, v = _uv(n, 0.0, xi)
        scale = 2 * abs(u) * abs(v) + 1e-300
        if abs(matching_det_even(n, 0.0, xi)) > 1e-13 * scale:
            return False
    return True


# ----------------------------------------------------------------------------
# root finding on the real F axis


def scan_real_zeros(f, lo: float, hi: float, points: int, *, xtol: float = 1e-12,
                    depth: int = 2, sub: int = 24, scale: float | None = None) -> np.ndarray:
    """Zeros of a real function on ``[lo, hi]``.

    Sign changes on a uniform grid are refined by bracketing to ``xtol``.
    Cells next to a grid point where ``|f|`` stops decreasing are inspected
    too, which recovers tangential (double) zeros. Every flagged cell is
    first rescanned on ``sub`` points, ``depth`` levels deep, so that several
    close zeros sharing one cell are separated.
    """
    rtol = 4 * np.finfo(float).eps
    grid = np.linspace(lo, hi, points)
    vals = np.array([f(x) for x in grid])
    found: list[float] = [x for x, v in zip(grid, vals) if v == 0]
    if scale is None:
        scale = float(np.max(np.abs(vals))) or 1.0

    change = [i for i in range(points - 1) if vals[i] * vals[i + 1] < 0]
    # |f| turning back up at an interior point flags both neighbouring cells
    turn = set()
    a = np.abs(vals)
    for i in range(1, points - 1):
        if vals[i] != 0 and a[i] <= a[i - 1] and a[i] <= a[i + 1] and vals[i - 1] * vals[i] > 0 \
                and vals[i] * vals[i + 1] > 0:
            turn.update((i - 1, i))

    if depth > 0:
        for i in sorted(set(change) | turn):
            inner = scan_real_zeros(f, grid[i], grid[i + 1], sub, xtol=xtol, depth=depth - 1,
                                    sub=sub, scale=scale)
            # endpoints were already collected at this level
            found.extend(x for x in inner if grid[i] < x < grid[i + 1])
        return np.sort(np.array(found, dtype=float))

    for i in change:
        found.append(brentq(f, grid[i], grid[i + 1], xtol=xtol, rtol=rtol))
    tangential: list[float] = []
    for i in sorted(turn):
        lo_c, hi_c = grid[i], grid[i + 1]
        sgn = np.sign(vals[i])
        res = minimize_scalar(lambda x: sgn * f(x), bounds=(lo_c, hi_c), method="bounded",
                              options={"xatol": xtol})
        x0, f0 = float(res.x), f(res.x)
        if f0 * sgn < 0:
            found.append(brentq(f, lo_c, x0, xtol=xtol, rtol=rtol))
            found.append(brentq(f, x0, hi_c, xtol=xtol, rtol=rtol))
        elif abs(f0) <= 1e-12 * scale and not any(abs(x0 - t) <= 1e3 * xtol for t in tangential):
            tangential.append(x0)
            found.extend([x0, x0])
    return np.sort(np.array(found, dtype=float))


def secular_roots(n: int, xi: float, parity: Parity = "even", *, xtol: float = 1e-12,
                  points: int | None = None) -> np.ndarray:
    """Real eigenvalues from zeros of the matching determinant.

    The determinant is scanned on ``20 (n + 2)`` points over
    ``[-2 - |xi|, 2 + |xi|]``, which contains every real eigenvalue.
    """
    parity = _parity(parity)
    lim = 2.0 + abs(xi)
    return scan_real_zeros(lambda F: matching_det(n, F, xi, parity), -lim, lim,
                           points or 20 * (n + 2), xtol=xtol)
