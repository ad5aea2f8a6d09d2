"""Characteristic polynomial of the tridiagonal model and its roots.

Two ways of evaluating ``det(A - F)`` are provided:

* :func:`char_poly` expands the leading-minor recurrence
  ``D_k = (d_k - F) D_{k-1} - D_{k-2}`` into monomial coefficients. This
  reproduces printed secular determinants verbatim and is the route used
  for golden coefficient checks.
* :func:`tridiagonal_roots` feeds the same recurrence, evaluated pointwise
  in ratio form, straight into the root finder. Monomial coefficients of
  these polynomials grow like ``(1 + sqrt 2)**N`` and lose all accuracy by
  ``N ~ 80``; the pointwise recurrence does not.

Roots come from the Aberth-Ehrlich simultaneous iteration. Clusters of
nearly coincident roots (exceptional points) have only ``sqrt(eps)``
accuracy in double precision and are re-converged with mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath as mp
import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import linear_sum_assignment

from .errors import NumericFailure, PTSymmetryBrokenError
from .model import ScaledHamiltonian

__all__ = [
    "REAL_TOL",
    "RootSet",
    "char_poly",
    "certify_real",
    "roots",
    "tridiagonal_roots",
    "is_real",
    "symmetrize_conjugates",
    "coefficient_scale",
]

EPS = np.finfo(float).eps

# |Im F| <= REAL_TOL * max(1, |F|) counts as real
REAL_TOL = 1e-9
ZERO_ROOT_TOL = 1e-13
STEP_TOL = 1e-13
MAXITER = 200
# relative separation below which roots are treated as a cluster
CLUSTER_TOL = 1e-3
MP_DPS = 40
# a stalled approximation is a root if |p/p'| is within this factor of the step floor
STALL_RATIO = 100.0
# conjugate partners further apart than this (relative) are not averaged
PAIR_TOL = 1e-6
SQRT_EPS = float(np.sqrt(np.finfo(float).eps))


def is_real(F, tol: float = REAL_TOL):
    F = np.asarray(F)
    return np.abs(F.imag) <= tol * np.maximum(1.0, np.abs(F))


def coefficient_scale(c, z=None) -> float:
    """``max |c_k|``, or ``sum |c_k| |z|**k`` when a point is given."""
    c = np.asarray(c)
    if z is None:
        return float(np.max(np.abs(c)))
    return float(np.polynomial.polynomial.polyval(abs(z), np.abs(c)))


@dataclass(frozen=True)
class RootSet:
    """Roots sorted by ``(Re, Im)`` together with ``|p(root)|``."""

    roots: np.ndarray
    residuals: np.ndarray
    tol: float = REAL_TOL
    iterations: int = 0
    refined: bool = False

    def __len__(self):
        return len(self.roots)

    @property
    def real_mask(self) -> np.ndarray:
        return is_real(self.roots, self.tol)

    @property
    def all_real(self) -> bool:
        return bool(np.all(self.real_mask))


def char_poly(H: ScaledHamiltonian) -> Polynomial:
    """``det(A - F)`` as a polynomial in ``F`` (ascending complex coefficients)."""
    n = H.dim
    prev = np.zeros(n + 1, dtype=complex)
    cur = np.zeros(n + 1, dtype=complex)
    cur[0] = 1.0
    for d in H.diagonal:
        new = d * cur
        new[1:] -= cur[:-1]
        new -= prev
        prev, cur = cur, new
    return Polynomial(cur)


def certify_real(p: Polynomial, tol: float = 1e-12) -> Polynomial:
    """Drop imaginary parts of ``p`` after checking they are round-off.

    Raises :class:`PTSymmetryBrokenError` if some imaginary part exceeds
    ``tol * max(1, max |c_k|)``.
    """
    c = np.asarray(p.coef, dtype=complex)
    scale = max(1.0, coefficient_scale(c))
    defect = float(np.max(np.abs(c.imag))) if c.size else 0.0
    if defect > tol * scale:
        raise PTSymmetryBrokenError(
            f"imaginary coefficient defect {defect:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    return Polynomial(c.real.copy())


def imaginary_defect(p: Polynomial) -> float:
    """Relative size of the imaginary coefficient parts."""
    c = np.asarray(p.coef, dtype=complex)
    return float(np.max(np.abs(c.imag)) / max(1.0, coefficient_scale(c)))


# ----------------------------------------------------------------------------
# Aberth-Ehrlich core


def _aberth(newton, z0, *, maxiter=MAXITER, tol=STEP_TOL, fixed=None, max_kicks=8):
    """Simultaneous iteration on the approximations ``z0``.

    ``newton(z)`` returns ``(p/p', at_noise)`` where ``at_noise`` flags
    points whose value is already at rounding level. When the steps stop
    shrinking, the plain Newton ratio tells a genuine multiple root (ratio
    at the same rounding floor as the steps) from approximations stuck at a
    spurious symmetric equilibrium (ratio of the order of the distance to
    the true roots). The latter get a deterministic kick.
    ``fixed`` are other roots that only enter through the repulsion sum.
    """
    z = np.array(z0, dtype=complex)
    others = np.zeros(0, dtype=complex) if fixed is None else np.asarray(fixed, complex)
    active = np.ones(z.size, dtype=bool)
    best = np.full(z.size, np.inf)
    stall = np.zeros(z.size, dtype=int)
    kicks = 0
    for it in range(1, maxiter + 1):
        idx = np.flatnonzero(active)
        ratio, at_noise = newton(z[idx])
        diff = z[idx, None] - np.concatenate([z, others])[None, :]
        diff[np.arange(idx.size), idx] = np.inf
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1)
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w), w, ratio)
        z[idx] -= w
        step = np.abs(w)
        improved = step < 0.5 * best[idx]
        best[idx] = np.minimum(best[idx], step)
        stall[idx] = np.where(improved, 0, stall[idx] + 1)
        scale = 1.0 + np.abs(z[idx])
        done = (step <= tol * scale) | at_noise
        stuck = (stall[idx] >= 6) & (best[idx] <= 1e-6 * scale)
        # round-off floor near a genuine multiple root: accept
        done |= stuck & (np.abs(ratio) <= STALL_RATIO * np.maximum(best[idx], SQRT_EPS * scale))
        bad = stuck & ~done
        if bad.any():
            if kicks >= max_kicks:
                raise NumericFailure("Aberth iteration stuck away from the roots", best=z)
            kicks += 1
            k = idx[bad]
            z[k] += 1e-3 * (1.0 + np.abs(z[k])) * np.exp(1j * (0.7 + 2.1 * np.arange(k.size) + kicks))
            best[k] = np.inf
            stall[k] = 0
        active[idx[done]] = False
        if not active.any():
            return z, it
    raise NumericFailure(f"Aberth iteration did not converge in {maxiter} steps", best=z)


def _horner_newton(c):
    c = np.asarray(c)
    deg = c.size - 1

    def newton(z):
        p = np.full(z.shape, c[-1], dtype=complex)
        dp = np.zeros(z.shape, dtype=complex)
        pa = np.full(z.shape, abs(c[-1]))
        az = np.abs(z)
        for a in c[-2::-1]:
            dp = dp * z + p
            p = p * z + a
            pa = pa * az + abs(a)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dp != 0, p / dp, p)
        return ratio, np.abs(p) <= 4 * deg * EPS * pa

    return newton


def _recurrence_newton(diag):
    """Newton ratio ``p/p'`` of ``det(A - F)`` via ``r_k = D_k / D_{k-1}``."""
    diag = np.asarray(diag, dtype=complex)
    tiny = EPS * (2.0 + float(np.max(np.abs(diag), initial=0.0)))

    def newton(z):
        r = diag[0] - z
        dr = -np.ones_like(z)
        logd = np.zeros_like(z)
        for d in diag[1:]:
            r = np.where(r == 0, tiny, r)
            logd += dr / r
            dr = -1.0 + dr / r**2
            r = (d - z) - 1.0 / r
        r = np.where(r == 0, tiny, r)
        logd += dr / r
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = 1.0 / logd
        ratio = np.where(np.isfinite(ratio), ratio, 0.0)
        return ratio, np.zeros(z.shape, dtype=bool)

    return newton


def _seeds(c, n, rotation=0.4):
    c = np.asarray(c)
    lead = abs(c[-1])
    # Fujiwara-type radius: sits at the scale of the roots, not far outside
    ks = np.arange(n)
    with np.errstate(divide="ignore"):
        rad = np.max((np.abs(c[:n]) / lead) ** (1.0 / (n - ks)))
    rad = max(float(rad), 1e-3)
    ang = 2 * np.pi * np.arange(n) / n + rotation
    return rad * np.exp(1j * ang)


def symmetrize_conjugates(z, tol: float = REAL_TOL) -> np.ndarray:
    """Pair roots with their conjugate partners and average each pair.

    Roots whose imaginary part is at round-off level are made exactly real.
    """
    z = np.asarray(z, dtype=complex).copy()
    scale = np.maximum(1.0, np.abs(z))
    near_real = np.abs(z.imag) <= 1e-14 * scale
    z[near_real] = z[near_real].real
    up = np.flatnonzero(~near_real & (z.imag > 0))
    lo = np.flatnonzero(~near_real & (z.imag < 0))
    paired = set()
    if up.size and lo.size:
        cost = np.abs(z[up, None] - np.conj(z[lo])[None, :])
        ri, ci = linear_sum_assignment(cost)
        for a, b in zip(ri, ci):
            i, j = up[a], lo[b]
            if cost[a, b] > PAIR_TOL * max(scale[i], scale[j]):
                continue
            m = 0.5 * (z[i] + np.conj(z[j]))
            z[i], z[j] = m, np.conj(m)
            paired |= {i, j}
    for i in set(up) | set(lo):
        if i not in paired and abs(z[i].imag) <= tol * scale[i]:
            # no conjugate partner: closure forces it onto the real axis
            z[i] = z[i].real
    return z


def _sort(z):
    z = np.asarray(z)
    return z[np.lexsort((z.imag, z.real))]


def _clusters(z, tol=CLUSTER_TOL):
    """Index groups of mutually close roots (single-linkage)."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= tol * (1.0 + abs(z[i])):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _mp_refine(z, groups, mp_newton, dps=MP_DPS, maxiter=400):
    """Re-converge clustered roots in extended precision."""
    z = np.array(z, dtype=complex)
    with mp.workdps(dps):
        for g in groups:
            cl = [mp.mpc(complex(z[i])) for i in g]
            # small rotated split so coincident seeds do not divide by zero
            width = max(abs(z[i] - z[g[0]]) for i in g) or 1e-8
            cl = [c + mp.mpf(width) * mp.mpf("1e-3") * mp.expj(mp.mpf("0.7") + 2 * mp.pi * k / len(cl))
                  for k, c in enumerate(cl)]
            rest = [mp.mpc(complex(z[i])) for i in range(z.size) if i not in g]
            tol = mp.mpf(10) ** (-(dps // 2 + 3))
            best, stall = mp.inf, 0
            for _ in range(maxiter):
                steps = []
                new = []
                for k, c in enumerate(cl):
                    ratio = mp_newton(c)
                    s = sum(1 / (c - o) for j, o in enumerate(cl) if j != k and c != o)
                    s += sum(1 / (c - o) for o in rest if c != o)
                    w = ratio / (1 - ratio * s) if ratio != 0 else ratio
                    new.append(c - w)
                    steps.append(abs(w))
                cl = new
                top = max(steps)
                if top <= tol:
                    break
                # a multiple root floors at sqrt(10**-dps); stop once stalled there
                stall = 0 if top < best / 2 else stall + 1
                best = min(best, top)
                if stall >= 5 and best < mp.mpf(10) ** (-(dps // 2 - 5)):
                    break
            for i, c in zip(g, cl):
                z[i] = complex(c)
    return z


def _mp_recurrence_newton(diag):
    d = [mp.mpc(complex(x)) for x in diag]

    def newton(F):
        r = d[0] - F
        dr = mp.mpc(-1)
        logd = mp.mpc(0)
        for x in d[1:]:
            if r == 0:
                r = mp.mpf(10) ** (-mp.mp.dps)
            logd += dr / r
            dr = -1 + dr / r**2
            r = (x - F) - 1 / r
        if r == 0:
            return mp.mpc(0)
        logd += dr / r
        return 1 / logd if logd != 0 else mp.mpc(0)

    return newton


def _mp_horner_newton(c):
    cm = [mp.mpc(complex(x)) for x in c]

    def newton(F):
        p = cm[-1]
        dp = mp.mpc(0)
        for a in cm[-2::-1]:
            dp = dp * F + p
            p = p * F + a
        return p / dp if dp != 0 else mp.mpc(0)

    return newton


def _residuals(c, z):
    return np.abs(np.polynomial.polynomial.polyval(z, c))


def roots(p: Polynomial, *, real: bool | None = None, refine: bool = True) -> RootSet:
    """All complex roots of ``p`` by Aberth-Ehrlich iteration.

    Exact zero roots (constant term below ``1e-13`` of the coefficient
    scale) are deflated first. For real ``p`` conjugate pairs are averaged.
    Clustered roots are re-converged in extended precision when ``refine``.
    """
    c = np.trim_zeros(np.asarray(p.coef), "b")
    if c.size < 2:
        raise ValueError("polynomial must have degree >= 1")
    if real is None:
        real = not np.iscomplexobj(c) or not np.any(c.imag)
    scale = coefficient_scale(c)
    nzero = 0
    while c.size > 1 and abs(c[0]) < ZERO_ROOT_TOL * scale:
        c = c[1:]
        nzero += 1
    found = np.zeros(0, dtype=complex)
    it = 0
    done_refine = False
    if c.size > 1:
        n = c.size - 1
        if n == 1:
            found = np.array([-c[0] / c[1]], dtype=complex)
        else:
            found, it = _aberth(_horner_newton(c), _seeds(c, n))
            # one Newton polish step where it helps
            ratio, _ = _horner_newton(c)(found)
            trial = found - ratio
            better = _residuals(c, trial) < _residuals(c, found)
            found = np.where(better, trial, found)
            groups = _clusters(found)
            if refine and groups:
                found = _mp_refine(found, groups, _mp_horner_newton(c))
                done_refine = True
    z = np.concatenate([np.zeros(nzero, dtype=complex), found])
    if real:
        z = symmetrize_conjugates(z)
    z = _sort(z)
    return RootSet(z, _residuals(np.asarray(p.coef), z), iterations=it, refined=done_refine)


def tridiagonal_roots(H: ScaledHamiltonian, *, refine: bool = True) -> RootSet:
    """Eigenvalues of ``A`` as roots of ``det(A - F)``, evaluated by recurrence.

    Residuals are reported as ``|det(A - F)| / det-scale`` where the scale
    is the product of row norms, so they are comparable across dimensions.
    """
    diag = np.asarray(H.diagonal, dtype=complex)
    n = diag.size
    if n == 1:
        z = diag.copy()
        return RootSet(z, np.zeros(1))
    # Gershgorin disc centred at 0 holds the spectrum
    rad = 2.0 + float(np.max(np.abs(diag)))
    ang = 2 * np.pi * np.arange(n) / n + 0.4
    seeds = 0.9 * rad * np.exp(1j * ang)
    newton = _recurrence_newton(diag)
    z, it = _aberth(newton, seeds)
    groups = _clusters(z)
    done_refine = False
    if refine and groups:
        z = _mp_refine(z, groups, _mp_recurrence_newton(diag))
        done_refine = True
    if np.allclose(diag[::-1], np.conj(diag), rtol=0, atol=1e-15):
        # PT-symmetric matrix: real characteristic polynomial
        z = symmetrize_conjugates(z)
    z = _sort(z)
    return RootSet(z, _det_residuals(diag, z), iterations=it, refined=done_refine)


def _det_residuals(diag, z):
    """``|det(A - z)|`` divided by the product of row norms, per root."""
    out = np.empty(z.size)
    for i, F in enumerate(z):
        rows = np.sqrt(np.abs(diag - F) ** 2 + 2.0)
        rows[0] = np.sqrt(rows[0] ** 2 - 1.0)
        rows[-1] = np.sqrt(rows[-1] ** 2 - 1.0)
        # D_k scaled by s_1 ... s_k so the recurrence cannot overflow
        prev, cur = 0.0 + 0j, 1.0 + 0j
        for d, s in zip(diag, rows):
            prev, cur = cur / s, ((d - F) * cur - prev) / s
        out[i] = abs(cur)
    return out


def recurrence_newton(diag) -> Callable:
    """Public handle on the pointwise Newton ratio (used by the tests)."""
    return _recurrence_newton(diag)
