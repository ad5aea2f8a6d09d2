"""Spectra, coupling sweeps and the location of spectral transitions.

Transitions are located by scanning a grid for the first cell where a
predicate flips and then bisecting inside that cell. Reality of the
spectrum is not assumed to be monotonic in the coupling.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .charpoly import REAL_TOL, is_real, tridiagonal_roots
from .errors import DomainError, PTSymmetryBrokenError
from .model import WellModel, square_well, to_physical

__all__ = [
    "Spectrum",
    "CriticalReport",
    "SweepTable",
    "ContinuumReport",
    "spectrum",
    "sweep",
    "critical_coupling",
    "exceptional_points",
    "imaginary_axis_crossing",
    "critical_table",
    "critical_table_csv",
    "continuum_check",
    "real_count",
    "imaginary_count",
    "squared_levels",
    "critical_row",
]

DEFAULT_TOL = 1e-9
SWEEP_COLUMNS = ["xi", "Z", "track", "re_F", "im_F", "re_E", "im_E", "is_real"]
TABLE_COLUMNS = ["N", "parity", "xi_crit", "Z_crit", "bracket_width"]


@dataclass(frozen=True)
class Spectrum:
    model: WellModel
    xi: float
    eigenvalues: np.ndarray
    is_real: np.ndarray
    energies: np.ndarray
    residuals: np.ndarray

    @property
    def all_real(self) -> bool:
        return bool(np.all(self.is_real))

    @property
    def Z(self) -> float:
        return self.model.Z(self.xi)

    def to_dict(self) -> dict:
        out = self.model.descriptor(self.Z)
        out["xi"] = self.xi
        out["eigenvalues"] = [{"re": float(f.real), "im": float(f.imag)} for f in self.eigenvalues]
        out["energies"] = [{"re": float(e.real), "im": float(e.imag)} for e in self.energies]
        out["is_real"] = [bool(r) for r in self.is_real]
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "re_F", "im_F", "re_E", "im_E", "is_real"])
        for i, (f, e, r) in enumerate(zip(self.eigenvalues, self.energies, self.is_real)):
            w.writerow([i, repr(float(f.real)), repr(float(f.imag)),
                        repr(float(e.real)), repr(float(e.imag)), int(r)])
        return buf.getvalue()


def spectrum(model: WellModel, xi: float) -> Spectrum:
    """Eigenvalues ``F`` of the model at scaled coupling ``xi``, sorted by ``(Re, Im)``."""
    H = model.hamiltonian(xi)
    d = H.diagonal
    if not np.array_equal(d[::-1], np.conj(d)):
        raise PTSymmetryBrokenError("diagonal is not mapped to its conjugate by the parity flip")
    rs = tridiagonal_roots(H)
    F = rs.roots
    return Spectrum(
        model=model,
        xi=float(xi),
        eigenvalues=F,
        is_real=is_real(F),
        energies=to_physical(F, model.N).E,
        residuals=rs.residuals,
    )


def real_count(model: WellModel, xi: float) -> int:
    return int(np.sum(spectrum(model, xi).is_real))


def _imag_mask(F, tol=REAL_TOL):
    F = np.asarray(F)
    s = tol * np.maximum(1.0, np.abs(F))
    return (np.abs(F.real) <= s) & (np.abs(F.imag) > s)


def imaginary_count(model: WellModel, xi: float) -> int:
    """Number of purely imaginary, nonzero eigenvalues."""
    return int(np.sum(_imag_mask(spectrum(model, xi).eigenvalues)))


def squared_levels(F, zero_tol: float = 1e-9) -> np.ndarray:
    """Distinct values ``y = F**2`` of a spectrum symmetric under ``F -> -F``.

    Zero eigenvalues are dropped and each pair ``+-F`` contributes once; the
    result is sorted by ``(Re, Im)``.
    """
    F = np.asarray(F, dtype=complex)
    F = F[np.abs(F) > zero_tol]
    keep = (F.real > 0) | ((F.real == 0) & (F.imag > 0))
    y = F[keep] ** 2
    return y[np.lexsort((y.imag, y.real))]


# ----------------------------------------------------------------------------
# tracking


def _match(prev, new):
    """Permutation ``perm`` with ``new[perm[i]]`` continuing ``prev[i]``."""
    n = len(prev)
    cost = np.abs(prev[:, None] - new[None, :])
    # global greedy: closest pairs first, so a track sitting still keeps its value
    greedy = np.full(n, -1)
    used = np.zeros(n, dtype=bool)
    for flat in np.argsort(cost, axis=None, kind="stable"):
        i, j = divmod(int(flat), n)
        if greedy[i] < 0 and not used[j]:
            greedy[i] = j
            used[j] = True
    g_cost = cost[np.arange(n), greedy].sum()
    ri, ci = linear_sum_assignment(cost)
    opt = np.empty(n, dtype=int)
    opt[ri] = ci
    o_cost = cost[ri, ci].sum()
    if g_cost > 2 * o_cost:
        return opt, float(np.max(cost[np.arange(n), opt]))
    return greedy, float(np.max(cost[np.arange(n), greedy]))


@dataclass
class SweepTable:
    """Eigenvalue tracks over a coupling grid.

    ``F[i, t]`` is track ``t`` at ``xi[i]``.
    """

    model: WellModel
    xi: np.ndarray
    F: np.ndarray
    refinements: int = 0

    @property
    def E(self) -> np.ndarray:
        return to_physical(self.F, self.model.N).E

    @property
    def is_real(self) -> np.ndarray:
        return is_real(self.F)

    @property
    def n_tracks(self) -> int:
        return self.F.shape[1]

    def rows(self) -> Iterable[tuple]:
        E = self.E
        real = self.is_real
        for i, x in enumerate(self.xi):
            for t in range(self.n_tracks):
                f, e = self.F[i, t], E[i, t]
                yield (float(x), float(self.model.Z(x)), t, float(f.real), float(f.imag),
                       float(e.real), float(e.imag), bool(real[i, t]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for r in self.rows():
            w.writerow([repr(r[0]), repr(r[1]), r[2], repr(r[3]), repr(r[4]),
                        repr(r[5]), repr(r[6]), int(r[7])])
        return buf.getvalue()

    def events(self) -> list[tuple[int, int, int]]:
        """``(grid index, real count before, real count after)`` where the count changes."""
        counts = self.is_real.sum(axis=1)
        return [(i, int(counts[i - 1]), int(counts[i]))
                for i in range(1, len(counts)) if counts[i] != counts[i - 1]]


def sweep(model: WellModel, xi_grid: Sequence[float], *, max_refine: int = 4,
          safety: float = 1e-9) -> SweepTable:
    """Spectra on ``xi_grid`` with eigenvalues continued along tracks.

    Between neighbouring grid points eigenvalues are expected to move by
    less than ``4 dxi + safety``; larger jumps trigger bisection of the step
    (up to ``max_refine`` levels) before matching.
    """
    xs = np.asarray(xi_grid, dtype=float)
    if xs.ndim != 1 or xs.size < 1:
        raise DomainError("xi grid must be a non-empty 1-d sequence")
    if np.any(np.diff(xs) <= 0):
        raise DomainError("xi grid must be strictly increasing")
    raw = [spectrum(model, x).eigenvalues for x in xs]
    out = np.empty((xs.size, model.dim), dtype=complex)
    out[0] = raw[0]
    refinements = 0

    def carry(prev, x0, x1, new, depth):
        nonlocal refinements
        perm, jump = _match(prev, new)
        if jump <= 4 * (x1 - x0) + safety or depth >= max_refine:
            return new[perm]
        refinements += 1
        xm = 0.5 * (x0 + x1)
        mid = carry(prev, x0, xm, spectrum(model, xm).eigenvalues, depth + 1)
        return carry(mid, xm, x1, new, depth + 1)

    for i in range(1, xs.size):
        out[i] = carry(out[i - 1], xs[i - 1], xs[i], raw[i], 0)
    return SweepTable(model, xs, out, refinements)


# ----------------------------------------------------------------------------
# transitions


@dataclass(frozen=True)
class CriticalReport:
    """Located transition; ``xi`` is the bracket midpoint.

    ``status`` is ``"ok"``, ``"no-transition"`` or ``"not-applicable"``.
    """

    kind: str
    model: WellModel
    status: str = "ok"
    bracket: tuple[float, float] | None = None
    F_star: tuple[complex, ...] = ()
    counts: tuple[int, int] | None = None
    tol: float = DEFAULT_TOL

    @property
    def xi(self) -> float | None:
        if self.bracket is None:
            return None
        return 0.5 * (self.bracket[0] + self.bracket[1])

    @property
    def width(self) -> float | None:
        if self.bracket is None:
            return None
        return self.bracket[1] - self.bracket[0]

    @property
    def Z(self) -> float | None:
        return None if self.xi is None else self.model.Z(self.xi)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "status": self.status, "model": self.model.descriptor()}
        if self.bracket is not None:
            out.update(xi=self.xi, Z=self.Z, bracket=list(self.bracket), bracket_width=self.width)
        out["F_star"] = [{"re": float(f.real), "im": float(f.imag)} for f in self.F_star]
        return out


def _bisect(pred: Callable[[float], bool], lo: float, hi: float, tol: float):
    """Shrink ``[lo, hi]`` with ``pred(lo)`` true and ``pred(hi)`` false to width ``tol``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _first_flip(pred, grid):
    """First cell ``(a, b)`` of ``grid`` with ``pred(a)`` true and ``pred(b)`` false."""
    prev = grid[0]
    for x in grid[1:]:
        if not pred(x):
            return prev, x
        prev = x
    return None


def critical_coupling(model: WellModel, xi_max: float | None = None, tol: float = DEFAULT_TOL,
                      points: int = 64) -> CriticalReport:
    """Smallest ``xi`` at which the spectrum stops being entirely real.

    Without ``xi_max`` a coarse 64-point scan of ``[0, 8]`` gives a first
    guess and the search range is four times that.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")

    def all_real(x):
        return spectrum(model, x).all_real

    if not all_real(0.0):
        raise DomainError("spectrum is not real at xi = 0")
    if xi_max is None:
        cell = _first_flip(all_real, np.linspace(0.0, 8.0, 64))
        if cell is None:
            return CriticalReport("first-complexification", model, status="no-transition", tol=tol)
        xi_max = 4.0 * cell[1]
    cell = _first_flip(all_real, np.linspace(0.0, xi_max, points))
    if cell is None:
        return CriticalReport("first-complexification", model, status="no-transition", tol=tol)
    lo, hi = _bisect(all_real, *cell, tol)
    if not (all_real(lo) and not all_real(hi)):
        raise AssertionError("bracket does not straddle the transition")
    return CriticalReport("first-complexification", model, bracket=(lo, hi), tol=tol,
                          counts=(model.dim, real_count(model, hi)))


def _merger_points(left: np.ndarray, right: np.ndarray) -> tuple[complex, ...]:
    """Midpoints of the real eigenvalues at ``left`` that have no real partner at ``right``."""
    L = np.sort(left[is_real(left)].real)
    R = np.sort(right[is_real(right)].real)
    if R.size:
        ri, ci = linear_sum_assignment(np.abs(L[:, None] - R[None, :]))
        lost = np.setdiff1d(np.arange(L.size), ri)
    else:
        lost = np.arange(L.size)
    gone = np.sort(L[lost])
    return tuple(complex(0.5 * (gone[i] + gone[i + 1])) for i in range(0, gone.size - 1, 2))


def exceptional_points(model: WellModel, xi_range: tuple[float, float],
                       tol: float = DEFAULT_TOL, points: int = 200) -> list[CriticalReport]:
    """Every coupling in ``xi_range`` at which the number of real eigenvalues changes.

    For each event ``F_star`` holds the merger locations, read off the side
    where the colliding pair is still real.
    """
    lo, hi = map(float, xi_range)
    if not hi > lo:
        raise DomainError("xi_range must be increasing")
    grid = np.linspace(lo, hi, points)
    counts = [real_count(model, x) for x in grid]
    reports = []
    for i in range(1, grid.size):
        if counts[i] == counts[i - 1]:
            continue
        c0 = counts[i - 1]
        a, b = _bisect(lambda x: real_count(model, x) == c0, grid[i - 1], grid[i], tol)
        sa, sb = spectrum(model, a), spectrum(model, b)
        real_side, other = (sa, sb) if c0 > counts[i] else (sb, sa)
        reports.append(CriticalReport(
            "pair-merger", model, bracket=(a, b), tol=tol,
            F_star=_merger_points(real_side.eigenvalues, other.eigenvalues),
            counts=(int(np.sum(sa.is_real)), int(np.sum(sb.is_real))),
        ))
    return reports


def imaginary_axis_crossing(model: WellModel, xi_range: tuple[float, float],
                            tol: float = DEFAULT_TOL, points: int = 200) -> CriticalReport:
    """Coupling at which a tracked pair lands on the imaginary axis.

    The event is an increase in the number of purely imaginary eigenvalues
    (``Re F**2`` of the pair turning negative with ``Im F**2 = 0``). If the
    pair is already imaginary at the start of the range, the search is
    extended down to ``xi = 0`` to find where it got there.
    """
    lo, hi = map(float, xi_range)
    if not hi > lo:
        raise DomainError("xi_range must be increasing")

    def locate(a, b):
        grid = np.linspace(a, b, points)
        counts = [imaginary_count(model, x) for x in grid]
        for i in range(1, grid.size):
            if counts[i] > counts[i - 1]:
                c0 = counts[i - 1]
                return _bisect(lambda x: imaginary_count(model, x) <= c0, grid[i - 1], grid[i], tol)
        return None

    cell = locate(lo, hi)
    if cell is None and imaginary_count(model, lo) > 0 and lo > 0:
        cell = locate(0.0, lo)
    if cell is None:
        return CriticalReport("imaginary-axis-crossing", model, status="not-applicable", tol=tol)
    a, b = cell
    before = spectrum(model, a).eigenvalues
    after = spectrum(model, b).eigenvalues
    # left partners of the eigenvalues that are imaginary only after the event
    ri, ci = linear_sum_assignment(np.abs(before[:, None] - after[None, :]))
    partner = np.empty(after.size, dtype=int)
    partner[ci] = ri
    new = _imag_mask(after) & ~_imag_mask(before[partner])
    # a pair f, -conj(f) meets the imaginary axis at i Im f; cluster those
    # heights, then impose the F -> -F symmetry of the spectrum on them
    heights = np.sort(before[partner[new]].imag)
    groups = [[heights[0]]] if heights.size else []
    for y in heights[1:]:
        if y - groups[-1][-1] <= 1e-4 * max(1.0, abs(y)):
            groups[-1].append(y)
        else:
            groups.append([y])
    centres = np.array([np.mean(g) for g in groups])
    F_star = tuple(complex(0.0, 0.5 * (c - centres[np.argmin(np.abs(centres + c))]))
                   for c in centres)
    return CriticalReport("imaginary-axis-crossing", model, bracket=(a, b), tol=tol,
                          F_star=F_star, counts=(int(np.sum(_imag_mask(before))),
                                                 int(np.sum(_imag_mask(after)))))


def critical_row(model: WellModel, tol: float = DEFAULT_TOL) -> tuple[int, str, float, float, float]:
    """One ``(N, parity, xi_crit, Z_crit, bracket_width)`` row; NaNs when there is no transition."""
    par = "even" if model.N % 2 == 0 else "odd"
    rep = critical_coupling(model, tol=tol)
    if rep.status != "ok":
        return (model.N, par, math.nan, math.nan, math.nan)
    return (model.N, par, rep.xi, rep.Z, rep.width)


def critical_table(N_list: Sequence[int], parity: str | None = None,
                   tol: float = DEFAULT_TOL) -> list[tuple[int, str, float, float, float]]:
    """``(N, parity, xi_crit, Z_crit, bracket_width)`` for square wells of each ``N``."""
    rows = []
    for N in N_list:
        N = int(N)
        if N < 3:
            raise DomainError(f"critical table needs N >= 3, got {N}")
        par = "even" if N % 2 == 0 else "odd"
        if parity is not None and parity != par:
            raise DomainError(f"N = {N} is {par}, requested {parity}")
        rows.append(critical_row(square_well(N), tol))
    return rows


def critical_table_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for N, par, xi, Z, width in rows:
        w.writerow([N, par, repr(float(xi)), repr(float(Z)), repr(float(width))])
    return buf.getvalue()


@dataclass(frozen=True)
class ContinuumReport:
    """Lowest levels at ``Z = 0`` against the continuum ``(n pi / 2)**2``."""

    N: tuple[int, ...]
    levels: np.ndarray  # shape (len(N), n_levels)
    exact: np.ndarray
    errors: np.ndarray
    ratios: tuple[float, ...]  # err(N_{i+1}) / err(N_i) for the lowest level
    probe_Z: float
    probe_all_real: tuple[bool, ...] = field(default=())

    @property
    def order(self) -> tuple[float, ...]:
        """Observed convergence orders ``log(err ratio) / log(N ratio)``."""
        out = []
        for i, r in enumerate(self.ratios):
            out.append(-math.log(r) / math.log(self.N[i + 1] / self.N[i]))
        return tuple(out)


def continuum_check(N_list: Sequence[int], n_levels: int = 3, probe_Z: float = 3.0) -> ContinuumReport:
    """Finite-difference convergence of the ``Z = 0`` levels, plus a reality probe at ``probe_Z``."""
    Ns = tuple(int(N) for N in N_list)
    exact = (np.arange(1, n_levels + 1) * np.pi / 2) ** 2
    levels = []
    probes = []
    for N in Ns:
        m = square_well(N)
        E = np.sort(spectrum(m, 0.0).energies.real)[:n_levels]
        levels.append(E)
        probes.append(spectrum(m, m.xi(probe_Z)).all_real)
    levels = np.array(levels)
    errors = np.abs(levels - exact[None, :])
    ratios = tuple(float(errors[i + 1, 0] / errors[i, 0]) for i in range(len(Ns) - 1))
    return ContinuumReport(Ns, levels, exact, errors, ratios, probe_Z, tuple(probes))
