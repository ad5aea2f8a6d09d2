"""Lattice, piecewise-constant imaginary potentials and the scaled Hamiltonian.

The Schrodinger operator on ``[-1, 1]`` with Dirichlet ends is replaced by
the three-point difference scheme on ``N + 1`` equidistant points. After
multiplying by ``h**2`` and shifting by ``-2`` the interior problem becomes

    (A - F) psi = 0,   A = tridiag(-1, d_k, -1),   d_k = h**2 V(x_k)

with the scaled energy ``F = E h**2 - 2`` and scaled coupling ``xi = Z h**2``.
All numerics downstream work in ``(F, xi)``; physical ``(E, Z)`` only
appear at the I/O boundary.

Breakpoints are exact rationals so that deciding which region a lattice
point belongs to never involves floating comparison. A lattice point that
falls exactly on a breakpoint gets the mean of the two adjacent region
values (the centre ``x = 0`` is the special case ``(+iZ - iZ)/2 = 0``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "Lattice",
    "PotentialProfile",
    "WellModel",
    "ScaledHamiltonian",
    "EnergyPair",
    "potential_at",
    "build_hamiltonian",
    "to_physical",
    "to_scaled",
    "xi_to_Z",
    "Z_to_xi",
    "square_well",
    "shifted_well",
    "parse_rational",
]


def parse_rational(value) -> Fraction:
    """Parse ``"5/8"``, ``"0.5"``, an int or a Fraction into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(value)
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {value!r} as a rational") from exc


@dataclass(frozen=True)
class Lattice:
    """Equidistant grid ``x_k = -1 + k h`` with ``h = 2/N``, ``k = 0..N``."""

    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError(f"lattice needs N >= 2, got {self.N!r}")

    @property
    def h(self) -> float:
        return 2.0 / self.N

    def point(self, k: int) -> Fraction:
        return Fraction(-1) + Fraction(2 * k, self.N)

    @property
    def points(self) -> list[Fraction]:
        return [self.point(k) for k in range(self.N + 1)]

    @property
    def interior(self) -> list[Fraction]:
        return [self.point(k) for k in range(1, self.N)]


@dataclass(frozen=True)
class PotentialProfile:
    """Antisymmetric imaginary step potential.

    ``breakpoints`` are the interior matching points ``0 < l_1 < ... < l_q < 1``
    and ``strengths`` the ``q + 1`` values ``Z_1..Z_{q+1}``; region ``n``
    spans ``l_{n-1} < |x| < l_n`` with ``V = -i Z_n sign(x)``.
    """

    breakpoints: tuple[Fraction, ...] = ()
    strengths: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        bps = tuple(parse_rational(b) for b in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "strengths", tuple(float(z) for z in self.strengths))
        edges = (Fraction(0),) + bps + (Fraction(1),)
        if any(a >= b for a, b in zip(edges, edges[1:])):
            raise DomainError(f"breakpoints must increase strictly inside (0, 1): {bps}")
        if len(self.strengths) != len(bps) + 1:
            raise DomainError(
                f"{len(bps)} breakpoints need {len(bps) + 1} strengths, got {len(self.strengths)}"
            )
        if not all(np.isfinite(self.strengths)):
            raise DomainError("strengths must be finite")

    @property
    def q(self) -> int:
        return len(self.breakpoints)

    @property
    def edges(self) -> tuple[Fraction, ...]:
        return (Fraction(0),) + self.breakpoints + (Fraction(1),)

    def magnitude(self, x) -> float:
        """Real ``Z(|x|)`` with breakpoint averaging; zero at ``|x| = 1``."""
        ax = abs(parse_rational(x))
        if ax > 1:
            raise DomainError(f"x = {x} outside [-1, 1]")
        edges = self.edges
        if ax == 1:
            return 0.0
        for n in range(1, len(edges)):
            if ax < edges[n]:
                if ax == edges[n - 1] and n > 1:
                    return 0.5 * (self.strengths[n - 2] + self.strengths[n - 1])
                return self.strengths[n - 1]
        raise AssertionError("unreachable")


def potential_at(profile: PotentialProfile, x) -> complex:
    """Value of the step potential at ``x`` in ``[-1, 1]``.

    ``+i Z_n`` on the left copy of region ``n``, ``-i Z_n`` on the right one;
    ``0`` at ``x = 0`` and at the walls ``x = +-1``. At a breakpoint the mean
    of the adjacent region values is returned.
    """
    xr = parse_rational(x)
    if abs(xr) > 1:
        raise DomainError(f"x = {x} outside [-1, 1]")
    if xr == 0:
        return 0j
    sign = -1.0 if xr > 0 else 1.0
    return complex(0.0, sign * profile.magnitude(xr))


@dataclass(frozen=True)
class EnergyPair:
    F: complex
    E: complex


def to_physical(F, N: int) -> EnergyPair:
    """``E = (F + 2) N**2 / 4``."""
    Lattice(N)
    return EnergyPair(F=F, E=(F + 2) * N * N / 4)


def to_scaled(E, N: int) -> EnergyPair:
    """Inverse of :func:`to_physical`."""
    Lattice(N)
    return EnergyPair(F=E * 4 / (N * N) - 2, E=E)


def xi_to_Z(xi, N: int):
    return xi * N * N / 4


def Z_to_xi(Z, N: int):
    return Z * 4 / (N * N)


@dataclass(frozen=True, eq=False)
class ScaledHamiltonian:
    """Complex-symmetric tridiagonal matrix ``A`` with unit off-diagonals ``-1``.

    The eigenproblem is ``(A - F) psi = 0``; ``diagonal[k-1] = h**2 V(x_k)``.
    """

    N: int
    diagonal: np.ndarray
    xi: float | None = None

    def __post_init__(self):
        d = np.array(self.diagonal, dtype=complex)
        d.setflags(write=False)
        object.__setattr__(self, "diagonal", d)
        if d.shape != (self.N - 1,):
            raise DomainError(f"diagonal of length {d.shape} does not match N = {self.N}")

    @property
    def dim(self) -> int:
        return self.N - 1

    @property
    def h(self) -> float:
        return 2.0 / self.N

    def dense(self) -> np.ndarray:
        n = self.dim
        A = np.diag(self.diagonal).astype(complex)
        idx = np.arange(n - 1)
        A[idx, idx + 1] = -1.0
        A[idx + 1, idx] = -1.0
        return A

    def physical(self) -> np.ndarray:
        """Dense ``H = (A + 2) / h**2`` in physical units."""
        return (self.dense() + 2 * np.eye(self.dim)) / self.h**2

    def matvec(self, v):
        v = np.asarray(v)
        out = self.diagonal * v
        out[:-1] -= v[1:]
        out[1:] -= v[:-1]
        return out


def build_hamiltonian(N: int, profile: PotentialProfile) -> ScaledHamiltonian:
    """Assemble ``A`` for the lattice of ``N`` subintervals and a physical profile."""
    lat = Lattice(N)
    h2 = lat.h**2
    diag = [h2 * potential_at(profile, x) for x in lat.interior]
    return ScaledHamiltonian(N=N, diagonal=np.array(diag, dtype=complex))


@dataclass(frozen=True)
class WellModel:
    """A model family parametrised by the scaled coupling ``xi``.

    ``weights`` are the relative strengths of the ``q + 1`` regions; the
    physical profile at coupling ``Z`` has strengths ``Z * weights``. The
    square well is ``weights=(1,)``; the shifted wells have a field-free
    centre, ``ell=(l,)`` and ``weights=(0, 1)``.
    """

    N: int
    ell: tuple[Fraction, ...] = ()
    weights: tuple[float, ...] = (1.0,)
    _shape: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        Lattice(self.N)
        ell = tuple(parse_rational(b) for b in self.ell)
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        unit = PotentialProfile(ell, self.weights)
        shape = np.array([potential_at(unit, x).imag for x in Lattice(self.N).interior])
        shape.setflags(write=False)
        object.__setattr__(self, "_shape", shape)

    @property
    def q(self) -> int:
        return len(self.ell)

    @property
    def dim(self) -> int:
        return self.N - 1

    @property
    def h(self) -> float:
        return 2.0 / self.N

    @property
    def shape(self) -> np.ndarray:
        """Imaginary parts of the diagonal per unit ``xi``."""
        return self._shape

    def profile(self, Z: float) -> PotentialProfile:
        return PotentialProfile(self.ell, tuple(Z * w for w in self.weights))

    def hamiltonian(self, xi: float) -> ScaledHamiltonian:
        return ScaledHamiltonian(N=self.N, diagonal=1j * float(xi) * self._shape, xi=float(xi))

    def Z(self, xi):
        return xi_to_Z(xi, self.N)

    def xi(self, Z):
        return Z_to_xi(Z, self.N)

    def descriptor(self, Z: float | None = None) -> dict:
        """JSON-ready ``{"N", "q", "ell", "Z"}`` object (``Z`` per region)."""
        out = {"N": self.N, "q": self.q, "ell": [str(b) for b in self.ell]}
        if Z is not None:
            out["Z"] = [Z * w for w in self.weights]
        else:
            out["weights"] = list(self.weights)
        return out

    def to_json(self, Z: float | None = None) -> str:
        return json.dumps(self.descriptor(Z))

    @classmethod
    def from_descriptor(cls, desc: dict | str) -> tuple["WellModel", float | None]:
        """Inverse of :meth:`descriptor`; returns ``(model, Z)``.

        With per-region ``Z`` values the largest magnitude is taken as the
        overall coupling and the rest become relative weights.
        """
        if isinstance(desc, str):
            desc = json.loads(desc)
        N = int(desc["N"])
        ell = tuple(parse_rational(b) for b in desc.get("ell", []))
        if "q" in desc and int(desc["q"]) != len(ell):
            raise DomainError(f"q = {desc['q']} but {len(ell)} breakpoints given")
        if "Z" in desc:
            Zs = [float(z) for z in desc["Z"]]
            if len(Zs) != len(ell) + 1:
                raise DomainError(f"{len(ell)} breakpoints need {len(ell) + 1} strengths")
            Z = max(Zs, key=abs)
            weights = tuple(z / Z for z in Zs) if Z != 0 else _default_weights(len(ell))
            return cls(N, ell, weights), Z
        weights = tuple(desc.get("weights", _default_weights(len(ell))))
        return cls(N, ell, weights), None


def _default_weights(q: int) -> tuple[float, ...]:
    return (0.0,) * q + (1.0,)


def square_well(N: int) -> WellModel:
    """The ``q = 0`` model ``V = -i Z sign(x)``."""
    return WellModel(N)


def shifted_well(N: int, ell) -> WellModel:
    """``q = 1`` model with ``V = 0`` for ``|x| < ell`` and ``-i Z sign(x)`` outside."""
    return WellModel(N, (parse_rational(ell),), (0.0, 1.0))


def models_from(N_values: Sequence[int], ell=None) -> list[WellModel]:
    return [square_well(N) if ell is None else shifted_well(N, ell) for N in N_values]
