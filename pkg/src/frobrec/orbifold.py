"""Orbifold data for P^1_A: the triple A, flat coordinates, Euler grading, metric.

Coordinates are listed in the fixed order

    Unit < Twisted(1,1) < ... < Twisted(3, a3-1) < Divisor

and every loop in the package walks them in this order.  Internally a
coordinate is identified with its position in that list; twisted coordinates
additionally carry a position ``0 .. mu-3`` inside a multi-index tuple.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import NamedTuple

UNIT = "unit"
TWISTED = "twisted"
DIVISOR = "divisor"


class Coordinate(NamedTuple):
    kind: str
    i: int = 0
    j: int = 0

    def __str__(self) -> str:
        if self.kind == UNIT:
            return "1"
        if self.kind == DIVISOR:
            return "mu"
        return f"{self.i},{self.j}"


def Unit() -> Coordinate:
    return Coordinate(UNIT)


def Divisor() -> Coordinate:
    return Coordinate(DIVISOR)


def Twisted(i: int, j: int) -> Coordinate:
    return Coordinate(TWISTED, i, j)


def symmetry_factor(a: int, b: int, c: int) -> int:
    """Number of distinct orderings of (a, b, c) divided into 6: 1, 2 or 6."""
    if a == b == c:
        return 6
    if a != b and b != c and a != c:
        return 1
    return 2


@dataclass(frozen=True)
class OrbifoldData:
    a: tuple[int, int, int]
    mu: int
    chi: Fraction
    coords: tuple[Coordinate, ...] = field(repr=False)
    twisted: tuple[Coordinate, ...] = field(repr=False)
    # Euler degrees scaled by ``scale`` so the homogeneity bookkeeping is integral.
    scale: int = field(repr=False)
    weights: tuple[int, ...] = field(repr=False)
    chi_weight: int = field(repr=False)

    @property
    def n_twisted(self) -> int:
        return len(self.twisted)

    def index(self, c: Coordinate) -> int:
        """Position of ``c`` in the canonical coordinate order."""
        return _coord_index(self)[c]

    def twisted_index(self, c: Coordinate) -> int:
        """Position of a twisted coordinate inside a multi-index tuple."""
        return _coord_index(self)[c] - 1

    def is_valid(self, c: Coordinate) -> bool:
        return c in _coord_index(self)

    def dual(self, c: Coordinate) -> Coordinate:
        """The unique coordinate paired with ``c`` by the metric."""
        if c.kind == UNIT:
            return Divisor()
        if c.kind == DIVISOR:
            return Unit()
        return Twisted(c.i, self.a[c.i - 1] - c.j)

    def legs(self) -> list[int]:
        """Legs i with a_i >= 2, i.e. those carrying twisted coordinates."""
        return [i for i in (1, 2, 3) if self.a[i - 1] >= 2]

    def leg_of(self, t: int) -> int:
        return self.twisted[t].i

    def __str__(self) -> str:
        return "({},{},{})".format(*self.a)


_INDEX_CACHE: dict[tuple[int, int, int], dict[Coordinate, int]] = {}


def _coord_index(A: OrbifoldData) -> dict[Coordinate, int]:
    idx = _INDEX_CACHE.get(A.a)
    if idx is None:
        idx = {c: k for k, c in enumerate(A.coords)}
        _INDEX_CACHE[A.a] = idx
    return idx


def new_orbifold(a1: int, a2: int, a3: int) -> OrbifoldData:
    """Build the orbifold data for A = (a1, a2, a3).

    The triple must already be sorted; coordinate labels depend on the order.
    """
    for x in (a1, a2, a3):
        if not isinstance(x, int) or x < 1:
            raise ValueError(f"orbifold orders must be positive integers, got {(a1, a2, a3)}")
    if not a1 <= a2 <= a3:
        raise ValueError(f"orbifold orders must satisfy a1 <= a2 <= a3, got {(a1, a2, a3)}")
    a = (a1, a2, a3)
    mu = a1 + a2 + a3 - 1
    chi = Fraction(1, a1) + Fraction(1, a2) + Fraction(1, a3) - 1
    twisted = tuple(Twisted(i, j) for i in (1, 2, 3) for j in range(1, a[i - 1]))
    coords = (Unit(),) + twisted + (Divisor(),)
    assert len(coords) == mu
    scale = lcm(a1, a2, a3)
    weights = tuple(scale * (a[c.i - 1] - c.j) // a[c.i - 1] for c in twisted)
    chi_weight = chi * scale
    assert chi_weight.denominator == 1
    return OrbifoldData(
        a=a,
        mu=mu,
        chi=chi,
        coords=coords,
        twisted=twisted,
        scale=scale,
        weights=weights,
        chi_weight=int(chi_weight),
    )


def coordinate_degree(A: OrbifoldData, c: Coordinate) -> Fraction:
    """Euler degree of a coordinate.

    For the divisor this is the degree of ``exp(t_mu)``, namely chi_A; the
    coordinate t_mu itself has weight 0 in the Euler field.
    """
    if not A.is_valid(c):
        raise ValueError(f"{c!r} is not a coordinate of A={A}")
    if c.kind == UNIT:
        return Fraction(1)
    if c.kind == DIVISOR:
        return A.chi
    ai = A.a[c.i - 1]
    return Fraction(ai - c.j, ai)


def derivative_weight(A: OrbifoldData, c: Coordinate) -> Fraction:
    """Degree lowered by differentiating in ``c`` (0 for the divisor)."""
    if c.kind == DIVISOR:
        return Fraction(0)
    return coordinate_degree(A, c)


def metric(A: OrbifoldData, c1: Coordinate, c2: Coordinate) -> Fraction:
    if {c1.kind, c2.kind} == {UNIT, DIVISOR}:
        return Fraction(1)
    if c1.kind == TWISTED and c2.kind == TWISTED:
        if c1.i == c2.i and c2.j == A.a[c1.i - 1] - c1.j:
            return Fraction(1, A.a[c1.i - 1])
    return Fraction(0)


def metric_inverse(A: OrbifoldData, c1: Coordinate, c2: Coordinate) -> Fraction:
    if {c1.kind, c2.kind} == {UNIT, DIVISOR}:
        return Fraction(1)
    if c1.kind == TWISTED and c2.kind == TWISTED:
        if c1.i == c2.i and c2.j == A.a[c1.i - 1] - c1.j:
            return Fraction(A.a[c1.i - 1])
    return Fraction(0)


def inverse_pairs(A: OrbifoldData) -> list[tuple[Coordinate, Coordinate, Fraction]]:
    """Nonzero entries (sigma, tau, eta^{sigma tau}) of the inverse metric, canonical order."""
    return [(s, A.dual(s), metric_inverse(A, s, A.dual(s))) for s in A.coords]


def metric_matrix(A: OrbifoldData) -> list[list[Fraction]]:
    return [[metric(A, x, y) for y in A.coords] for x in A.coords]


def metric_inverse_matrix(A: OrbifoldData) -> list[list[Fraction]]:
    return [[metric_inverse(A, x, y) for y in A.coords] for x in A.coords]
