"""Sparse exact representation of the Frobenius potential.

    F = (trivial cubic part in t1) + sum_{alpha, m} c(alpha, m) t^alpha exp(m t_mu)

A multi-index alpha is stored densely as a tuple of exponents over the twisted
coordinates in canonical order; a coefficient key is the pair ``(alpha, m)``.
Only the non-trivial coefficients are stored.  The t1-dependent part is fixed
by the metric and answered by formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Optional

from .orbifold import DIVISOR, TWISTED, UNIT, Coordinate, OrbifoldData

MultiIndex = tuple[int, ...]
CoeffKey = tuple[MultiIndex, int]

ZERO = Fraction(0)
ONE = Fraction(1)


class _Unknown:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __bool__(self) -> bool:
        return False


UNKNOWN = _Unknown()


class InadmissibleKey(ValueError):
    pass


@dataclass
class LinearForm:
    """constant + sum(multiplier * c(key)) over Unknown keys.

    ``nonlinear`` is set when a product of two Unknowns was encountered; the
    rest of the form is then meaningless for solving.
    """

    constant: Fraction = ZERO
    terms: dict[CoeffKey, Fraction] = field(default_factory=dict)
    nonlinear: bool = False

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.terms and not self.nonlinear

    def add_term(self, key: CoeffKey, mult: Fraction) -> None:
        v = self.terms.get(key, ZERO) + mult
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = LinearForm(self.constant + other.constant, dict(self.terms), self.nonlinear or other.nonlinear)
        for k, v in other.terms.items():
            out.add_term(k, v)
        return out

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.constant, {k: -v for k, v in self.terms.items()}, self.nonlinear)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return (
            self.constant == other.constant
            and self.terms == other.terms
            and self.nonlinear == other.nonlinear
        )

    def evaluate(self, values: dict[CoeffKey, Fraction]) -> Fraction:
        return self.constant + sum((m * values[k] for k, m in self.terms.items()), ZERO)


# ---------------------------------------------------------------------------
# multi-indices


def unit_vector(A: OrbifoldData, *cs: Coordinate) -> MultiIndex:
    """Sum of e_{i,j} over the given twisted coordinates."""
    v = [0] * A.n_twisted
    for c in cs:
        v[A.twisted_index(c)] += 1
    return tuple(v)


def alpha_from_dict(A: OrbifoldData, exps: dict[tuple[int, int], int]) -> MultiIndex:
    v = [0] * A.n_twisted
    for (i, j), e in exps.items():
        v[A.twisted_index(Coordinate(TWISTED, i, j))] += e
    return tuple(v)


def alpha_to_dict(A: OrbifoldData, alpha: MultiIndex) -> dict[tuple[int, int], int]:
    return {(c.i, c.j): e for c, e in zip(A.twisted, alpha) if e}


def length(alpha: MultiIndex) -> int:
    return sum(alpha)


def weight(A: OrbifoldData, alpha: MultiIndex) -> int:
    return sum(w * e for w, e in zip(A.weights, alpha))


def key_weight(A: OrbifoldData, key: CoeffKey) -> int:
    alpha, m = key
    return weight(A, alpha) + m * A.chi_weight


def is_admissible(A: OrbifoldData, key: CoeffKey) -> bool:
    alpha, m = key
    return m >= 0 and all(e >= 0 for e in alpha) and key_weight(A, key) == 2 * A.scale


def legs_in_support(A: OrbifoldData, alpha: MultiIndex) -> set[int]:
    return {A.twisted[t].i for t, e in enumerate(alpha) if e}


def is_structural_zero(A: OrbifoldData, key: CoeffKey) -> bool:
    """Inadmissible keys and m = 0 keys whose support meets two legs."""
    if not is_admissible(A, key):
        return True
    alpha, m = key
    return m == 0 and len(legs_in_support(A, alpha)) > 1


def _weighted_compositions(weights: tuple[int, ...], total: int) -> Iterator[MultiIndex]:
    n = len(weights)
    out = [0] * n

    def rec(k: int, rest: int):
        if k == n:
            if rest == 0:
                yield tuple(out)
            return
        w = weights[k]
        for e in range(rest // w + 1):
            out[k] = e
            yield from rec(k + 1, rest - e * w)
        out[k] = 0

    if total < 0:
        return
    yield from rec(0, total)


@lru_cache(maxsize=None)
def _admissible_cached(weights: tuple[int, ...], total: int) -> tuple[MultiIndex, ...]:
    return tuple(sorted(_weighted_compositions(weights, total)))


def admissible_keys(A: OrbifoldData, m: int) -> list[MultiIndex]:
    """All alpha >= 0 with deg t^alpha + m chi = 2, lexicographically sorted."""
    if m < 0:
        raise ValueError("m must be non-negative")
    total = 2 * A.scale - m * A.chi_weight
    if total < 0:
        return []
    if not A.weights:
        return [()] if total == 0 else []
    return list(_admissible_cached(A.weights, total))


def natural_max_m(A: OrbifoldData) -> Optional[int]:
    """Largest m with admissible keys when chi > 0, else None (unbounded)."""
    if A.chi <= 0:
        return None
    return int(2 / A.chi)


@lru_cache(maxsize=4096)
def sub_indices_by_weight(weights: tuple[int, ...], beta: MultiIndex) -> dict[int, list[MultiIndex]]:
    """All beta' <= beta grouped by their scaled Euler weight."""
    groups: dict[int, list[MultiIndex]] = {}
    for sub in product(*(range(e + 1) for e in beta)):
        w = sum(a * b for a, b in zip(weights, sub))
        groups.setdefault(w, []).append(sub)
    return groups


# ---------------------------------------------------------------------------
# leg symmetry


def leg_permutations(A: OrbifoldData) -> list[tuple[int, int, int]]:
    """Non-identity permutations p of legs (p[i-1] = image of leg i) preserving A."""
    perms = []
    for p in permutations((1, 2, 3)):
        if p == (1, 2, 3):
            continue
        if all(A.a[i] == A.a[p[i] - 1] for i in range(3)):
            perms.append(p)
    return perms


def permute_alpha(A: OrbifoldData, alpha: MultiIndex, perm: tuple[int, int, int]) -> MultiIndex:
    v = [0] * A.n_twisted
    for c, e in zip(A.twisted, alpha):
        if e:
            v[A.twisted_index(Coordinate(TWISTED, perm[c.i - 1], c.j))] = e
    return tuple(v)


def orbit(A: OrbifoldData, key: CoeffKey) -> list[CoeffKey]:
    """Sorted orbit of a key under permutations of equal legs."""
    alpha, m = key
    keys = {key}
    for p in leg_permutations(A):
        keys.add((permute_alpha(A, alpha, p), m))
    return sorted(keys)


# ---------------------------------------------------------------------------
# the potential


class Potential:
    """Exact sparse potential with Known/Unknown status per coefficient.

    Keys outside the active bounds (m > max_m, or |alpha| > max_len) are never
    Known; structural zeros are always Known and never stored.
    """

    def __init__(self, A: OrbifoldData, max_m: int, max_len: Optional[int] = None):
        self.A = A
        self.max_m = max_m
        self.max_len = max_len
        self.known: dict[CoeffKey, Fraction] = {}

    # status -------------------------------------------------------------
    def in_bounds(self, key: CoeffKey) -> bool:
        alpha, m = key
        if m > self.max_m:
            return False
        return self.max_len is None or sum(alpha) <= self.max_len

    def is_known(self, key: CoeffKey) -> bool:
        return key in self.known or is_structural_zero(self.A, key)

    def value(self, key: CoeffKey):
        """Value of a key, or UNKNOWN.  Does not validate admissibility."""
        v = self.known.get(key)
        if v is not None:
            return v
        if is_structural_zero(self.A, key):
            return ZERO
        return UNKNOWN

    def set(self, key: CoeffKey, value) -> None:
        if not is_admissible(self.A, key):
            raise InadmissibleKey(f"key {key} violates homogeneity for A={self.A}")
        if is_structural_zero(self.A, key):
            if value != 0:
                raise ValueError(f"key {key} is a structural zero; cannot set it to {value}")
            return
        self.known[key] = Fraction(value)

    def unknown_keys(self) -> list[CoeffKey]:
        return [k for k in self.keys_in_bounds() if k not in self.known]

    def keys_in_bounds(self) -> list[CoeffKey]:
        """Admissible, non-structural keys inside the bounds, sorted by (m, alpha)."""
        out = []
        for m in range(self.max_m + 1):
            for alpha in admissible_keys(self.A, m):
                key = (alpha, m)
                if self.in_bounds(key) and not is_structural_zero(self.A, key):
                    out.append(key)
        return out

    def is_complete(self) -> bool:
        return all(k in self.known for k in self.keys_in_bounds())

    def nonzero(self) -> list[tuple[CoeffKey, Fraction]]:
        """Nonzero Known coefficients sorted by (m, alpha)."""
        return sorted(
            ((k, v) for k, v in self.known.items() if v != 0), key=lambda kv: (kv[0][1], kv[0][0])
        )

    def copy(self) -> "Potential":
        P = Potential(self.A, self.max_m, self.max_len)
        P.known = dict(self.known)
        return P

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Potential):
            return NotImplemented
        return (
            self.A.a == other.A.a
            and self.max_m == other.max_m
            and self.max_len == other.max_len
            and self.known == other.known
        )

    def __repr__(self) -> str:
        return f"Potential(A={self.A}, max_m={self.max_m}, known={len(self.known)})"


def lookup(P: Potential, key: CoeffKey):
    """Exact value of an admissible key, or UNKNOWN."""
    if not is_admissible(P.A, key):
        raise InadmissibleKey(f"key {key} violates homogeneity for A={P.A}")
    return P.value(key)


# ---------------------------------------------------------------------------
# third derivatives


def trivial_third_derivative(A: OrbifoldData, x: Coordinate, y: Coordinate, z: Coordinate) -> Fraction:
    """Constant third derivative of the t1-part of F (requires a Unit among x, y, z)."""
    kinds = sorted((x.kind, y.kind, z.kind))
    if kinds == [DIVISOR, UNIT, UNIT]:
        return ONE
    if kinds == [TWISTED, TWISTED, UNIT]:
        p, q = [c for c in (x, y, z) if c.kind == TWISTED]
        if p.i == q.i and p.j + q.j == A.a[p.i - 1]:
            return Fraction(1, A.a[p.i - 1])
    return ZERO


class DerivativeTable:
    """Precomputed bookkeeping for third derivatives d_x d_y d_z F of one A.

    ``shift[(x, y, z)]`` holds, for a sorted index triple, the twisted shift
    vector, the number of divisor derivatives and the scaled weight lowered;
    triples with a Unit map to their trivial constant instead.
    """

    def __init__(self, A: OrbifoldData):
        self.A = A
        mu = A.mu
        self.unit_const: dict[tuple[int, int, int], Fraction] = {}
        self.shift: dict[tuple[int, int, int], tuple[tuple[tuple[int, int], ...], int, int]] = {}
        for x in range(mu):
            for y in range(x, mu):
                for z in range(y, mu):
                    cx, cy, cz = A.coords[x], A.coords[y], A.coords[z]
                    if UNIT in (cx.kind, cy.kind, cz.kind):
                        self.unit_const[(x, y, z)] = trivial_third_derivative(A, cx, cy, cz)
                        continue
                    counts: dict[int, int] = {}
                    n_div = 0
                    w = 0
                    for c in (cx, cy, cz):
                        if c.kind == DIVISOR:
                            n_div += 1
                        else:
                            t = A.twisted_index(c)
                            counts[t] = counts.get(t, 0) + 1
                            w += A.weights[t]
                    self.shift[(x, y, z)] = (tuple(sorted(counts.items())), n_div, w)

    def lowered_weight(self, x: int, y: int, z: int) -> Optional[int]:
        """Scaled degree removed by d_x d_y d_z, None if a Unit is involved."""
        s = self.shift.get(tuple(sorted((x, y, z))))
        return None if s is None else s[2]

    def coefficient(self, P: Potential, x: int, y: int, z: int, beta: MultiIndex, n: int):
        """Coefficient of t^beta e^{n t_mu} in d_x d_y d_z F.

        Returns ``(value, key)``: ``key`` is None for a Known result, otherwise
        the result is ``value * c(key)`` with ``c(key)`` Unknown.
        """
        tri = tuple(sorted((x, y, z)))
        const = self.unit_const.get(tri)
        if const is not None:
            if n == 0 and not any(beta):
                return const, None
            return ZERO, None
        counts, n_div, _ = self.shift[tri]
        if n_div and n == 0:
            return ZERO, None
        alpha = list(beta)
        mult = n ** n_div
        for t, k in counts:
            e = beta[t] + k
            alpha[t] = e
            for r in range(k):
                mult *= e - r
        key = (tuple(alpha), n)
        val = P.value(key)
        if val is UNKNOWN:
            return Fraction(mult), key
        if not val:
            return ZERO, None
        return mult * val, None


_TABLES: dict[tuple[int, int, int], DerivativeTable] = {}


def derivative_table(A: OrbifoldData) -> DerivativeTable:
    tab = _TABLES.get(A.a)
    if tab is None:
        tab = _TABLES[A.a] = DerivativeTable(A)
    return tab


def third_derivative_coefficient(
    P: Potential, x: Coordinate, y: Coordinate, z: Coordinate, beta: MultiIndex, n: int
) -> LinearForm:
    """Coefficient of t^beta e^{n t_mu} in d_x d_y d_z F as a LinearForm."""
    if n < 0 or any(e < 0 for e in beta):
        raise ValueError("target monomial must have non-negative exponents")
    A = P.A
    tab = derivative_table(A)
    val, key = tab.coefficient(P, A.index(x), A.index(y), A.index(z), tuple(beta), n)
    if key is None:
        return LinearForm(val)
    return LinearForm(ZERO, {key: val})
