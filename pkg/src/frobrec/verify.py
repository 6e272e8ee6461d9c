"""Independent checks on a reconstructed potential.

The residual sweep does not go through the per-monomial extractor used by the
solver: it expands every third derivative into a sparse series and multiplies
those series out, so each WDVV equation is checked at all of its monomials at
once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Optional

from .orbifold import DIVISOR, TWISTED, UNIT, Coordinate, OrbifoldData, inverse_pairs
from .series import (
    ZERO,
    CoeffKey,
    MultiIndex,
    Potential,
    is_admissible,
    leg_permutations,
    permute_alpha,
    trivial_third_derivative,
)
from .wdvv import WdvvInstance, involved_keys

Series = dict[tuple[MultiIndex, int], Fraction]


class IncompletePotential(ValueError):
    pass


@dataclass
class VerificationReport:
    residuals_checked: int = 0
    equations_checked: int = 0
    skipped: int = 0
    failures: list[tuple[WdvvInstance, Fraction]] = field(default_factory=list)
    homogeneity_ok: bool = True
    symmetry_ok: bool = True
    algebra_ok: bool = True
    diagnosis: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.homogeneity_ok and self.symmetry_ok and self.algebra_ok


# ---------------------------------------------------------------------------
# residual sweep


class _SeriesCache:
    def __init__(self, P: Potential):
        self.P = P
        self.A = P.A
        self.cache: dict[tuple[int, int, int], Series] = {}
        self.items = [(k, v) for k, v in P.nonzero()]

    def get(self, x: int, y: int, z: int) -> Series:
        tri = tuple(sorted((x, y, z)))
        s = self.cache.get(tri)
        if s is None:
            s = self.cache[tri] = self._build(tri)
        return s

    def _build(self, tri: tuple[int, int, int]) -> Series:
        A = self.A
        cs = [A.coords[q] for q in tri]
        zero = tuple(0 for _ in A.twisted)
        if any(c.kind == UNIT for c in cs):
            v = trivial_third_derivative(A, *cs)
            return {(zero, 0): v} if v else {}
        out: Series = {}
        n_div = sum(c.kind == DIVISOR for c in cs)
        tw = [A.twisted_index(c) for c in cs if c.kind == TWISTED]
        for (alpha, m), value in self.items:
            if n_div and m == 0:
                continue
            beta = list(alpha)
            mult = m ** n_div
            ok = True
            for t in tw:
                if beta[t] == 0:
                    ok = False
                    break
                mult *= beta[t]
                beta[t] -= 1
            if ok:
                out[(tuple(beta), m)] = mult * value
        return out


def _pairing(sc: _SeriesCache, pairs, a: int, b: int, c: int, d: int, max_m: int) -> Series:
    """sum_{s,t} F_{abs} eta^{st} F_{tcd} as a sparse series truncated at n <= max_m."""
    out: Series = {}
    for s, t, eta in pairs:
        left = sc.get(a, b, s)
        if not left:
            continue
        right = sc.get(t, c, d)
        if not right:
            continue
        for (b1, n1), v1 in left.items():
            w = eta * v1
            for (b2, n2), v2 in right.items():
                n = n1 + n2
                if n > max_m:
                    continue
                key = (tuple(p + q for p, q in zip(b1, b2)), n)
                out[key] = out.get(key, ZERO) + w * v2
    return out


def sweep_residuals(P: Potential, max_m: Optional[int] = None) -> VerificationReport:
    """Check every WDVV equation at every monomial with e-degree <= max_m."""
    if not P.is_complete():
        raise IncompletePotential("verification attempted on a partially reconstructed potential")
    A = P.A
    max_m = P.max_m if max_m is None else min(max_m, P.max_m)
    sc = _SeriesCache(P)
    pairs = [(A.index(s), A.index(t), eta) for s, t, eta in inverse_pairs(A)]
    rep = VerificationReport()
    coords = A.coords
    for p, q, r, s in combinations_with_replacement(range(A.mu), 4):
        x1 = _pairing(sc, pairs, p, q, r, s, max_m)
        others = [((p, r, q, s), _pairing(sc, pairs, p, r, q, s, max_m)),
                  ((p, s, q, r), _pairing(sc, pairs, p, s, q, r, max_m))]
        rep.equations_checked += 1
        for quad, x2 in others:
            for target in sorted(set(x1) | set(x2)):
                diff = x1.get(target, ZERO) - x2.get(target, ZERO)
                if P.max_len is not None:
                    if not all(P.in_bounds(k) for k in involved_keys(P, p, q, quad[1], quad[3], *target)):
                        rep.skipped += 1
                        continue
                rep.residuals_checked += 1
                if diff:
                    inst = WdvvInstance(coords[p], coords[q], coords[quad[1]], coords[quad[3]], *target)
                    rep.failures.append((inst, diff))
    return rep


# ---------------------------------------------------------------------------
# audits


def homogeneity_ok(P: Potential) -> bool:
    return all(is_admissible(P.A, k) for k, v in P.known.items() if v)


def symmetry_ok(P: Potential) -> bool:
    """Invariance under permutations of legs of equal order."""
    A = P.A
    for p in leg_permutations(A):
        for (alpha, m), v in P.known.items():
            k2 = (permute_alpha(A, alpha, p), m)
            if P.in_bounds(k2) and P.value(k2) != v:
                return False
    return True


# ---------------------------------------------------------------------------
# limit algebra


@dataclass
class StructureConstants:
    A: OrbifoldData
    table: dict[tuple[Coordinate, Coordinate], tuple[Fraction, ...]]

    def product(self, u: tuple[Fraction, ...], v: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        coords = self.A.coords
        out = [ZERO] * len(coords)
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                row = self.table[(coords[i], coords[j])]
                for k, r in enumerate(row):
                    if r:
                        out[k] += ui * vj * r
        return tuple(out)

    def basis(self, c: Coordinate) -> tuple[Fraction, ...]:
        return tuple(Fraction(1) if x == c else ZERO for x in self.A.coords)


def limit_algebra(A: OrbifoldData, P: Potential) -> StructureConstants:
    """Product d_x o d_y at t1 = t_{i,j} = e^{t_mu} = 0.

    Only the constant terms of the third derivatives survive: the t1-part and
    the length-3, m = 0 coefficients.
    """
    from .series import derivative_table

    tab = derivative_table(A)
    zero = tuple(0 for _ in A.twisted)
    pairs = [(A.index(s), A.index(t), eta) for s, t, eta in inverse_pairs(A)]
    table = {}
    for x, cx in enumerate(A.coords):
        for y, cy in enumerate(A.coords):
            row = [ZERO] * A.mu
            for s, t, eta in pairs:
                v, k = tab.coefficient(P, x, y, s, zero, 0)
                if k is not None:
                    raise IncompletePotential(f"limit algebra needs Unknown key {k}")
                if v:
                    row[t] += v * eta
            table[(cx, cy)] = tuple(row)
    return StructureConstants(A, table)


def _fmt(A: OrbifoldData, vec: tuple[Fraction, ...]) -> str:
    parts = [f"{v}*d[{c}]" for c, v in zip(A.coords, vec) if v]
    return " + ".join(parts) or "0"


def check_presentation(A: OrbifoldData, S: StructureConstants) -> tuple[bool, list[str]]:
    """Match S against C[x1,x2,x3]/(x_i x_k, a_i x_i^{a_i} - a_k x_k^{a_k}).

    x_i is d_{i,1} for a_i >= 2; for a_i = 1 the relation a_i x_i = (common
    value) forces x_i = d_mu.  Since the presentation has dimension mu and the
    images of its monomial basis are exactly the coordinate basis, verifying
    the relations plus unit, commutativity and associativity of S proves the
    isomorphism.
    """
    from .orbifold import Divisor, Twisted, Unit

    diag: list[str] = []
    coords = A.coords
    e = {c: S.basis(c) for c in coords}

    one = e[Unit()]
    for c in coords:
        if S.product(one, e[c]) != e[c] or S.product(e[c], one) != e[c]:
            diag.append(f"unit does not act as identity on d[{c}]")
    for c1 in coords:
        for c2 in coords:
            if S.table[(c1, c2)] != S.table[(c2, c1)]:
                diag.append(f"d[{c1}] o d[{c2}] not commutative")
    for c1 in coords:
        for c2 in coords:
            for c3 in coords:
                lhs = S.product(S.product(e[c1], e[c2]), e[c3])
                rhs = S.product(e[c1], S.product(e[c2], e[c3]))
                if lhs != rhs:
                    diag.append(f"associativity fails on (d[{c1}], d[{c2}], d[{c3}])")

    x = {}
    for i in (1, 2, 3):
        x[i] = e[Twisted(i, 1)] if A.a[i - 1] >= 2 else e[Divisor()]
    for i in (1, 2, 3):
        for k in (1, 2, 3):
            if i < k and any(S.product(x[i], x[k])):
                diag.append(f"x{i}x{k} != 0 (got {_fmt(A, S.product(x[i], x[k]))})")
    target = e[Divisor()]
    for i in (1, 2, 3):
        ai = A.a[i - 1]
        power = x[i]
        for j in range(2, ai + 1):
            power = S.product(power, x[i])
            if j <= ai - 1 and power != e[Twisted(i, j)]:
                diag.append(f"x{i}^{j} != d[{i},{j}] (got {_fmt(A, power)})")
        scaled = tuple(ai * v for v in power)
        if scaled != target:
            diag.append(f"a{i} x{i}^{ai} != d[mu] (got {_fmt(A, scaled)})")
    return not diag, diag


# ---------------------------------------------------------------------------
# invariants


def to_gw_invariant(P: Potential, key: CoeffKey) -> Fraction:
    """Genus-0 invariant <prod Delta_{i,j}^{alpha_ij}>_{0,m}: c(alpha,m) * prod alpha_ij!."""
    if not P.is_known(key):
        raise IncompletePotential(f"key {key} is Unknown")
    v = P.value(key)
    for e in key[0]:
        v *= factorial(e)
    return v


def gw_table(P: Potential) -> list[tuple[CoeffKey, Fraction]]:
    return [(k, to_gw_invariant(P, k)) for k, _ in P.nonzero()]


def verify(P: Potential, max_m: Optional[int] = None) -> VerificationReport:
    """Residual sweep plus homogeneity, leg-symmetry and limit-algebra audits."""
    rep = sweep_residuals(P, max_m)
    rep.homogeneity_ok = homogeneity_ok(P)
    rep.symmetry_ok = symmetry_ok(P)
    ok, diag = check_presentation(P.A, limit_algebra(P.A, P))
    rep.algebra_ok = ok
    rep.diagnosis = diag
    return rep
