"""Brute-force reference solver for small A.

Builds F symbolically with sympy (one symbol per coefficient that is not fixed
by the initial conditions), expands every WDVV equation as a polynomial in
t_{i,j} and q = e^{t_mu}, and solves the coefficient equations stage by stage
as a linear system.  Shares nothing with the sparse extractor or the solver
beyond the coordinate conventions and the seed values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Optional

import sympy as sp

from .orbifold import OrbifoldData
from .series import CoeffKey, Potential


class OracleFailure(RuntimeError):
    pass


def _brute_keys(A: OrbifoldData, max_m: int) -> list[CoeffKey]:
    """Admissible keys by exhaustive search over an exponent box."""
    keys = []
    degs = [Fraction(A.a[c.i - 1] - c.j, A.a[c.i - 1]) for c in A.twisted]
    for m in range(max_m + 1):
        rest = 2 - m * A.chi
        if rest < 0:
            continue
        box = [range(int(rest / d) + 1) for d in degs]
        for alpha in product(*box):
            if sum(d * e for d, e in zip(degs, alpha)) == rest:
                keys.append((tuple(alpha), m))
    return sorted(keys, key=lambda k: (k[1], k[0]))


def _initially_fixed(A: OrbifoldData, key: CoeffKey, seeds: dict[CoeffKey, Fraction]):
    """Value prescribed by the initial conditions, or None."""
    alpha, m = key
    if key in seeds:
        return seeds[key]
    legs = {A.twisted[t].i for t, e in enumerate(alpha) if e}
    if m == 0 and len(legs) > 1:
        return Fraction(0)
    return None


def _stage(key: CoeffKey) -> tuple[int, int]:
    alpha, m = key
    return (max(m, 1) - 1, sum(alpha))


def oracle_reconstruct(A: OrbifoldData, max_m: int, seeds: dict[CoeffKey, Fraction]) -> Potential:
    """Solve all WDVV coefficient equations stage by stage; unique solution required.

    ``seeds`` holds the values fixed by the initial conditions (cubic terms
    and the e^{t_mu} normalisation).  Leg-symmetry constraints are added as
    linear equations.
    """
    t = [sp.Symbol(f"t{c.i}_{c.j}") for c in A.twisted]
    t1, tm, q = sp.symbols("t1 tmu q")
    gens = t + [q]

    keys = _brute_keys(A, max_m)
    sym: dict[CoeffKey, sp.Symbol] = {}
    values: dict[sp.Symbol, sp.Rational] = {}
    F = sp.Rational(1, 2) * t1**2 * tm
    for i, ci in enumerate(A.twisted):
        for k, ck in enumerate(A.twisted):
            if ci.i == ck.i and ci.j + ck.j == A.a[ci.i - 1]:
                F += sp.Rational(1, 2 * A.a[ci.i - 1]) * t1 * t[i] * t[k]
    for key in keys:
        alpha, m = key
        s = sp.Symbol("c_" + "_".join(map(str, alpha)) + f"__{m}")
        sym[key] = s
        fixed = _initially_fixed(A, key, seeds)
        if fixed is not None:
            values[s] = sp.Rational(fixed.numerator, fixed.denominator)
        mono = sp.Integer(1)
        for v, e in zip(t, alpha):
            mono *= v**e
        F += s * mono * q**m

    variables = [t1] + t + [tm]

    def deriv(expr, k):
        if k == len(variables) - 1:
            return sp.diff(expr, tm) + q * sp.diff(expr, q)
        return sp.diff(expr, variables[k])

    mu = A.mu
    dual = [A.index(A.dual(c)) for c in A.coords]
    eta_inv = [sp.Integer(1) if c.kind != "twisted" else sp.Integer(A.a[c.i - 1]) for c in A.coords]
    d3 = {}
    for x, y, z in combinations_with_replacement(range(mu), 3):
        e = deriv(deriv(deriv(F, x), y), z)
        d3[(x, y, z)] = sp.expand(e.subs({t1: 0, tm: 0}))

    def D(x, y, z):
        return d3[tuple(sorted((x, y, z)))]

    def X(a, b, c, d):
        return sum((D(a, b, s) * eta_inv[s] * D(dual[s], c, d) for s in range(mu)), sp.Integer(0))

    equations = []
    for a, b, c, d in combinations_with_replacement(range(mu), 4):
        x1 = X(a, b, c, d)
        for other in (X(a, c, b, d), X(a, d, b, c)):
            poly = sp.Poly(sp.expand(x1 - other), *gens)
            for monom, coeff in poly.terms():
                if monom[-1] <= max_m and coeff != 0:
                    equations.append(coeff)

    from .series import leg_permutations, permute_alpha

    for p in leg_permutations(A):
        for key in keys:
            k2 = (permute_alpha(A, key[0], p), key[1])
            if k2 in sym and k2 != key:
                equations.append(sym[key] - sym[k2])

    stages: dict[tuple[int, int], list[sp.Symbol]] = {}
    for key in keys:
        if sym[key] not in values:
            stages.setdefault(_stage(key), []).append(sym[key])

    pending = [sp.expand(eq.subs(values)) for eq in equations]
    for stage in sorted(stages):
        unknowns = stages[stage]
        current = set(unknowns)
        usable = []
        for eq in pending:
            fs = eq.free_symbols
            if fs and fs <= current and sp.Poly(eq, *unknowns).total_degree() <= 1:
                usable.append(eq)
        if not usable:
            raise OracleFailure(f"stage {stage}: no usable equations")
        M, rhs = sp.linear_eq_to_matrix(usable, unknowns)
        if M.rank() != len(unknowns):
            raise OracleFailure(f"stage {stage}: solution not unique (rank {M.rank()} < {len(unknowns)})")
        sol = sp.linsolve((M, rhs), unknowns)
        if not sol:
            raise OracleFailure(f"stage {stage}: inconsistent equations")
        (vals,) = sol
        for s, v in zip(unknowns, vals):
            values[s] = v
        pending = [e for e in (sp.expand(eq.subs(values)) for eq in pending) if e != 0]

    leftovers = [eq for eq in pending if not eq.free_symbols]
    if leftovers:
        raise OracleFailure(f"{len(leftovers)} WDVV equations violated by the solution")

    P = Potential(A, max_m)
    for key in keys:
        v = values[sym[key]]
        P.set(key, Fraction(int(v.p), int(v.q)))
    return P


def oracle_from_seed(A: OrbifoldData, max_m: Optional[int] = None) -> Potential:
    from .reconstruct import default_max_m, seed

    max_m = default_max_m(A, max_m)
    S = seed(A, max_m)
    return oracle_reconstruct(A, max_m, dict(S.known))
