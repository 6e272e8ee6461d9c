"""Per-monomial coefficient extraction from the WDVV equations.

For coordinates (a, b, c, d) the equation reads

    sum_{s,t} F_{abs} eta^{st} F_{tcd} - sum_{s,t} F_{acs} eta^{st} F_{tbd} = 0,

and we only ever look at the coefficient of one monomial t^beta e^{n t_mu}
(never involving t1).  Each product of third derivatives is a convolution over
the splittings of that monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .orbifold import Coordinate, OrbifoldData, inverse_pairs
from .series import (
    CoeffKey,
    LinearForm,
    MultiIndex,
    Potential,
    derivative_table,
    sub_indices_by_weight,
    weight,
)

__all__ = [
    "LinearForm",
    "WdvvInstance",
    "UnknownReached",
    "wdvv_form",
    "wdvv_residual",
    "antisymmetry_check",
    "target_weight",
]


class UnknownReached(RuntimeError):
    """A residual was requested for an equation touching an Unknown coefficient."""


@dataclass(frozen=True)
class WdvvInstance:
    a: Coordinate
    b: Coordinate
    c: Coordinate
    d: Coordinate
    beta: MultiIndex
    n: int

    @property
    def quadruple(self) -> tuple[Coordinate, Coordinate, Coordinate, Coordinate]:
        return (self.a, self.b, self.c, self.d)

    def describe(self, A: OrbifoldData) -> str:
        from .series import alpha_to_dict

        mono = " ".join(f"t{i}{j}^{e}" if e > 1 else f"t{i}{j}" for (i, j), e in alpha_to_dict(A, self.beta).items())
        if self.n:
            mono = (mono + " " if mono else "") + (f"e^{self.n}t" if self.n > 1 else "e^t")
        return f"WDVV({self.a},{self.b},{self.c},{self.d})[{mono or '1'}]"


def _weight_lowered(A: OrbifoldData, idx: int) -> int:
    c = A.coords[idx]
    if c.kind == "unit":
        return A.scale
    if c.kind == "divisor":
        return 0
    return A.weights[A.twisted_index(c)]


def target_weight(A: OrbifoldData, quad: tuple[Coordinate, ...]) -> int:
    """Scaled degree deg(beta) + n*chi forced on nonzero targets of WDVV(quad)."""
    return 3 * A.scale - sum(_weight_lowered(A, A.index(c)) for c in quad)


class _Extractor:
    """Holds per-A tables; one instance is reused across many forms."""

    def __init__(self, A: OrbifoldData):
        self.A = A
        self.table = derivative_table(A)
        self.pairs = [(A.index(s), A.index(t), eta) for s, t, eta in inverse_pairs(A)]
        self.lowered = [_weight_lowered(A, k) for k in range(A.mu)]
        self.unit = A.index(A.coords[0])

    def product(self, P: Potential, form: LinearForm, sign: int, x: int, y: int, u: int, v: int,
                beta: MultiIndex, n: int) -> None:
        """Accumulate sign * sum_{s,t} F_{x y s} eta^{st} F_{t u v} at (beta, n) into form."""
        A = self.A
        tab = self.table
        zero_beta = tuple(0 for _ in beta)
        subs = None
        full = 2 * A.scale
        for s, t, eta in self.pairs:
            if 0 in (x, y, s):
                # left factor is a constant of the t1-part
                splits = [(zero_beta, 0)]
            elif 0 in (t, u, v):
                splits = [(beta, n)]
            else:
                if subs is None:
                    subs = sub_indices_by_weight(A.weights, beta)
                low = self.lowered[x] + self.lowered[y] + self.lowered[s]
                splits = []
                for n1 in range(n + 1):
                    for b1 in subs.get(full - low - n1 * A.chi_weight, ()):
                        splits.append((b1, n1))
            for b1, n1 in splits:
                v1, k1 = tab.coefficient(P, x, y, s, b1, n1)
                if not v1:
                    continue
                b2 = tuple(p - q for p, q in zip(beta, b1))
                v2, k2 = tab.coefficient(P, t, u, v, b2, n - n1)
                if not v2:
                    continue
                coef = sign * eta * v1 * v2
                if k1 is None and k2 is None:
                    form.constant += coef
                elif k1 is None:
                    form.add_term(k2, coef)
                elif k2 is None:
                    form.add_term(k1, coef)
                else:
                    form.nonlinear = True


_EXTRACTORS: dict[tuple[int, int, int], _Extractor] = {}


def _extractor(A: OrbifoldData) -> _Extractor:
    ex = _EXTRACTORS.get(A.a)
    if ex is None:
        ex = _EXTRACTORS[A.a] = _Extractor(A)
    return ex


def wdvv_form_idx(P: Potential, a: int, b: int, c: int, d: int, beta: MultiIndex, n: int) -> LinearForm:
    """wdvv_form on coordinate indices; the hot path of the solver and the sweep."""
    A = P.A
    ex = _extractor(A)
    lowered = ex.lowered
    if weight(A, beta) + n * A.chi_weight != 3 * A.scale - lowered[a] - lowered[b] - lowered[c] - lowered[d]:
        return LinearForm()
    form = LinearForm(Fraction(0), {}, False)
    ex.product(P, form, 1, a, b, c, d, beta, n)
    ex.product(P, form, -1, a, c, b, d, beta, n)
    return form


def wdvv_form(P: Potential, inst: WdvvInstance) -> LinearForm:
    """Coefficient of the instance's target monomial in WDVV(a, b, c, d)."""
    A = P.A
    return wdvv_form_idx(
        P, A.index(inst.a), A.index(inst.b), A.index(inst.c), A.index(inst.d), tuple(inst.beta), inst.n
    )


def wdvv_residual(P: Potential, inst: WdvvInstance) -> Fraction:
    form = wdvv_form(P, inst)
    if form.terms or form.nonlinear:
        raise UnknownReached(f"{inst} touches Unknown coefficients {sorted(form.terms)}")
    return form.constant


def antisymmetry_check(P: Potential, a: Coordinate, b: Coordinate, c: Coordinate, d: Coordinate,
                       target: tuple[MultiIndex, int]) -> bool:
    beta, n = target
    f1 = wdvv_form(P, WdvvInstance(a, b, c, d, tuple(beta), n))
    f2 = wdvv_form(P, WdvvInstance(a, c, b, d, tuple(beta), n))
    total = f1 + f2
    return total.constant == 0 and not total.terms


def instance(A: OrbifoldData, a, b, c, d, beta: Optional[MultiIndex] = None, n: int = 0) -> WdvvInstance:
    """Convenience constructor; beta defaults to the empty monomial."""
    if beta is None:
        beta = tuple(0 for _ in A.twisted)
    return WdvvInstance(a, b, c, d, tuple(beta), n)


def involved_keys(P: Potential, a: int, b: int, c: int, d: int, beta: MultiIndex, n: int) -> set[CoeffKey]:
    """Every non-trivial coefficient key touched by the convolution (for bound checks)."""
    A = P.A
    ex = _extractor(A)
    keys: set[CoeffKey] = set()
    if weight(A, beta) + n * A.chi_weight != 3 * A.scale - sum(ex.lowered[q] for q in (a, b, c, d)):
        return keys
    subs = sub_indices_by_weight(A.weights, beta)
    full = 2 * A.scale
    for x, y, u, v in ((a, b, c, d), (a, c, b, d)):
        for s, t, _ in ex.pairs:
            for trip, other in (((x, y, s), 0), ((t, u, v), 1)):
                if 0 in trip:
                    continue
                counts, n_div, low = ex.table.shift[tuple(sorted(trip))]
                for n1 in range(n + 1):
                    for b1 in subs.get(full - low - n1 * A.chi_weight, ()):
                        if n_div and n1 == 0:
                            continue
                        alpha = list(b1)
                        for tw, k in counts:
                            alpha[tw] += k
                        keys.add((tuple(alpha), n1))
    return keys
