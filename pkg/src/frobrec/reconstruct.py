"""Seeding from the initial conditions and the WDVV reconstruction driver.

Unknown coefficients are resolved stage by stage along the well-order on
(length, m): first all m = 0 and m = 1 coefficients by increasing length
(they feed each other at equal length), then each m >= 2 by increasing length.
Inside a stage the solver iterates to a fixpoint, each time looking for a WDVV
coefficient equation in which the key (or its leg-symmetry orbit) is the only
Unknown.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .orbifold import OrbifoldData, new_orbifold, symmetry_factor
from .series import (
    ZERO,
    CoeffKey,
    Potential,
    admissible_keys,
    derivative_table,
    is_structural_zero,
    leg_permutations,
    natural_max_m,
    orbit,
    permute_alpha,
    unit_vector,
)
from .wdvv import WdvvInstance, wdvv_form_idx

log = logging.getLogger(__name__)


class ReconstructionError(RuntimeError):
    pass


class Stalled(ReconstructionError):
    def __init__(self, keys: list[CoeffKey]):
        self.keys = keys
        super().__init__(f"no resolving WDVV equation for {len(keys)} key(s), first {keys[0]}")


class Inconsistent(ReconstructionError):
    def __init__(self, key: CoeffKey, v1: Fraction, v2: Fraction):
        self.key, self.v1, self.v2 = key, v1, v2
        super().__init__(f"key {key} resolved to both {v1} and {v2}")


class SymmetryConflict(ReconstructionError):
    def __init__(self, key1: CoeffKey, key2: CoeffKey):
        self.key1, self.key2 = key1, key2
        super().__init__(f"leg-symmetric keys {key1} and {key2} disagree")


@dataclass
class SeedReport:
    cubic: int = 0
    base: int = 0
    structural_zero: int = 0


@dataclass
class LogEntry:
    key: CoeffKey
    instance: WdvvInstance
    value: Fraction
    tier: int
    stage: tuple[int, int]


# ---------------------------------------------------------------------------
# seeding


def base_key(A: OrbifoldData) -> CoeffKey:
    """The e^{t_mu} term whose coefficient is normalised to 1."""
    from .orbifold import Twisted

    legs = [i for i in (1, 2, 3) if A.a[i - 1] >= 2]
    return unit_vector(A, *(Twisted(i, 1) for i in legs)), 1


def cubic_value(A: OrbifoldData, key: CoeffKey) -> Fraction:
    """Value of a length-3, m = 0 coefficient forced by the limit algebra."""
    alpha, m = key
    assert m == 0 and sum(alpha) == 3
    parts = [A.twisted[t] for t, e in enumerate(alpha) for _ in range(e)]
    if len({c.i for c in parts}) != 1:
        return ZERO
    ai = A.a[parts[0].i - 1]
    js = [c.j for c in parts]
    if sum(js) != ai:
        return ZERO
    return Fraction(1, ai * symmetry_factor(*js))


def default_max_m(A: OrbifoldData, max_m: Optional[int]) -> int:
    nat = natural_max_m(A)
    if max_m is None:
        if nat is None:
            raise ValueError(f"chi_A = {A.chi} <= 0: the potential is infinite in m, max_m is required")
        return max(nat, 1)
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    return max_m


def seed_with_report(A: OrbifoldData, max_m: Optional[int] = None,
                     max_len: Optional[int] = None) -> tuple[Potential, SeedReport]:
    P = Potential(A, default_max_m(A, max_m), max_len)
    rep = SeedReport()
    for alpha in admissible_keys(A, 0):
        key = (alpha, 0)
        if is_structural_zero(A, key):
            if P.in_bounds(key):
                rep.structural_zero += 1
        elif sum(alpha) == 3 and P.in_bounds(key):
            P.set(key, cubic_value(A, key))
            rep.cubic += 1
    bk = base_key(A)
    if P.in_bounds(bk):
        P.set(bk, 1)
        rep.base = 1
    return P, rep


def seed(A: OrbifoldData, max_m: Optional[int] = None, max_len: Optional[int] = None) -> Potential:
    return seed_with_report(A, max_m, max_len)[0]


# ---------------------------------------------------------------------------
# the solver


def stage_of(key: CoeffKey) -> tuple[int, int]:
    """Position of a key in the induction: (0, |alpha|) for m <= 1, (m-1, |alpha|) beyond."""
    alpha, m = key
    return (max(m, 1) - 1, sum(alpha))


class SolveState:
    """Mutable state of one reconstruction run (single writer)."""

    def __init__(self, P: Potential, use_symmetry: bool = True, tier2: bool = True):
        self.P = P
        self.A = P.A
        self.use_symmetry = use_symmetry
        self.tier2 = tier2
        self.cursor: tuple[int, int] = (0, 0)
        self.worklist: list[CoeffKey] = []
        self.log: list[LogEntry] = []
        self._table = derivative_table(self.A)
        self._build_static_partners()

    # partners ----------------------------------------------------------
    def _build_static_partners(self) -> None:
        """For each tau, the pairs (c, d) with F_{tau c d} a nonzero constant."""
        A = self.A
        mu = A.mu
        zero = tuple(0 for _ in A.twisted)
        self._const_partners: dict[int, list[tuple[int, int]]] = {t: [] for t in range(mu)}
        for t in range(mu):
            for c in range(mu):
                for d in range(mu):
                    v, k = self._table.coefficient(self.P, t, c, d, zero, 0)
                    if k is None and v:
                        self._const_partners[t].append((c, d))

    def _key_partners(self, tau: int, key: CoeffKey) -> Iterator[tuple[int, int, tuple, int]]:
        """(c, d, slice, n) with d_tau d_c d_d applied to the Known monomial ``key``."""
        A = self.A
        alpha, m = key
        div = A.mu - 1
        avail = [A.index(A.twisted[t]) for t, e in enumerate(alpha) if e]
        if m > 0:
            avail.append(div)
        if tau not in avail:
            return
        for c in avail:
            for d in avail:
                rest = list(alpha)
                ok = True
                for q in (tau, c, d):
                    if q != div:
                        t = q - 1
                        rest[t] -= 1
                        if rest[t] < 0:
                            ok = False
                            break
                if ok:
                    yield c, d, tuple(rest), m

    # candidates --------------------------------------------------------
    def _slots(self, key: CoeffKey) -> Iterator[tuple[tuple[int, int, int], tuple, int]]:
        """Ordered derivative triples (a, b, sigma) under which c(key) appears, with the slice."""
        A = self.A
        alpha, m = key
        div = A.mu - 1
        avail = [A.index(A.twisted[t]) for t, e in enumerate(alpha) if e]
        if m > 0:
            avail.append(div)
        seen = set()
        for x in avail:
            for y in avail:
                for s in avail:
                    if (x, y, s) in seen:
                        continue
                    seen.add((x, y, s))
                    rest = list(alpha)
                    ok = True
                    for q in (x, y, s):
                        if q != div:
                            rest[q - 1] -= 1
                            if rest[q - 1] < 0:
                                ok = False
                                break
                    if ok:
                        yield (x, y, s), tuple(rest), m

    def candidates(self, key: CoeffKey, tier: int) -> Iterator[tuple[int, int, int, int, tuple, int]]:
        A = self.A
        P = self.P
        if tier == 1:
            low = [k for k, v in P.nonzero() if k[1] == 1 and sum(k[0]) <= 4]
        else:
            low = [k for k, v in P.nonzero()]
        for (a, b, s), rest, m in self._slots(key):
            tau = A.index(A.dual(A.coords[s]))
            if tier == 1:
                for c, d in self._const_partners[tau]:
                    yield a, b, c, d, rest, m
            for q in low:
                for c, d, prest, n in self._key_partners(tau, q):
                    yield a, b, c, d, tuple(p + r for p, r in zip(rest, prest)), m + n

    # resolution --------------------------------------------------------
    def _orbit(self, key: CoeffKey) -> list[CoeffKey]:
        return orbit(self.A, key) if self.use_symmetry else [key]

    def resolve_key(self, key: CoeffKey, tier: int = 1) -> Optional[Fraction]:
        """Try to determine ``key``; on success mark it (and its orbit) Known."""
        P = self.P
        if key in P.known:
            return P.known[key]
        members = set(self._orbit(key))
        tried = set()
        for cand in self.candidates(key, tier):
            if cand in tried:
                continue
            tried.add(cand)
            a, b, c, d, beta, n = cand
            if n > P.max_m:
                continue
            form = wdvv_form_idx(P, a, b, c, d, beta, n)
            if form.nonlinear or not form.terms:
                continue
            if not set(form.terms) <= members:
                continue
            total = sum(form.terms.values(), ZERO)
            if not total:
                continue
            value = -form.constant / total
            coords = self.A.coords
            inst = WdvvInstance(coords[a], coords[b], coords[c], coords[d], beta, n)
            self._assign(key, value, inst, tier)
            return value
        return None

    def _assign(self, key: CoeffKey, value: Fraction, inst: WdvvInstance, tier: int) -> None:
        P = self.P
        for k in self._orbit(key):
            old = P.known.get(k)
            if old is not None:
                if old != value:
                    raise Inconsistent(k, old, value)
                continue
            if not P.in_bounds(k):
                continue
            P.set(k, value)
            self.log.append(LogEntry(k, inst, value, tier, stage_of(k)))

    def stages(self) -> list[tuple[tuple[int, int], list[CoeffKey]]]:
        groups: dict[tuple[int, int], list[CoeffKey]] = {}
        for k in self.P.keys_in_bounds():
            groups.setdefault(stage_of(k), []).append(k)
        return sorted(groups.items())

    def _pass(self, tier: int, first_only: bool = False) -> bool:
        P = self.P
        progress = False
        for k in self.worklist:
            if k in P.known:
                continue
            if self.resolve_key(k, tier) is not None:
                progress = True
                if first_only:
                    break
        self.worklist = [k for k in self.worklist if k not in P.known]
        return progress

    def run(self) -> Potential:
        P = self.P
        for stage, keys in self.stages():
            self.cursor = stage
            self.worklist = [k for k in keys if k not in P.known]
            if self.worklist:
                log.debug("stage %s: %d unknown keys", stage, len(self.worklist))
            while self.worklist:
                if self._pass(1):
                    continue
                # one tier-2 success, then back to the cheaper tier-1 search
                if self.tier2 and self._pass(2, first_only=True):
                    continue
                raise Stalled(self.worklist)
        return P


def apply_symmetry(state: SolveState) -> int:
    """Copy Known values across leg-permutation orbits; returns the count of new keys."""
    P = state.P
    A = state.A
    perms = leg_permutations(A)
    added = 0
    for key, value in sorted(P.known.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        for p in perms:
            k2 = (permute_alpha(A, key[0], p), key[1])
            old = P.known.get(k2)
            if old is None:
                if P.in_bounds(k2):
                    P.set(k2, value)
                    added += 1
            elif old != value:
                raise SymmetryConflict(key, k2)
    return added


def solve(A: OrbifoldData, max_m: Optional[int] = None, max_len: Optional[int] = None,
          use_symmetry: bool = True) -> SolveState:
    state = SolveState(seed(A, max_m, max_len), use_symmetry=use_symmetry)
    if use_symmetry:
        apply_symmetry(state)
    state.run()
    return state


def reconstruct(A: OrbifoldData, max_m: Optional[int] = None, max_len: Optional[int] = None,
                use_symmetry: bool = True) -> Potential:
    """Seed and solve; every admissible key within bounds ends up Known."""
    return solve(A, max_m, max_len, use_symmetry).P


def reconstruct_triple(a1: int, a2: int, a3: int, max_m: Optional[int] = None) -> Potential:
    return reconstruct(new_orbifold(a1, a2, a3), max_m)
