from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from frobrec.orbifold import Divisor, Twisted, Unit, new_orbifold
from frobrec.reconstruct import seed
from frobrec.series import (
    UNKNOWN,
    InadmissibleKey,
    LinearForm,
    Potential,
    admissible_keys,
    alpha_from_dict,
    is_admissible,
    is_structural_zero,
    lookup,
    natural_max_m,
    orbit,
    third_derivative_coefficient,
    unit_vector,
)

from conftest import cached_potential


def test_admissible_keys_222():
    A = new_orbifold(2, 2, 2)
    assert admissible_keys(A, 0) == sorted(
        alpha_from_dict(A, {(1, 1): p, (2, 1): q, (3, 1): r})
        for p in range(5) for q in range(5) for r in range(5) if p + q + r == 4
    )
    assert admissible_keys(A, 4) == [(0, 0, 0)]
    assert admissible_keys(A, 5) == []


def test_admissible_111():
    A = new_orbifold(1, 1, 1)
    assert [m for m in range(5) if admissible_keys(A, m)] == [1]
    assert natural_max_m(A) == 1


def test_natural_max_m():
    assert natural_max_m(new_orbifold(2, 2, 2)) == 4
    assert natural_max_m(new_orbifold(3, 3, 3)) is None
    assert natural_max_m(new_orbifold(2, 3, 7)) is None


def test_structural_zero_cross_leg():
    A = new_orbifold(2, 3, 5)
    key = (alpha_from_dict(A, {(2, 1): 1, (2, 2): 1, (3, 1): 1, (3, 4): 1}), 0)
    assert is_admissible(A, key)
    assert is_structural_zero(A, key)
    P = Potential(A, 2)
    assert lookup(P, key) == 0
    with pytest.raises(ValueError):
        P.set(key, 1)


def test_lookup_rejects_inadmissible():
    A = new_orbifold(2, 2, 2)
    P = Potential(A, 4)
    with pytest.raises(InadmissibleKey):
        lookup(P, ((1, 0, 0), 0))
    assert lookup(P, ((4, 0, 0), 0)) is UNKNOWN


def test_bounds():
    A = new_orbifold(2, 3, 7)
    P = Potential(A, 2, max_len=5)
    assert all(P.in_bounds(k) for k in P.keys_in_bounds())
    assert all(sum(k[0]) <= 5 and k[1] <= 2 for k in P.keys_in_bounds())
    assert not P.in_bounds(((0,) * 9, 3))


def test_orbit_222():
    A = new_orbifold(2, 2, 2)
    assert orbit(A, ((4, 0, 0), 0)) == [((0, 0, 4), 0), ((0, 4, 0), 0), ((4, 0, 0), 0)]
    assert orbit(new_orbifold(2, 3, 7), (unit_vector(new_orbifold(2, 3, 7), Twisted(1, 1)), 5)) == [
        (unit_vector(new_orbifold(2, 3, 7), Twisted(1, 1)), 5)
    ]


def test_third_derivative_trivial_part():
    A = new_orbifold(2, 3, 4)
    P = seed(A)
    zero = (0,) * len(A.twisted)
    assert third_derivative_coefficient(P, Unit(), Unit(), Divisor(), zero, 0).constant == 1
    assert third_derivative_coefficient(P, Unit(), Twisted(3, 1), Twisted(3, 3), zero, 0).constant == Fraction(1, 4)
    assert third_derivative_coefficient(P, Unit(), Twisted(3, 1), Twisted(3, 2), zero, 0).is_zero()
    assert third_derivative_coefficient(P, Unit(), Unit(), Divisor(), zero, 1).is_zero()


def test_third_derivative_falling_factorial():
    P = cached_potential((2, 2, 2))
    # d_{11}^3 of c t11^4 at t11 = 0, coefficient of t11: 24 c
    got = third_derivative_coefficient(P, Twisted(1, 1), Twisted(1, 1), Twisted(1, 1), (1, 0, 0), 0)
    assert got.constant == 24 * Fraction(-1, 96)
    # d_mu^2 d_{11} of c t11^2 e^{2 t_mu}: 2 * 2^2 * c
    got = third_derivative_coefficient(P, Divisor(), Divisor(), Twisted(1, 1), (1, 0, 0), 2)
    assert got.constant == 2 * 4 * Fraction(1, 2)


def test_third_derivative_unknown_term():
    A = new_orbifold(2, 2, 2)
    P = seed(A)
    form = third_derivative_coefficient(P, Twisted(1, 1), Twisted(1, 1), Twisted(1, 1), (1, 0, 0), 0)
    assert form.constant == 0 and form.terms == {((4, 0, 0), 0): 24}


def test_linear_form_algebra():
    f = LinearForm(Fraction(1), {((1,), 0): Fraction(2)})
    g = LinearForm(Fraction(3), {((1,), 0): Fraction(-2)})
    h = f + g
    assert h.constant == 4 and not h.terms
    assert (f - f).is_zero()
    assert f.evaluate({((1,), 0): Fraction(5)}) == 11


triples = st.sampled_from([(2, 2, 2), (2, 3, 4), (2, 3, 5), (3, 3, 3), (1, 2, 3)])


@settings(max_examples=60, deadline=None)
@given(triples, st.data())
def test_derivative_permutation_invariant(a, data):
    A = new_orbifold(*a)
    P = seed(A, max_m=2)
    x, y, z = (data.draw(st.sampled_from(list(A.coords))) for _ in range(3))
    beta = tuple(data.draw(st.integers(0, 2)) for _ in A.twisted)
    n = data.draw(st.integers(0, 2))
    ref = third_derivative_coefficient(P, x, y, z, beta, n)
    for p in ((y, x, z), (z, y, x), (x, z, y), (y, z, x)):
        assert third_derivative_coefficient(P, *p, beta, n) == ref


@settings(max_examples=40, deadline=None)
@given(triples, st.integers(0, 3))
def test_admissible_keys_are_homogeneous(a, m):
    A = new_orbifold(*a)
    for alpha in admissible_keys(A, m):
        assert is_admissible(A, (alpha, m))
        assert sum(Fraction(A.a[c.i - 1] - c.j, A.a[c.i - 1]) * e for c, e in zip(A.twisted, alpha)) + m * A.chi == 2
