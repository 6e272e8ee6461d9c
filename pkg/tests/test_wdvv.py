from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from frobrec.orbifold import Divisor, Twisted, Unit, new_orbifold
from frobrec.reconstruct import seed
from frobrec.series import alpha_from_dict, unit_vector, weight
from frobrec.wdvv import (
    UnknownReached,
    WdvvInstance,
    antisymmetry_check,
    instance,
    target_weight,
    wdvv_form,
    wdvv_residual,
)

from conftest import cached_potential


def _base_target(A):
    return unit_vector(A, Twisted(1, 1), Twisted(2, 1), Twisted(3, 1))


def test_quartic_equation_222():
    A = new_orbifold(2, 2, 2)
    P = seed(A, 4)
    inst = WdvvInstance(Twisted(1, 1), Twisted(1, 1), Divisor(), Divisor(), _base_target(A), 1)
    form = wdvv_form(P, inst)
    assert not form.nonlinear
    assert form.constant == Fraction(1, 2)
    assert form.terms == {((4, 0, 0), 0): 48}


@pytest.mark.parametrize("a", [(2, 3, 3), (3, 3, 3), (2, 3, 5), (3, 4, 5)])
def test_quartic_equation_higher_order(a):
    A = new_orbifold(*a)
    i = next(i for i in (1, 2, 3) if A.a[i - 1] >= 3)
    ai = A.a[i - 1]
    P = seed(A, 2)
    inst = WdvvInstance(Twisted(i, 1), Twisted(i, ai - 1), Divisor(), Divisor(), _base_target(A), 1)
    form = wdvv_form(P, inst)
    key = (alpha_from_dict(A, {(i, 1): 2, (i, ai - 1): 2}), 0)
    assert form.constant == Fraction(1, ai)
    assert form.terms == {key: 4 * ai}


def test_residual_requires_known():
    A = new_orbifold(2, 2, 2)
    P = seed(A, 4)
    inst = WdvvInstance(Twisted(1, 1), Twisted(1, 1), Divisor(), Divisor(), _base_target(A), 1)
    with pytest.raises(UnknownReached):
        wdvv_residual(P, inst)
    assert wdvv_residual(cached_potential((2, 2, 2)), inst) == 0


def test_residual_111():
    A = new_orbifold(1, 1, 1)
    P = cached_potential((1, 1, 1))
    for a in A.coords:
        for b in A.coords:
            for c in A.coords:
                for d in A.coords:
                    for n in range(2):
                        assert wdvv_residual(P, instance(A, a, b, c, d, n=n)) == 0


def test_perturbation_detected():
    P = cached_potential((2, 2, 2)).copy()
    A = P.A
    P.known[((4, 0, 0), 0)] += 1
    inst = WdvvInstance(Twisted(1, 1), Twisted(1, 1), Divisor(), Divisor(), _base_target(A), 1)
    assert wdvv_residual(P, inst) != 0


def test_fully_known_form_has_no_terms():
    P = cached_potential((3, 3, 3), 1)
    A = P.A
    form = wdvv_form(P, WdvvInstance(Twisted(1, 1), Twisted(1, 2), Divisor(), Divisor(), _base_target(A), 1))
    assert not form.terms and not form.nonlinear


def test_antisymmetry_all_units():
    A = new_orbifold(2, 3, 5)
    P = seed(A, 2)
    assert antisymmetry_check(P, Unit(), Unit(), Unit(), Unit(), ((0,) * len(A.twisted), 0))


def _random_target(A, data, quad):
    """A small random target monomial (most draws miss the forced degree)."""
    beta = tuple(data.draw(st.integers(0, 2)) for _ in A.twisted)
    n = data.draw(st.integers(0, 2))
    return beta, n


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_antisymmetry_235(data):
    A = new_orbifold(2, 3, 5)
    P = seed(A, 2)
    quad = [data.draw(st.sampled_from(list(A.coords))) for _ in range(4)]
    assert antisymmetry_check(P, *quad, _random_target(A, data, quad))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 2, 2), (2, 3, 4), (3, 3, 3)]), st.data())
def test_antisymmetry_reconstructed(a, data):
    P = cached_potential(a, 2)
    A = P.A
    quad = [data.draw(st.sampled_from(list(A.coords))) for _ in range(4)]
    assert antisymmetry_check(P, *quad, _random_target(A, data, quad))


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([(2, 2, 2), (2, 3, 4), (2, 3, 5)]), st.data())
def test_degree_filter(a, data):
    A = new_orbifold(*a)
    P = seed(A, 2)
    quad = tuple(data.draw(st.sampled_from(list(A.coords))) for _ in range(4))
    beta, n = _random_target(A, data, quad)
    if weight(A, beta) + n * A.chi_weight != target_weight(A, quad):
        assert wdvv_form(P, WdvvInstance(*quad, beta, n)).is_zero()
