import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ainfty_forge.jacobian import (
    NotIsolated,
    NotZeroDimensional,
    buchberger,
    format_poly,
    hh_ring_check,
    invariant_membership,
    is_reduced,
    jacobian_ideal,
    monomial,
    normal_form,
    p_add,
    p_mul,
    quotient_dimension,
    standard_monomials,
    superpotential,
)

PROPS = settings(max_examples=200, derandomize=True, deadline=None)


def test_buchberger_already_reduced():
    gb = buchberger([monomial((1, 0)), monomial((0, 1))])
    assert sorted(format_poly(g) for g in gb.basis) == ["(1)*u1", "(1)*u2"]
    assert is_reduced(gb)


def test_unit_ideal():
    gb = buchberger([p_add(monomial((1, 1)), monomial((0, 0)), -1), monomial((2, 0))])
    assert gb.basis == [monomial((0, 0))]
    assert quotient_dimension(gb) == 0


def test_jacobian_ideal_n3():
    w = superpotential(3, Fraction(1, 10))
    gens = jacobian_ideal(w, 3)
    gb = buchberger(gens, "grevlex")
    assert is_reduced(gb)
    assert quotient_dimension(gb) == 8
    # u2 u3 + (3/10) u1^2 is the first generator
    g = p_add(monomial((0, 1, 1)), monomial((2, 0, 0), Fraction(3, 10)))
    assert g == gens[0]
    assert not normal_form(g, gb)
    assert quotient_dimension(buchberger(gens, "lex")) == 8


def test_normal_form_trivial():
    gb = buchberger([monomial((1, 0)), monomial((0, 1))])
    assert normal_form(monomial((1, 0)), gb) == {}
    assert normal_form(monomial((0, 0)), gb) == monomial((0, 0))
    assert quotient_dimension(gb) == 1


def test_not_zero_dimensional():
    gb = buchberger([monomial((1, 0))])
    with pytest.raises(NotZeroDimensional):
        standard_monomials(gb)


def test_milnor_number_by_hand():
    # w = u1^3 + u2^3: Jacobian ring spanned by u1^a u2^b with a, b < 2
    w = p_add(monomial((3, 0)), monomial((0, 3)))
    gb = buchberger(jacobian_ideal(w, 2))
    assert sorted(standard_monomials(gb)) == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_hh_ring():
    t0 = time.perf_counter()
    for n, nil in ((3, 2), (4, 3)):
        for r in (Fraction(1, 10), Fraction(1, 7), Fraction(1)):
            rep = hh_ring_check(n, r)
            assert rep.passed
            assert rep.quotient_dimension == (n - 1) ** n
            assert rep.alpha_top_vanishes and rep.alpha_below_nonzero
            assert all(rep.relations_hold)
            assert rep.nilpotency == nil
            assert rep.structure_constant == -n
    assert time.perf_counter() - t0 < 30


def test_hh_ring_lex_order():
    assert hh_ring_check(3, Fraction(1, 10), "lex").passed


def test_non_isolated():
    with pytest.raises(NotIsolated):
        hh_ring_check(3, 0)


def test_invariant_membership():
    assert invariant_membership((1, 1, 1), 3) == (True, 1, (0, 0, 0))
    assert invariant_membership((3, 0, 0), 3) == (True, 0, (1, 0, 0))
    assert invariant_membership((2, 1, 0), 3) == (False, None, None)
    assert invariant_membership((4, 1, 1), 3) == (True, 1, (1, 0, 0))


def test_format_poly():
    assert format_poly({}) == "0"
    assert format_poly(p_add(monomial((2, 0)), monomial((0, 1), Fraction(-1, 2)))) == "(1)*u1^2 + (-1/2)*u2"


terms = st.lists(
    st.tuples(st.tuples(st.integers(0, 2), st.integers(0, 2)), st.integers(-3, 3).filter(bool)),
    min_size=1, max_size=3)
ideals = st.lists(terms, min_size=1, max_size=3).map(
    lambda gens: [{e: Fraction(c) for e, c in g} for g in gens]).filter(lambda gens: any(gens))


@PROPS
@given(ideals, st.sampled_from(["grevlex", "lex"]))
def test_buchberger_reduced(gens, order):
    gb = buchberger(gens, order)
    assert is_reduced(gb)
    for g in gens:
        assert not normal_form(g, gb)


@PROPS
@given(ideals, terms, terms)
def test_normal_form_idempotent_and_linear(gens, f, g):
    gb = buchberger(gens)
    f = {e: Fraction(c) for e, c in f}
    g = {e: Fraction(c) for e, c in g}
    nf = normal_form(f, gb)
    assert normal_form(nf, gb) == nf
    assert normal_form(p_add(f, g), gb) == p_add(nf, normal_form(g, gb))
    # multiples of generators vanish
    assert not normal_form(p_mul(f, gens[0]), gb)
