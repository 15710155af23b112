from __future__ import annotations

import itertools

import pytest

from hopf import (HElement, HMonomial, HParseError, HTensor, act_on_laurent, coproduct, coproduct_left,
                  coproduct_right, counit, counit_left, counit_right, format_element, grade, parse_element,
                  product, sigma, theta)
from modp import LaurentPoly, binom_mod


def monomials(bound, p):
    return [HElement.monomial(p, i, j, k) for i, j, k in itertools.product(range(bound + 1), repeat=3)]


def test_reordering_e_past_d():
    assert format_element(parse_element("E^(1) D^(1)", 7)) == "D^(1) E^(1) - H^(1)"


def test_divided_powers_multiply_by_binomials():
    assert format_element(parse_element("E^(2) E^(3)", 7)) == "3 E^(5)"
    assert parse_element("D^(1) D^(2)", 3).is_zero()
    assert parse_element("H^(1) H^(1)", 7) == parse_element("H^(1) + 2 H^(2)", 7)


def test_parse_accepts_scalars_and_bare_exponents():
    assert parse_element("2 * D^2 - D^(2) + 1", 5) == parse_element("D^(2) + 1", 5)
    assert format_element(parse_element("E", 5)) == "E^(1)"
    assert format_element(parse_element("5 H^(1)", 5)) == "0"


@pytest.mark.parametrize("text", ["", "E^(1) +", "X", "D^(1) E^(-1)"])
def test_parse_errors(text):
    with pytest.raises(HParseError):
        parse_element(text, 5)


def test_format_uses_symmetric_residues():
    assert format_element(HElement.monomial(7, i=1, coeff=6)) == "-D^(1)"
    assert format_element(HElement(7, {(0, 0, 0): 4, (0, 0, 1): 1})) == "E^(1) - 3"


@pytest.mark.parametrize("p", [3, 5])
def test_product_is_associative(p):
    basis = monomials(1, p)
    for a, b, c in itertools.product(basis, repeat=3):
        assert (a * b) * c == a * (b * c)


def test_coproduct_of_divided_power():
    p = 5
    d2 = HElement.generator("D", 2, p)
    expected = HTensor(p, {(HMonomial(2, 0, 0), HMonomial(0, 0, 0)): 1,
                           (HMonomial(1, 0, 0), HMonomial(1, 0, 0)): 1,
                           (HMonomial(0, 0, 0), HMonomial(2, 0, 0)): 1})
    assert coproduct(d2) == expected


def test_coalgebra_axioms_on_small_monomials():
    p = 5
    for a in monomials(2, p):
        assert coproduct_left(a) == coproduct_right(a)
        assert counit_left(coproduct(a)) == a
        assert counit_right(coproduct(a)) == a


def test_coproduct_is_multiplicative():
    p = 5
    generators = [HElement.generator(kind, r, p) for kind in "DHE" for r in (1, 2)]
    for a, b in itertools.product(generators, repeat=2):
        assert coproduct(a * b) == coproduct(a) * coproduct(b)


def test_counit():
    assert counit(parse_element("3 + D^(1)", 7)) == 3
    assert counit(parse_element("E^(1) D^(1)", 7)) == 0


def test_theta_and_sigma():
    p = 5
    assert theta(HElement.monomial(p, 1, 2, 3)) == HElement.monomial(p, 3, 2, 1)
    assert sigma(HElement.generator("H", 1, p)) == HElement.generator("H", 1, p).scale(-1)
    assert sigma(HElement.generator("D", 2, p)) == HElement.generator("E", 2, p)
    for a in monomials(1, p):
        assert theta(theta(a)) == a
        assert sigma(sigma(a)) == a
        for b in monomials(1, p):
            assert theta(a * b) == theta(b) * theta(a)
            assert sigma(a * b) == sigma(a) * sigma(b)


def test_grade():
    assert grade(HElement.monomial(7, i=2, k=1)) == 1
    assert grade(parse_element("D^(1) + E^(1)", 7)) == "mixed"
    assert grade(HElement(7)) == 0
    assert grade(product(HElement.generator("D", 1, 3), HElement.generator("D", 2, 3))) == 0


def test_action_on_laurent_monomials():
    p = 7
    x = lambda m: LaurentPoly.monomial(m, p)
    assert act_on_laurent(parse_element("D^(1)", p), x(3)) == x(2).scale(-3)
    assert act_on_laurent(parse_element("E^(1)", p), x(2)) == x(3).scale(-2)
    assert act_on_laurent(parse_element("H^(2)", p), x(-2)) == x(-2).scale(binom_mod(-4, 2, p))
    assert act_on_laurent(HElement.one(p), x(5)) == x(5)


def test_laurent_action_is_a_module_action():
    p = 5
    f = LaurentPoly(p, {-2: 1, 1: 3, 3: 2})
    for a in monomials(1, p):
        for b in monomials(1, p):
            assert act_on_laurent(a * b, f) == act_on_laurent(a, act_on_laurent(b, f))
