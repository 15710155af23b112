from __future__ import annotations

from math import comb

import pytest

from modp import (FieldError, FpScalar, LaurentPoly, PrimeField, binom_int, binom_mod, check_prime, hasse_deriv,
                  lucas_binomial, symmetric_residue)


@pytest.mark.parametrize("p", [3, 5, 7, 2147483647])
def test_check_prime_accepts_odd_primes(p):
    assert check_prime(p) == p


@pytest.mark.parametrize("p", [2, 1, 0, -3, 9, 2**31, True])
def test_check_prime_rejects_bad_moduli(p):
    with pytest.raises(FieldError):
        check_prime(p)


def test_binomials_with_negative_upper_index():
    assert binom_int(-1, 3) == -1
    assert binom_int(-2, 3) == -4
    assert binom_int(5, 7) == 0
    assert binom_int(4, -1) == 0
    assert binom_mod(10, 5, 5) == 2
    assert binom_mod(-2, 3, 7) == 3


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_lucas_agrees_with_factorial_binomial(p):
    for m in range(0, 201):
        for k in range(0, m + 1):
            expected = comb(m, k) % p
            assert binom_mod(m, k, p) == expected
            assert lucas_binomial(m, k, p) == expected


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_prime_power_binomial_vanishes_only_on_multiples_of_p(p):
    for k in range(1, 11):
        for t in range(0, 4):
            q = p**t
            assert (lucas_binomial(k * q, q, p) != 0) == (k % p != 0)
            assert (binom_mod(k * q, q, p) != 0) == (k % p != 0)


def test_lucas_rejects_negative_arguments():
    with pytest.raises(FieldError):
        lucas_binomial(-1, 2, 5)


def test_scalar_arithmetic():
    a = FpScalar(3, 7)
    assert a * FpScalar(5, 7) == 1
    assert a.inverse().value == 5
    assert (a / 3) == 1
    assert FpScalar(6, 7).symmetric() == -1
    assert (2 - a) == FpScalar(6, 7)
    with pytest.raises(FieldError):
        a + FpScalar(1, 5)
    with pytest.raises(ZeroDivisionError):
        FpScalar(7, 7).inverse()


def test_symmetric_residue():
    assert symmetric_residue(3, 5) == -2
    assert symmetric_residue(2, 5) == 2
    assert symmetric_residue(-1, 7) == -1


def test_prime_field_half_and_binomial():
    field = PrimeField(7)
    assert field.half == 4
    assert field.half * 2 % 7 == 1
    assert field.binom(-2, 3) == 3
    with pytest.raises(FieldError):
        PrimeField(15)


def test_laurent_product_drops_zero_terms():
    p = 3
    x = LaurentPoly.monomial(1, p)
    inv = LaurentPoly.monomial(-1, p)
    square = (x + inv) * (x + inv)
    assert square == LaurentPoly(p, {2: 1, 0: 2, -2: 1})
    assert (x - x).is_zero()
    assert LaurentPoly(p, {4: 3}).is_zero()


def test_hasse_derivative():
    p = 7
    assert hasse_deriv(2, LaurentPoly.monomial(5, p)) == LaurentPoly.monomial(3, p, 3)
    assert hasse_deriv(2, LaurentPoly.monomial(-1, p)) == LaurentPoly.monomial(-3, p)
    # x^7 is a p-th power: its first derivative vanishes, the seventh does not
    assert hasse_deriv(1, LaurentPoly.monomial(7, p)).is_zero()
    assert hasse_deriv(7, LaurentPoly.monomial(7, p)) == LaurentPoly.one(p)
    with pytest.raises(FieldError):
        hasse_deriv(-1, LaurentPoly.one(p))


def test_hasse_composition():
    p = 5
    f = LaurentPoly(p, {-3: 1, 2: 4, 6: 2})
    for a in range(4):
        for b in range(4):
            assert hasse_deriv(a, hasse_deriv(b, f)) == hasse_deriv(a + b, f).scale(binom_mod(a + b, b, p))


def test_scalar_hash_matches_its_residue():
    assert FpScalar(8, 5) == 3
    assert FpScalar(8, 5) != 8
    assert hash(FpScalar(8, 5)) == hash(3)
    assert {FpScalar(8, 5), 3} == {3}
    assert {3: "a"}[FpScalar(3, 5)] == "a"
