from __future__ import annotations

import pytest

from series import DividedPowerSeries, SeriesError, TruncSeries, mobius_substitute, one_minus_product

VARS = ("z", "z0")


def series(coeffs, p=7, cutoff=4):
    return TruncSeries(VARS, p, cutoff, coeffs)


def test_construction_truncates_and_reduces():
    s = series({(0, 0): 8, (3, 2): 1, (1, 1): 7})
    assert s.as_dict() == {(0, 0): 1}
    with pytest.raises(SeriesError):
        series({(1,): 1})
    with pytest.raises(SeriesError):
        TruncSeries.monomial(VARS, 7, 4, {"w": 1})
    with pytest.raises(SeriesError):
        TruncSeries(VARS, 7, -1)


def test_inverse_square_of_one_minus_product():
    base = one_minus_product(VARS, 7, 4, "z", "z0")
    assert base.power(-2).as_dict() == {(0, 0): 1, (1, 1): 2, (2, 2): 3}
    assert base.power(-1) * base == base.one()
    assert base.power(3) * base.power(-3) == base.one()


def test_negative_power_needs_unit_constant_term():
    with pytest.raises(SeriesError):
        series({(1, 0): 1}).power(-1)


def test_non_unit_constant_term_inverts():
    s = series({(0, 0): 3, (1, 0): 1})
    assert s * s.power(-1) == s.one()


def test_arithmetic_across_rings_is_rejected():
    with pytest.raises(SeriesError):
        series({(0, 0): 1}) + TruncSeries(VARS, 5, 4, {(0, 0): 1})


def test_mobius_substitution():
    z0 = series({(0, 1): 1})
    assert mobius_substitute(z0, "z", "z0").as_dict() == {(0, 1): 1, (1, 2): 1}


def test_substitute_rejects_constant_terms():
    s = series({(0, 1): 1})
    with pytest.raises(SeriesError):
        s.substitute("z0", s.one())
    with pytest.raises(SeriesError):
        s.substitute("w", s.variable("z"))


def test_divided_power_exponentials_multiply():
    p, cutoff = 5, 4
    x = TruncSeries.monomial(("x", "z"), p, cutoff, {"x": 1})
    z = TruncSeries.monomial(("x", "z"), p, cutoff, {"z": 1})
    assert DividedPowerSeries.exp(x) * DividedPowerSeries.exp(z) == DividedPowerSeries.exp(x + z)
    with pytest.raises(SeriesError):
        DividedPowerSeries.exp(x.one())


def test_repr_lists_terms():
    assert repr(series({})) == "0"
    assert repr(series({(0, 0): 2, (1, 2): 3})) == "2 + 3*z*z0^2"
