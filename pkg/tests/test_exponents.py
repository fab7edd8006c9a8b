import math
from fractions import Fraction

import pytest

from hardytree import Exponents, RegimeError, conjugate, parse_exponent


@pytest.mark.parametrize("text, expected", [
    ("2", Fraction(2)), ("1.5", Fraction(3, 2)), ("3/2", Fraction(3, 2)),
    ("inf", math.inf), (" INF ", math.inf), (1, Fraction(1)), (2.5, Fraction(5, 2)),
])
def test_parse_exponent(text, expected):
    assert parse_exponent(text) == expected


@pytest.mark.parametrize("bad", ["0.5", "-1", "abc", "1/0", float("nan"), True, None, 0])
def test_parse_exponent_rejects(bad):
    with pytest.raises(RegimeError):
        parse_exponent(bad)


@pytest.mark.parametrize("r, rc", [(1, math.inf), (math.inf, 1.0), (2, 2.0), (3, 1.5), ("3/2", 3.0)])
def test_conjugate(r, rc):
    assert conjugate(r) == pytest.approx(rc)


def test_regime_is_decided_exactly():
    assert Exponents("3/2", 1.5).regime == "p=q"
    assert Exponents(2, 3).regime == "p<q"
    assert Exponents("inf", 1).regime == "p>q"


def test_dual_and_mixing_exponent():
    e = Exponents("3/2", 3)
    assert (e.dual.p, e.dual.q) == (1.5, 3.0)
    assert Exponents(1, "inf").dual.p == 1.0 and Exponents(1, "inf").dual.q == math.inf
    assert Exponents(3, 2).mixing_exponent() == pytest.approx(6.0)
    assert Exponents("inf", 2).mixing_exponent() == 2.0
    with pytest.raises(RegimeError):
        Exponents(2, 3).mixing_exponent()
