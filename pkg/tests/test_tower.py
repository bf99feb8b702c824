from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puiseuxmult.tower import (
    BASE,
    Tower,
    TowerElement,
    ZeroDivisorSplit,
    adjoin_root,
    certify_nonzero,
    root_classes,
    split_evaluate,
    tower_arithmetic,
    tower_invert,
)

from helpers import small_fractions


W = adjoin_root([1, 1, 1])


def omega():
    return W


def test_rational_arithmetic():
    assert tower_arithmetic(Fraction(1, 2), Fraction(1, 3), "add") == Fraction(5, 6)
    assert tower_invert(Fraction(2, 3)) == Fraction(3, 2)
    with pytest.raises(ValueError):
        tower_arithmetic(1, 2, "div")


def test_omega_square_and_inverse():
    w = omega()
    assert isinstance(w, TowerElement)
    assert w * w == -w - 1
    assert tower_invert(w) == -w - 1
    assert w**3 == 1


def test_adjoin_strips_linear_factors():
    assert adjoin_root([-5, 1]) == 5
    assert adjoin_root([4, -4, 1]) == 2
    w = adjoin_root([-1, 0, 0, 1])
    assert w.tower.moduli_text() == ["z1^2 + z1 + 1"]


def test_adjoin_rejects_constants():
    with pytest.raises(ValueError):
        adjoin_root([3])


def test_root_classes_counts():
    classes = root_classes([-1, 0, 0, 1])
    assert sorted(cnt for _, cnt in classes) == [1, 2]


def test_modulus_vanishes_at_adjoined_root():
    for coeffs in ([2, 0, 1], [-2, 0, 0, 1], [1, 3, 0, 0, 1]):
        r = adjoin_root(coeffs)
        value = sum((c * r**k for k, c in enumerate(coeffs)), Fraction(0))
        assert value == 0


def test_zero_divisor_reports_factorization():
    level = Tower(BASE, (Fraction(-1), Fraction(0), Fraction(1)), "u")
    u = TowerElement(level, (Fraction(0), Fraction(1)))
    with pytest.raises(ZeroDivisorSplit) as info:
        tower_invert(u - 1)
    factors = sorted(info.value.factors)
    assert factors == sorted([(Fraction(-1), Fraction(1)), (Fraction(1), Fraction(1))])


def test_split_evaluate_branches():
    level = Tower(BASE, (Fraction(-1), Fraction(0), Fraction(1)), "u")
    u = TowerElement(level, (Fraction(0), Fraction(1)))
    results = split_evaluate(lambda a: certify_nonzero(a - 1), u)
    assert sorted(r for _, r in results) == [False, True]


def test_zero_inverse_errors():
    with pytest.raises(ZeroDivisionError):
        tower_invert(0)
    with pytest.raises(ZeroDivisionError):
        W / (W - W)


elements = st.tuples(small_fractions, small_fractions).map(lambda ab: ab[0] + ab[1] * omega())


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * 0 == 0
    if a != 0:
        assert a * tower_invert(a) == 1


@settings(max_examples=40, deadline=None)
@given(elements, elements.filter(lambda e: e != 0))
def test_no_false_zeros(a, b):
    assert (a * b == 0) == (a == 0)
