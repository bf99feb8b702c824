from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from puiseuxmult.poly import (
    AffineMap,
    BiPoly,
    UniPoly,
    bipoly_arithmetic,
    compose_affine,
    divides,
    exact_divide,
    gcd_bivariate,
    partial_derivative,
    resultant_y,
    squarefree_decomposition_y,
)

from helpers import P, bipolys, det, nonzero_fractions, small_fractions, x, y


def sylvester_at(F, G, x0):
    """Independent Sylvester determinant in y of F(x0, y), G(x0, y)."""
    def coeffs(H):
        n = H.deg_y
        return [H.y_coeffs().get(k, UniPoly())(x0) if k in H.y_coeffs() else Fraction(0)
                for k in range(n, -1, -1)]

    f, g = coeffs(F), coeffs(G)
    m, n = len(f) - 1, len(g) - 1
    rows = []
    for i in range(n):
        rows.append([Fraction(0)] * i + f + [Fraction(0)] * (n - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + g + [Fraction(0)] * (m - 1 - i))
    return det(rows)


def test_arithmetic_examples():
    assert (x - y) * (x + y) == x**2 - y**2
    F = P("x^3*y - 2*y + 1")
    assert (F + (-F)).is_zero()
    assert (y - x + x**2) ** 2 == y**2 - 2 * x * y + 2 * x**2 * y + x**2 - 2 * x**3 + x**4
    assert bipoly_arithmetic(x, y, "mul") == x * y


def test_degree_and_terms():
    F = P("x^2*y + 3*x - 7")
    assert (F.degree, F.t) == (3, 3)
    assert BiPoly().degree is None


def test_partials():
    assert partial_derivative(y - x**2, 0, 1) == BiPoly.constant(1)
    assert (x * y**2).partial(1, 0).partial(0, 1) == 2 * y
    assert (x * y**2).partial(0, 1).partial(1, 0) == 2 * y
    assert partial_derivative(x**3 * y, 2, 0) == 6 * x * y


def test_affine_examples():
    F = x**2 - y**2
    assert compose_affine(F, AffineMap.translate(1, 1)) == P("2*x + x^2 - 2*y - y^2")
    assert compose_affine(F, AffineMap.identity()) == F
    assert compose_affine(y, AffineMap.swap()) == x


def test_huge_sparse_exponents():
    F = BiPoly({(10**6, 0): 1, (0, 1): -1})
    G = F * F
    assert G.t == 3 and G.degree == 2 * 10**6
    assert F.evaluate(1, 1) == 0


def test_gcd_examples():
    F1, F2 = y - x, y + x + 1
    g = gcd_bivariate(x * F1, x * F2)
    assert g.degree == 1 and divides(x, g) and divides(g, x)
    assert gcd_bivariate(y - x, y + x).degree == 0
    g = gcd_bivariate((y - x) ** 2 * (y + 1), (y - x) * (y - 1))
    assert divides(g, y - x) and divides(y - x, g)


def test_resultant_examples():
    assert resultant_y(y - x**2, y) == UniPoly({2: 1})
    r = resultant_y(y - 3, y - 5)
    assert r in (UniPoly.constant(2), UniPoly.constant(-2))
    with pytest.raises(ValueError):
        resultant_y(x, y)


def test_squarefree_decomposition():
    F = (y - x) ** 2 * (y + 1) * x
    content, factors = squarefree_decomposition_y(F)
    rebuilt = BiPoly({(e, 0): c for e, c in content.items()})
    for Pk, k in factors:
        rebuilt = rebuilt * Pk**k
    assert divides(rebuilt, F) and divides(F, rebuilt)
    assert sorted(k for _, k in factors) == [1, 2]


with_y = bipolys(max_deg=3, max_terms=4).filter(lambda F: F.deg_y > 0)


@settings(max_examples=60, deadline=None)
@given(with_y, with_y, small_fractions)
def test_resultant_matches_sylvester(F, G, x0):
    assume(F.y_coeffs()[F.deg_y](x0) != 0 or G.y_coeffs()[G.deg_y](x0) != 0)
    assert resultant_y(F, G)(x0) == sylvester_at(F, G, x0)


@settings(max_examples=60, deadline=None)
@given(bipolys(), bipolys(), bipolys())
def test_gcd_divides_and_common_factor(A, B, H):
    assume(H.degree > 0)
    F, G = A * H, B * H
    g = gcd_bivariate(F, G)
    assert exact_divide(F, g) * g == F
    assert exact_divide(G, g) * g == G
    assert divides(H, g)


@settings(max_examples=40, deadline=None)
@given(with_y, with_y)
def test_resultant_vanishes_iff_common_factor(F, G):
    common = gcd_bivariate(F, G).deg_y > 0
    assert resultant_y(F, G).is_zero() == common


@settings(max_examples=60, deadline=None)
@given(bipolys(), bipolys())
def test_degree_laws(F, G):
    assert (F * G).degree == F.degree + G.degree
    assert (F * G).t <= F.t * G.t


invertible = st.tuples(small_fractions, small_fractions, small_fractions, small_fractions,
                       small_fractions, small_fractions).filter(lambda m: m[0] * m[3] != m[1] * m[2])


@settings(max_examples=40, deadline=None)
@given(bipolys(), invertible)
def test_affine_roundtrip(F, m):
    L = AffineMap(((m[0], m[1]), (m[2], m[3])), (m[4], m[5]))
    assert compose_affine(compose_affine(F, L), L.inverse()) == F


@settings(max_examples=40, deadline=None)
@given(bipolys(), nonzero_fractions, nonzero_fractions)
def test_shift_matches_binomial_sums(F, a, b):
    # coefficients of F(a + x, b + y) are sum_{i>=k, j>=l} C(i,k) C(j,l) a^(i-k) b^(j-l) c_ij
    from math import comb

    shifted = F.shift(a, b)
    for k in range(F.degree + 1):
        for l in range(F.degree + 1 - k):
            expected = sum(
                (comb(i, k) * comb(j, l) * a ** (i - k) * b ** (j - l) * c
                 for (i, j), c in F.items() if i >= k and j >= l),
                Fraction(0),
            )
            assert shifted.coeff(k, l) == expected
