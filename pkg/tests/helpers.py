"""Shared fixtures and oracles for the test suite."""

from fractions import Fraction

from hypothesis import strategies as st

from puiseuxmult.parser import parse_poly
from puiseuxmult.poly import BiPoly, UniPoly

x, y = BiPoly.x(), BiPoly.y()
u = UniPoly.x()

NEWTON_TEXT = "x*y*(y - x + x^2)^2*(y - 1 + x)*(x*y^3 - 1)"


def P(text):
    return parse_poly(text).poly


def U(text):
    return parse_poly(text, ("x",)).poly


small_fractions = st.builds(
    Fraction,
    st.integers(min_value=-6, max_value=6),
    st.integers(min_value=1, max_value=4),
)
nonzero_fractions = small_fractions.filter(lambda q: q != 0)


@st.composite
def bipolys(draw, max_deg=3, max_terms=4, nonzero=True):
    mons = draw(
        st.lists(
            st.tuples(st.integers(0, max_deg), st.integers(0, max_deg)).filter(lambda m: sum(m) <= max_deg),
            min_size=1 if nonzero else 0,
            max_size=max_terms,
            unique=True,
        )
    )
    return BiPoly({m: draw(nonzero_fractions) for m in mons})


@st.composite
def unipolys(draw, max_exp=8, max_terms=4):
    exps = draw(st.lists(st.integers(0, max_exp), min_size=1, max_size=max_terms, unique=True))
    return UniPoly({e: draw(nonzero_fractions) for e in exps})


def det(m):
    """Fraction-exact determinant by Gaussian elimination."""
    m = [list(r) for r in m]
    n = len(m)
    sign, out = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return sign * out
