"""Truncated Puiseux series with exact precision bookkeeping.

A series stores a ramification index ``e``, a mapping from scaled exponents
``k`` (standing for ``x^(k/e)``) to nonzero coefficients, and a truncation
``trunc``: every term with scaled exponent ``>= trunc`` is unknown.  A
``trunc`` of ``None`` marks an exact, finite series.  Each operation computes
the largest truncation its inputs can guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import TruncationExhausted
from .poly import BiPoly, UniPoly
from .tower import TowerElement, certify_nonzero, coerce

__all__ = [
    "PLUS_INFINITY",
    "PuiseuxSeries",
    "TruncatedValue",
    "series_val",
    "series_arithmetic",
    "series_derivative",
    "eval_on_series",
    "wronskian",
]

PLUS_INFINITY = math.inf


@dataclass(frozen=True)
class TruncatedValue:
    """A valuation; ``exact`` is False when truncation may hide the true value.

    For an inexact value, ``value`` is a lower bound (the truncation point).
    """

    value: Fraction | float
    exact: bool

    @property
    def is_infinite(self):
        return self.value == PLUS_INFINITY


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _exp_to_text(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class PuiseuxSeries:
    __slots__ = ("e", "terms", "trunc")

    def __init__(self, terms=None, e=1, trunc=None):
        if not isinstance(e, int) or e < 1:
            raise ValueError("ramification index must be a positive integer")
        clean = {}
        if terms:
            for k, c in terms.items():
                if trunc is not None and k >= trunc:
                    continue
                c = coerce(c)
                if c != 0:
                    clean[int(k)] = c
        g = e
        for k in clean:
            g = math.gcd(g, k)
            if g == 1:
                break
        if trunc is not None and g > 1:
            g = math.gcd(g, trunc)
        if g > 1:
            clean = {k // g: c for k, c in clean.items()}
            e //= g
            if trunc is not None:
                trunc //= g
        self.e = e
        self.terms = clean
        self.trunc = trunc

    # -- constructors
    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def unknown(cls, order):
        """No known terms; everything from ``x^order`` on is undetermined."""
        order = Fraction(order)
        return cls({}, order.denominator, order.numerator)

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def monomial(cls, c, exponent):
        exponent = Fraction(exponent)
        return cls({exponent.numerator: c}, exponent.denominator)

    @classmethod
    def from_exponents(cls, terms, trunc=None):
        """Build from ``{exponent: coefficient}`` with rational exponents."""
        exps = [Fraction(k) for k in terms]
        if trunc is not None:
            trunc = Fraction(trunc)
            exps.append(trunc)
        e = reduce(_lcm, (q.denominator for q in exps), 1)
        scaled = {int(Fraction(k) * e): c for k, c in terms.items()}
        return cls(scaled, e, None if trunc is None else int(trunc * e))

    @classmethod
    def from_poly(cls, f: UniPoly):
        return cls(dict(f.items()))

    # -- inspection
    @property
    def is_exact(self):
        return self.trunc is None

    def is_zero(self):
        """True only for the canonical (exact) zero series."""
        return not self.terms and self.trunc is None

    @property
    def precision(self):
        """Exponent from which terms are unknown (``inf`` when exact)."""
        return PLUS_INFINITY if self.trunc is None else Fraction(self.trunc, self.e)

    def items(self):
        """(rational exponent, coefficient) pairs in increasing order."""
        return [(Fraction(k, self.e), self.terms[k]) for k in sorted(self.terms)]

    def coeff(self, exponent):
        q = Fraction(exponent) * self.e
        if q.denominator != 1:
            return Fraction(0)
        return self.terms.get(q.numerator, Fraction(0))

    def coefficients_iter(self):
        return iter(self.terms.values())

    def map_coefficients(self, fn):
        return PuiseuxSeries({k: fn(c) for k, c in self.terms.items()}, self.e, self.trunc)

    def val(self) -> TruncatedValue:
        if self.terms:
            k = min(self.terms)
            certify_nonzero(self.terms[k])
            return TruncatedValue(Fraction(k, self.e), True)
        if self.trunc is None:
            return TruncatedValue(PLUS_INFINITY, True)
        return TruncatedValue(Fraction(self.trunc, self.e), False)

    def _vbound(self):
        """Scaled lower bound on the valuation (structural, always sound)."""
        lo = min(self.terms) if self.terms else PLUS_INFINITY
        if self.trunc is not None:
            lo = min(lo, self.trunc)
        return lo

    def valuation_bound(self):
        v = self._vbound()
        return v if v == PLUS_INFINITY else Fraction(v, self.e)

    def rescaled(self, e):
        """Terms and truncation expressed over ramification ``e`` (a multiple)."""
        if e % self.e:
            raise ValueError("target ramification must be a multiple")
        f = e // self.e
        terms = {k * f: c for k, c in self.terms.items()}
        return terms, None if self.trunc is None else self.trunc * f

    def truncate(self, order):
        """Forget every term with exponent >= ``order``."""
        order = Fraction(order)
        e = _lcm(self.e, order.denominator)
        terms, trunc = self.rescaled(e)
        t = int(order * e)
        if trunc is not None:
            t = min(t, trunc)
        return PuiseuxSeries(terms, e, t)

    # -- arithmetic
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            other = PuiseuxSeries.constant(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.e == other.e and self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.e, self.trunc, frozenset(self.terms.items())))

    def __neg__(self):
        return PuiseuxSeries({k: -c for k, c in self.terms.items()}, self.e, self.trunc)

    def __add__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return other
        e = _lcm(self.e, other.e)
        a, ta = self.rescaled(e)
        b, tb = other.rescaled(e)
        trunc = ta if tb is None else tb if ta is None else min(ta, tb)
        out = dict(a)
        for k, c in b.items():
            out[k] = out[k] + c if k in out else c
        return PuiseuxSeries(out, e, trunc)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_series(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, TowerElement)):
            return PuiseuxSeries({k: c * other for k, c in self.terms.items()}, self.e, self.trunc)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        e = _lcm(self.e, other.e)
        a, ta = self.rescaled(e)
        b, tb = other.rescaled(e)
        va = min(min(a, default=PLUS_INFINITY), PLUS_INFINITY if ta is None else ta)
        vb = min(min(b, default=PLUS_INFINITY), PLUS_INFINITY if tb is None else tb)
        lim = min(
            va + (PLUS_INFINITY if tb is None else tb),
            vb + (PLUS_INFINITY if ta is None else ta),
        )
        trunc = None if lim == PLUS_INFINITY else int(lim)
        out = {}
        bitems = sorted(b.items())
        for k1, c1 in a.items():
            for k2, c2 in bitems:
                k = k1 + k2
                if trunc is not None and k >= trunc:
                    break
                v = c1 * c2
                out[k] = out[k] + v if k in out else v
        return PuiseuxSeries(out, e, trunc)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = PuiseuxSeries.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift_exponent(self, r):
        """Multiply by ``x^r``."""
        return self * PuiseuxSeries.monomial(1, r)

    def derivative(self, n=1):
        s = self
        for _ in range(n):
            e = s.e
            terms = {k - e: c * Fraction(k, e) for k, c in s.terms.items() if k}
            s = PuiseuxSeries(terms, e, None if s.trunc is None else s.trunc - e)
        return s

    # -- rendering
    def to_text(self, var="x"):
        parts = []
        for q, c in self.items():
            if isinstance(c, TowerElement):
                ct = c.to_text()
                ct = f"({ct})" if " " in ct.lstrip("-") else ct
            else:
                ct = _exp_to_text(c)
            if q == 0:
                parts.append(ct)
                continue
            mono = var if q == 1 else f"{var}^({_exp_to_text(q)})" if q.denominator != 1 or q < 0 else f"{var}^{q}"
            parts.append(mono if ct == "1" else "-" + mono if ct == "-1" else f"{ct}*{mono}")
        if self.trunc is not None:
            q = Fraction(self.trunc, self.e)
            parts.append(f"O({var}^{_exp_to_text(q) if q.denominator == 1 and q >= 0 else '(' + _exp_to_text(q) + ')'})")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"PuiseuxSeries({self.to_text()})"

    __str__ = to_text


def _as_series(o):
    if isinstance(o, PuiseuxSeries):
        return o
    if isinstance(o, (int, Fraction, TowerElement)):
        return PuiseuxSeries.constant(o)
    return NotImplemented


def series_val(S: PuiseuxSeries) -> TruncatedValue:
    return S.val()


def series_arithmetic(S: PuiseuxSeries, T: PuiseuxSeries, op: str) -> PuiseuxSeries:
    if op == "add":
        return S + T
    if op == "sub":
        return S - T
    if op == "mul":
        return S * T
    raise ValueError(f"unknown operation {op!r}")


def series_derivative(S: PuiseuxSeries, n: int = 1) -> PuiseuxSeries:
    return S.derivative(n)


def _powers(S, exps):
    """{j: S^j} for the requested exponents."""
    exps = sorted(set(exps))
    out = {}
    if not exps:
        return out
    top = exps[-1]
    if top <= 4 * len(exps) + 8:
        acc = PuiseuxSeries.constant(1)
        wanted = set(exps)
        for j in range(top + 1):
            if j in wanted:
                out[j] = acc
            if j < top:
                acc = acc * S
        return out
    squares = [S]
    while (1 << len(squares)) <= top:
        squares.append(squares[-1] * squares[-1])
    for j in exps:
        acc = PuiseuxSeries.constant(1)
        bit = 0
        n = j
        while n:
            if n & 1:
                acc = acc * squares[bit]
            n >>= 1
            bit += 1
        out[j] = acc
    return out


def eval_on_series(F: BiPoly, a, b, S: PuiseuxSeries) -> PuiseuxSeries:
    """The series F(a + x, b + S(x)).

    When the truncation of ``S`` leaves no determinable term the result has
    no terms and a finite truncation (an inexact zero); callers inspect
    ``val().exact``.
    """
    a, b = coerce(a), coerce(b)
    G = F if (a == 0 and b == 0) else F.shift(a, b)
    by_j = {}
    for (i, j), c in G.items():
        by_j.setdefault(j, {})[i] = c
    powers = _powers(S, by_j)
    total = PuiseuxSeries.zero()
    for j, xs in by_j.items():
        total = total + powers[j] * PuiseuxSeries(xs)
    return total


def wronskian(series) -> PuiseuxSeries:
    """det[S_j^(i)] for i, j < n, by memoized Laplace expansion along rows."""
    series = list(series)
    n = len(series)
    if n == 0:
        raise ValueError("empty Wronskian")
    rows = [series]
    for _ in range(1, n):
        rows.append([s.derivative() for s in rows[-1]])
    for s in rows[-1]:
        if not s.terms and s.trunc is not None:
            raise TruncationExhausted("series too coarsely truncated for the Wronskian")
    memo = {}

    def minor(row, cols):
        # determinant of rows[row:] restricted to the column tuple ``cols``
        if row == n - 1:
            return rows[row][cols[0]]
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = PuiseuxSeries.zero()
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if entry.is_zero():
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))
