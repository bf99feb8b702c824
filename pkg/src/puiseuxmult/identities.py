"""Sparse-polynomial lemmas and derivative identities.

* root multiplicities of sparse univariate polynomials (gcd chains),
* the number of positive-valuation roots of a shifted sparse polynomial,
* the integer constants expressing the k-th derivative of a power S^n,
* the polynomials R_k and R̄_{k,l} expressing derivatives of an implicit
  root through partial derivatives of the curve, built by running the
  A/B/C recurrences symbolically.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import TruncationExhausted
from .newton import Branch, expand_branches
from .poly import BiPoly, UniPoly, _trim, _uderiv, _ugcd, divides
from .series import PuiseuxSeries, eval_on_series
from .tower import certify_nonzero, coerce

__all__ = [
    "hajos_max_multiplicity",
    "shift_positive_count",
    "seq_partitions",
    "xi_table",
    "xi_constant",
    "derivative_of_power",
    "IndexedIntPoly",
    "build_R",
    "build_Rbar",
    "verify_root_derivative_identity",
    "sum_val_bound_check",
]


# ---------------------------------------------------------------------------
# univariate multiplicities
# ---------------------------------------------------------------------------

def hajos_max_multiplicity(f: UniPoly) -> int:
    """Largest multiplicity of a nonzero root of ``f`` (0 when there is none)."""
    if f.is_zero():
        raise ValueError("the zero polynomial has every point as a root")
    v = f.valuation
    g = 0
    for e in f.terms:
        g = math.gcd(g, e - v)
    if g == 0:
        return 0
    # f = x^v h(x^g), and x -> x^g is unramified away from 0
    h = UniPoly({(e - v) // g: c for e, c in f.items()}).to_dense()
    chain = h
    deriv = h
    k = 1
    while True:
        deriv = _uderiv(deriv)
        chain = _ugcd(chain, deriv)
        if len(_trim(chain)) <= 1:
            return k
        k += 1


def shift_positive_count(G: BiPoly, p) -> int:
    """Roots of G(a + x, b + y) in y with positive valuation, with multiplicity.

    Uses only the binomial sums G_{k,l} of the shifted coefficients: n is the
    least k for which some G_{k,l} is nonzero, and the count is the least l
    with G_{n,l} nonzero.  Exponents are never expanded densely.
    """
    a, b = (coerce(c) for c in p)
    if a == 0 or b == 0:
        raise ValueError("both coordinates must be nonzero")
    if G.is_zero():
        raise ValueError("zero polynomial")
    terms = list(G.items())
    apow, bpow = {}, {}

    def power(cache, base, e):
        if e not in cache:
            cache[e] = base**e
        return cache[e]

    k = 0
    while True:
        column = {}
        for (i, j), c in terms:
            if i >= k:
                v = comb(i, k) * c * power(apow, a, i - k)
                column[j] = column.get(j, 0) + v
        column = {j: c for j, c in column.items() if c != 0}
        if any(certify_nonzero(c) for c in column.values()):
            break
        k += 1
    l = 0
    while True:
        total = Fraction(0)
        for j, c in column.items():
            if j >= l:
                total = total + comb(j, l) * c * power(bpow, b, j - l)
        if certify_nonzero(total):
            return l
        l += 1


# ---------------------------------------------------------------------------
# derivatives of powers
# ---------------------------------------------------------------------------

def _trim_seq(s):
    s = list(s)
    while s and s[-1] == 0:
        s.pop()
    return tuple(s)


def seq_partitions(k: int):
    """All s = (s_1, s_2, ...) with sum i*s_i = k, as trimmed tuples."""
    out = []

    def rec(rest, part, largest):
        if rest == 0:
            s = [0] * (max(part) if part else 0)
            for i in part:
                s[i - 1] += 1
            out.append(tuple(s))
            return
        for i in range(min(rest, largest), 0, -1):
            rec(rest - i, part + [i], i)

    rec(k, [], k)
    return sorted(out)


@lru_cache(maxsize=None)
def xi_table(n: int, k: int):
    """{s: xi_{n,s}} for s in S_k, from the product rule applied k times."""
    if k == 0:
        return {(): 1}
    prev = xi_table(n, k - 1)
    out = {}
    for s, coef in prev.items():
        size = sum(s)
        # derivative hits S^(n - |s|)
        if n - size:
            t = list(s) + [0]
            t[0] += 1
            key = _trim_seq(t)
            out[key] = out.get(key, 0) + coef * (n - size)
        # derivative hits one factor (S^(l))
        for l, sl in enumerate(s, start=1):
            if sl:
                t = list(s) + [0]
                t[l - 1] -= 1
                t[l] += 1
                key = _trim_seq(t)
                out[key] = out.get(key, 0) + coef * sl
    return {s: c for s, c in out.items() if c}


def xi_constant(n: int, s) -> int:
    s = _trim_seq(s)
    k = sum(i * si for i, si in enumerate(s, start=1))
    if any(si < 0 for si in s):
        raise ValueError("sequence entries must be natural numbers")
    return xi_table(n, k).get(s, 0)


def derivative_of_power(S: PuiseuxSeries, n: int, k: int):
    """d^k/dx^k (S^n) computed directly and through the xi decomposition.

    Returns ``(direct, structured, terms)`` where ``terms`` lists
    ``(s, xi, series)`` for every nonzero constant.
    """
    if S.is_zero():
        raise ValueError("S must be nonzero")
    direct = (S**n).derivative(k)
    if not direct.terms and direct.trunc is not None:
        raise TruncationExhausted("truncation too low for the requested derivative")
    derivs = [S]
    for _ in range(k):
        derivs.append(derivs[-1].derivative())
    powers = {}

    def spow(j):
        if j not in powers:
            powers[j] = S**j
        return powers[j]

    structured = PuiseuxSeries.zero()
    terms = []
    for s, xi in sorted(xi_table(n, k).items()):
        part = spow(n - sum(s))
        for l, sl in enumerate(s, start=1):
            if sl:
                part = part * derivs[l] ** sl
        part = part * xi
        terms.append((s, xi, part))
        structured = structured + part
    return direct, structured, terms


# ---------------------------------------------------------------------------
# R_k and R-bar_{k,l}
# ---------------------------------------------------------------------------

def _mono(*pairs):
    d = {}
    for v, e in pairs:
        if e:
            d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_mul(m1, m2):
    return _mono(*m1, *m2)


def _padd(a, b, scale=1):
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = _mono_mul(m1, m2)
            v = out.get(m, 0) + c1 * c2
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _C(p, q):
    # C_{p,q} = x_{(p,q)} * x_{(0,1)}^(2p+q-2), defined for 2p + q >= 2
    return {_mono(((p, q), 1), ((0, 1), 2 * p + q - 2)): Fraction(1)}


@lru_cache(maxsize=None)
def _A(p):
    # S^(p) * F_y^(2p-1) = -C_{p,0} - sum_{l<p} binom(p,l) A_l B_{p-l,0}
    acc = _padd({}, _C(p, 0), -1)
    for l in range(1, p):
        acc = _padd(acc, _pmul(_A(l), _B(p - l, 0)), -comb(p, l))
    return acc


@lru_cache(maxsize=None)
def _B(p, q):
    # G^{(p,q)}(x, S) * F_y^(2p+q-1) where F = (y - S) G
    if p == 0:
        return {m: c / (q + 1) for m, c in _C(0, q + 1).items()}
    acc = dict(_C(p, q + 1))
    for l in range(1, p + 1):
        acc = _padd(acc, _pmul(_A(l), _B(p - l, q + 1)), comb(p, l))
    return {m: c / (q + 1) for m, c in acc.items()}


class IndexedIntPoly:
    """Integer polynomial in variables x[p,q], 1 <= p + q <= bound.

    ``terms`` maps a monomial (sorted tuple of ((p, q), exponent)) to an
    integer; the represented value is ``terms / denominator``.
    """

    __slots__ = ("bound", "terms", "denominator")

    def __init__(self, bound, terms, denominator=1):
        for c in terms.values():
            if not isinstance(c, int):
                raise TypeError("coefficients must be integers")
        for m in terms:
            for (p, q), _ in m:
                if not 1 <= p + q <= bound:
                    raise ValueError(f"variable x[{p},{q}] outside the index range")
        self.bound = bound
        self.terms = dict(terms)
        self.denominator = denominator

    @classmethod
    def from_rational(cls, bound, poly):
        den = 1
        for c in poly.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        terms = {m: int(c * den) for m, c in poly.items()}
        return cls(bound, terms, den)

    @property
    def variables(self):
        return tuple((p, s - p) for s in range(1, self.bound + 1) for p in range(s, -1, -1))

    @property
    def degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def used_variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def evaluate(self, values):
        """Substitute ``values[(p, q)]`` (numbers or series) and divide out."""
        total = None
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = values[v] ** e * t
            total = t if total is None else total + t
        if total is None:
            return 0
        return total * Fraction(1, self.denominator) if self.denominator != 1 else total

    def __eq__(self, other):
        if not isinstance(other, IndexedIntPoly):
            return NotImplemented
        return (self.bound, self.terms, self.denominator) == (other.bound, other.terms, other.denominator)

    def to_text(self):
        def key(item):
            m, _ = item
            return (-sum(e for _, e in m), m)

        parts = []
        for m, c in sorted(self.terms.items(), key=key):
            mono = "*".join(f"x[{p},{q}]" + (f"^{e}" if e > 1 else "") for (p, q), e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        text = parts[0] if parts else "0"
        for part in parts[1:]:
            text += " - " + part[1:] if part.startswith("-") else " + " + part
        if self.denominator != 1:
            text = f"({text})/{self.denominator}" if len(parts) > 1 else f"{text}/{self.denominator}"
        return text

    def __repr__(self):
        return f"IndexedIntPoly({self.to_text()})"

    __str__ = to_text


def build_R(k: int) -> IndexedIntPoly:
    """R_k with S^(k) F_y^(2k-1) = R_k(partials of F along the root)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out = IndexedIntPoly.from_rational(k, _A(k))
    if out.denominator != 1:
        raise ArithmeticError(f"R_{k} is not integral")
    if out.degree > 2 * k - 1:
        raise ArithmeticError(f"deg R_{k} = {out.degree} exceeds {2 * k - 1}")
    return out


def build_Rbar(k: int, l: int) -> IndexedIntPoly:
    """R̄_{k,l}: numerator with integer coefficients and its denominator."""
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k, l >= 0 with k + l >= 1")
    out = IndexedIntPoly.from_rational(k + l + 1, _B(k, l))
    if out.degree > 2 * k + l:
        raise ArithmeticError(f"deg R̄_{k},{l} = {out.degree} exceeds {2 * k + l}")
    return out


def verify_root_derivative_identity(F: BiPoly, branch, k: int) -> bool:
    """Check S^(k) * F_y(x,S)^(2k-1) == R_k(partials along S) up to truncation."""
    S = branch.series if isinstance(branch, Branch) else branch
    R = build_R(k)
    partials = {}
    for p, q in R.variables:
        partials[(p, q)] = eval_on_series(F.partial(p, q), 0, 0, S)
    lhs = S.derivative(k) * partials[(0, 1)] ** (2 * k - 1)
    rhs = R.evaluate(partials)
    if not isinstance(rhs, PuiseuxSeries):
        rhs = PuiseuxSeries.constant(rhs)
    diff = lhs - rhs
    if not lhs.terms and not lhs.is_exact:
        raise TruncationExhausted("branch truncation too low to test the identity")
    return not diff.terms


def sum_val_bound_check(F_irred: BiPoly, G: BiPoly, p, retries: int = 2):
    """Sum of val G(a+x, b+S_i) over positive-valuation roots S_i of F(a+x, b+y).

    Returns ``(sum, bound, ok)`` with bound = d(4d+1)t(t-1)/2 where d is the
    degree of ``F_irred`` and t the number of monomials of ``G``.
    Irreducibility of ``F_irred`` is the caller's responsibility.
    """
    from .multiplicity import _weighted_sum

    a, b = (coerce(c) for c in p)
    if a == 0 or b == 0:
        raise ValueError("both coordinates must be nonzero")
    if divides(F_irred, G):
        raise ValueError("G is divisible by F")
    d, t = F_irred.degree, G.t
    bound = Fraction(d * (4 * d + 1) * t * (t - 1), 2)
    Fb, Gb = F_irred.shift(a, b), G.shift(a, b)
    if not Fb.deg_y:
        return Fraction(0), bound, True
    order = d * max(G.degree, 1) + 1
    for _ in range(retries + 1):
        branches = expand_branches(Fb, order)
        total, _vals = _weighted_sum(branches, lambda S: eval_on_series(Gb, 0, 0, S).val())
        if total is not None:
            if total == math.inf:
                raise ValueError("G vanishes along a branch of F")
            return total, bound, total <= bound
        order *= 2
    raise TruncationExhausted("valuations undetermined after retries")
