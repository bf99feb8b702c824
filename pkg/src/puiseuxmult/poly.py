"""Sparse univariate and bivariate polynomials over tower coefficients.

Polynomials are immutable mappings from exponents to nonzero coefficients.
Coefficients are ``Fraction`` or :class:`~puiseuxmult.tower.TowerElement`.
The gcd, squarefree and resultant routines convert to a dense recursive form
(polynomials in ``y`` whose coefficients are dense polynomials in ``x``).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .tower import TowerElement, certify_nonzero, coerce, join_towers, tower_of

__all__ = [
    "UniPoly",
    "BiPoly",
    "AffineMap",
    "bipoly_arithmetic",
    "partial_derivative",
    "compose_affine",
    "gcd_bivariate",
    "resultant_y",
    "exact_divide",
    "squarefree_decomposition_y",
    "sylvester_resultant_at",
]

_MAX_EXP = 2**63 - 1


def _check_exp(e):
    if not isinstance(e, int) or isinstance(e, bool):
        raise TypeError(f"exponent must be an int, got {e!r}")
    if e < 0:
        raise ValueError("negative exponent")
    if e > _MAX_EXP:
        raise OverflowError("exponent exceeds 64-bit range")
    return e


def _coeff_text(c):
    if isinstance(c, TowerElement):
        text = c.to_text()
        return text, (" " in text.lstrip("-"))
    if c.denominator == 1:
        return str(c.numerator), False
    return f"{c.numerator}/{c.denominator}", False


def _render(items, names):
    """items: list of (exponent tuple, coefficient), already ordered."""
    parts = []
    for exps, c in items:
        mono = "*".join(
            v if e == 1 else f"{v}^{e}" for v, e in zip(names, exps) if e
        )
        text, compound = _coeff_text(c)
        if compound:
            text = f"({text})"
        if not mono:
            parts.append(text)
        elif text == "1":
            parts.append(mono)
        elif text == "-1":
            parts.append("-" + mono)
        else:
            parts.append(f"{text}*{mono}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


class UniPoly:
    """Sparse univariate polynomial: exponent -> nonzero coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                c = coerce(c)
                if c != 0:
                    clean[_check_exp(e)] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def x(cls):
        return cls({1: 1})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def from_dense(cls, coeffs):
        return cls({i: c for i, c in enumerate(coeffs) if c != 0})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficients_iter(self):
        return iter(self._terms.values())

    def coeff(self, e):
        return self._terms.get(e, Fraction(0))

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self):
        return max(self._terms) if self._terms else None

    @property
    def t(self):
        return len(self._terms)

    @property
    def valuation(self):
        """Lowest exponent (None for the zero polynomial)."""
        return min(self._terms) if self._terms else None

    def leading_coefficient(self):
        return self._terms[self.degree]

    def to_dense(self):
        if not self._terms:
            return []
        out = [Fraction(0)] * (self.degree + 1)
        for e, c in self._terms.items():
            out[e] = c
        return out

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, TowerElement)):
            return self == UniPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _as_uni(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v == 0:
                out.pop(e, None)
            else:
                out[e] = v
        return UniPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_uni(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_uni(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                v = out.get(e, 0) + c1 * c2
                if v == 0:
                    out.pop(e, None)
                else:
                    out[e] = v
        return UniPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = UniPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self, n=1):
        out = {}
        for e, c in self._terms.items():
            if e >= n:
                f = 1
                for k in range(n):
                    f *= e - k
                out[e - n] = c * f
        return UniPoly(out)

    def theta(self, n=1):
        """(x d/dx)^n applied to the polynomial; keeps the support."""
        return UniPoly({e: c * e**n for e, c in self._terms.items()})

    def __call__(self, a):
        a = coerce(a)
        total = Fraction(0)
        for e, c in self._terms.items():
            total = total + c * a**e
        return total

    def map_coefficients(self, fn):
        return UniPoly({e: fn(c) for e, c in self._terms.items()})

    def to_text(self, var="x"):
        items = sorted(self._terms.items(), reverse=True)
        return _render([((e,), c) for e, c in items], (var,))

    def __repr__(self):
        return f"UniPoly({self.to_text()})"

    __str__ = to_text


def _as_uni(o):
    if isinstance(o, UniPoly):
        return o
    if isinstance(o, (int, Fraction, TowerElement)):
        return UniPoly.constant(o)
    return NotImplemented


class BiPoly:
    """Sparse bivariate polynomial: (x-exponent, y-exponent) -> coefficient."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for (i, j), c in dict(terms).items():
                c = coerce(c)
                if c != 0:
                    clean[(_check_exp(i), _check_exp(j))] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def x(cls):
        return cls({(1, 0): 1})

    @classmethod
    def y(cls):
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c, i, j):
        return cls({(i, j): c})

    @classmethod
    def from_y_coeffs(cls, coeffs):
        """Build from a mapping y-exponent -> UniPoly in x."""
        out = {}
        for j, u in coeffs.items():
            for i, c in u.items():
                out[(i, j)] = c
        return cls(out)

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficients_iter(self):
        return iter(self._terms.values())

    def coeff(self, i, j):
        return self._terms.get((i, j), Fraction(0))

    @property
    def support(self):
        return frozenset(self._terms)

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self):
        """Total degree; None for the zero polynomial."""
        return max(i + j for i, j in self._terms) if self._terms else None

    @property
    def t(self):
        return len(self._terms)

    @property
    def deg_x(self):
        return max(i for i, _ in self._terms) if self._terms else None

    @property
    def deg_y(self):
        return max(j for _, j in self._terms) if self._terms else None

    def x_divisibility(self):
        """Largest m with x^m dividing the polynomial."""
        if not self._terms:
            raise ValueError("zero polynomial is divisible by every power of x")
        return min(i for i, _ in self._terms)

    def y_coeffs(self):
        """Mapping y-exponent -> UniPoly in x (only nonzero entries)."""
        buckets = {}
        for (i, j), c in self._terms.items():
            buckets.setdefault(j, {})[i] = c
        return {j: UniPoly._raw(d) for j, d in buckets.items()}

    def tower(self):
        return join_towers(*(tower_of(c) for c in self._terms.values()))

    def is_rational(self):
        return all(not isinstance(c, TowerElement) for c in self._terms.values())

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, TowerElement)):
            return self == BiPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        other = _as_bi(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = _as_bi(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_bi(other)
        if other is NotImplemented:
            return other
        out = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                k = (i1 + i2, j1 + j2)
                v = out.get(k, 0) + c1 * c2
                if v == 0:
                    out.pop(k, None)
                else:
                    out[k] = v
        for i, j in out:
            _check_exp(i)
            _check_exp(j)
        return BiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = BiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def partial(self, p, q):
        """The derivative d^(p+q) / dx^p dy^q."""
        out = {}
        for (i, j), c in self._terms.items():
            if i >= p and j >= q:
                f = 1
                for k in range(p):
                    f *= i - k
                for k in range(q):
                    f *= j - k
                out[(i - p, j - q)] = c * f
        return BiPoly._raw(out)

    def __call__(self, a, b):
        return self.evaluate(a, b)

    def evaluate(self, a, b):
        a, b = coerce(a), coerce(b)
        xp, yp = {}, {}
        total = Fraction(0)
        for (i, j), c in self._terms.items():
            if i not in xp:
                xp[i] = a**i
            if j not in yp:
                yp[j] = b**j
            total = total + c * xp[i] * yp[j]
        return total

    def shift(self, a, b):
        """F(a + x, b + y) by binomial expansion."""
        a, b = coerce(a), coerce(b)
        out = {}
        apow, bpow = {0: Fraction(1)}, {0: Fraction(1)}

        def power(cache, base, n):
            if n not in cache:
                cache[n] = base**n
            return cache[n]

        for (i, j), c in self._terms.items():
            for k in range(i + 1):
                ck = c * comb(i, k) * power(apow, a, i - k)
                if ck == 0:
                    continue
                for l in range(j + 1):
                    v = ck * comb(j, l) * power(bpow, b, j - l)
                    key = (k, l)
                    out[key] = out.get(key, 0) + v
        return BiPoly(out)

    def map_coefficients(self, fn):
        return BiPoly({k: fn(c) for k, c in self._terms.items()})

    def to_text(self, names=("x", "y")):
        items = sorted(self._terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))
        return _render(items, names)

    def __repr__(self):
        return f"BiPoly({self.to_text()})"

    __str__ = to_text


def _as_bi(o):
    if isinstance(o, BiPoly):
        return o
    if isinstance(o, (int, Fraction, TowerElement)):
        return BiPoly.constant(o)
    return NotImplemented


class AffineMap:
    """(x, y) -> (m11 x + m12 y + t1, m21 x + m22 y + t2)."""

    __slots__ = ("matrix", "translation")

    def __init__(self, matrix, translation=(0, 0)):
        (a, b), (c, d) = matrix
        self.matrix = ((coerce(a), coerce(b)), (coerce(c), coerce(d)))
        self.translation = (coerce(translation[0]), coerce(translation[1]))

    @classmethod
    def identity(cls):
        return cls(((1, 0), (0, 1)))

    @classmethod
    def translate(cls, a, b):
        return cls(((1, 0), (0, 1)), (a, b))

    @classmethod
    def swap(cls):
        return cls(((0, 1), (1, 0)))

    @property
    def determinant(self):
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def is_invertible(self):
        return certify_nonzero(self.determinant)

    def __call__(self, point):
        (a, b), (c, d) = self.matrix
        x, y = coerce(point[0]), coerce(point[1])
        return (a * x + b * y + self.translation[0], c * x + d * y + self.translation[1])

    def inverse(self):
        (a, b), (c, d) = self.matrix
        det = self.determinant
        if not certify_nonzero(det):
            raise ZeroDivisionError("affine map is not invertible")
        inv = 1 / det
        m = ((d * inv, -b * inv), (-c * inv, a * inv))
        t1, t2 = self.translation
        return AffineMap(m, (-(m[0][0] * t1 + m[0][1] * t2), -(m[1][0] * t1 + m[1][1] * t2)))

    def map_coefficients(self, fn):
        (a, b), (c, d) = self.matrix
        return AffineMap(((fn(a), fn(b)), (fn(c), fn(d))), (fn(self.translation[0]), fn(self.translation[1])))

    def coefficients_iter(self):
        (a, b), (c, d) = self.matrix
        return iter((a, b, c, d) + self.translation)

    def __repr__(self):
        return f"AffineMap({self.matrix}, {self.translation})"


def bipoly_arithmetic(a: BiPoly, b: BiPoly, op: str) -> BiPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(F: BiPoly, p: int, q: int) -> BiPoly:
    return F.partial(p, q)


def compose_affine(F: BiPoly, L: AffineMap) -> BiPoly:
    """F o L expanded canonically."""
    (a, b), (c, d) = L.matrix
    if a == 1 and b == 0 and c == 0 and d == 1:
        return F.shift(*L.translation)
    X = BiPoly({(1, 0): a, (0, 1): b, (0, 0): L.translation[0]})
    Y = BiPoly({(1, 0): c, (0, 1): d, (0, 0): L.translation[1]})
    xp, yp = {0: BiPoly.constant(1)}, {0: BiPoly.constant(1)}

    def power(cache, base, n):
        if n not in cache:
            k = max(e for e in cache if e <= n)
            acc = cache[k]
            for e in range(k + 1, n + 1):
                acc = acc * base
                cache[e] = acc
        return cache[n]

    out = BiPoly()
    for (i, j), coef in F.items():
        out = out + power(xp, X, i) * power(yp, Y, j) * coef
    return out


# ---------------------------------------------------------------------------
# dense univariate helpers (lists, low degree first) over the coefficient field
# ---------------------------------------------------------------------------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _uadd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _usub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _uscale(a, c):
    return _trim([x * c for x in a])


def _umul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _udivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = 1 / b[-1]
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = c * inv
        q[k - db] = c
        for i in range(db + 1):
            a[k - db + i] = a[k - db + i] - c * b[i]
    return _trim(q), _trim(a[:db])


def _uexact(a, b):
    q, r = _udivmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def _umonic(a):
    if not a:
        return a
    inv = 1 / a[-1]
    return [c * inv for c in a]


def _ugcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _udivmod(a, b)
        a, b = b, r
    return _umonic(a)


def _uderiv(a):
    return _trim([a[k] * k for k in range(1, len(a))])


def _upow(a, n):
    out = [Fraction(1)]
    for _ in range(n):
        out = _umul(out, a)
    return out


# ---------------------------------------------------------------------------
# recursive dense form: list over y of dense x-polynomials
# ---------------------------------------------------------------------------

def _to_yx(F: BiPoly):
    if F.is_zero():
        return []
    out = [[] for _ in range(F.deg_y + 1)]
    for j, u in F.y_coeffs().items():
        out[j] = u.to_dense()
    return out


def _from_yx(P):
    terms = {}
    for j, u in enumerate(P):
        for i, c in enumerate(u):
            if c != 0:
                terms[(i, j)] = c
    return BiPoly(terms)


def _ytrim(P):
    P = [list(u) for u in P]
    while P and not P[-1]:
        P.pop()
    return P


def _ycontent(P):
    g = []
    for u in P:
        if u:
            g = _ugcd(g, u) if g else _umonic(u)
            if len(g) == 1:
                break
    return g


def _ydivc(P, c):
    return [_uexact(u, c) if u else [] for u in P]


def _yprimpart(P):
    P = _ytrim(P)
    if not P:
        return P
    c = _ycontent(P)
    P = _ydivc(P, c)
    return _ynormalize(P)


def _ynormalize(P):
    """Scale so that the leading x-coefficient of the leading y-coefficient is 1."""
    lead = P[-1][-1]
    if lead == 1:
        return P
    inv = 1 / lead
    return [_uscale(u, inv) for u in P]


def _yprem(A, B):
    """Pseudo-remainder of A by B in K[x][y]."""
    A = _ytrim(A)
    dB = len(B) - 1
    lb = B[-1]
    while len(A) - 1 >= dB and A:
        dA = len(A) - 1
        la = A[-1]
        shift = dA - dB
        new = [_umul(u, lb) for u in A]
        for i, u in enumerate(B):
            new[i + shift] = _usub(new[i + shift], _umul(u, la))
        A = _ytrim(new)
    # scale to the classical prem: lc(B)^(dA-dB+1) A mod B up to the number of steps
    return A


def _yprem_classic(A, B):
    """lc(B)^(deg A - deg B + 1) * A mod B, exactly (for subresultants)."""
    A = _ytrim(A)
    dB = len(B) - 1
    e = len(A) - 1 - dB + 1
    lb = B[-1]
    while A and len(A) - 1 >= dB:
        dA = len(A) - 1
        la = A[-1]
        shift = dA - dB
        new = [_umul(u, lb) for u in A]
        for i, u in enumerate(B):
            new[i + shift] = _usub(new[i + shift], _umul(u, la))
        A = _ytrim(new)
        e -= 1
    if e > 0 and A:
        f = _upow(lb, e)
        A = [_umul(u, f) for u in A]
    return A


def _ydiv_exact(A, B):
    """A / B in K[x][y]; raises ArithmeticError when not exact."""
    A = _ytrim(A)
    dB = len(B) - 1
    lb = B[-1]
    Q = [[] for _ in range(max(len(A) - dB, 0))]
    while A and len(A) - 1 >= dB:
        dA = len(A) - 1
        q = _uexact(A[-1], lb)
        shift = dA - dB
        Q[shift] = q
        new = [list(u) for u in A]
        for i, u in enumerate(B):
            new[i + shift] = _usub(new[i + shift], _umul(u, q))
        A = _ytrim(new)
        if len(A) - 1 >= dA:
            raise ArithmeticError("inexact division")
    if A:
        raise ArithmeticError("inexact division")
    return _ytrim(Q)


def _ygcd(A, B):
    A, B = _ytrim(A), _ytrim(B)
    if not A:
        return _yprimpart(B) if B else []
    if not B:
        return _yprimpart(A)
    cA, cB = _ycontent(A), _ycontent(B)
    c = _ugcd(cA, cB)
    A, B = _ydivc(A, cA), _ydivc(B, cB)
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _yprem(A, B)
        A, B = B, (_yprimpart(R) if R else [])
    G = _yprimpart(A)
    return _ynormalize([_umul(u, c) for u in G])


def gcd_bivariate(F: BiPoly, G: BiPoly) -> BiPoly:
    """A normalized gcd: primitive part in y times the gcd of the x-contents."""
    if F.is_zero() and G.is_zero():
        raise ValueError("gcd of two zero polynomials")
    return _from_yx(_ygcd(_to_yx(F), _to_yx(G)))


def exact_divide(F: BiPoly, G: BiPoly) -> BiPoly:
    """F / G when G divides F; raises ArithmeticError otherwise."""
    if G.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    return _from_yx(_ydiv_exact(_to_yx(F), _to_yx(G)))


def divides(G: BiPoly, F: BiPoly) -> bool:
    try:
        exact_divide(F, G)
    except ArithmeticError:
        return False
    return True


def resultant_y(F: BiPoly, G: BiPoly) -> UniPoly:
    """Res_y(F, G) as a polynomial in x, via the subresultant algorithm."""
    if F.is_zero() or G.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if not F.deg_y or not G.deg_y:
        raise ValueError("resultant needs positive degree in y")
    A, B = _to_yx(F), _to_yx(G)
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -s
    g, h = [Fraction(1)], [Fraction(1)]
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 == 1 and dB % 2 == 1:
            s = -s
        R = _yprem_classic(A, B)
        A = B
        if not R:
            return UniPoly()
        B = _ydivc(R, _umul(g, _upow(h, delta)))
        g = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = _uexact(_upow(g, delta), _upow(h, delta - 1))
        if len(B) - 1 == 0:
            break
    dA = len(A) - 1
    lB = B[-1]
    if dA == 0:
        res = [Fraction(1)]
    elif dA == 1:
        res = lB
    else:
        res = _uexact(_upow(lB, dA), _upow(h, dA - 1))
    return UniPoly.from_dense(_uscale(res, s))


def sylvester_resultant_at(F: BiPoly, G: BiPoly, x0):
    """det of the Sylvester matrix of F(x0, y), G(x0, y) in y (reference oracle).

    Uses the formal y-degrees of F and G, so it agrees with ``resultant_y``
    evaluated at ``x0`` whenever the leading coefficients do not vanish there.
    """
    m, n = F.deg_y, G.deg_y
    f = [F.y_coeffs().get(j, UniPoly())(x0) for j in range(m + 1)]
    g = [G.y_coeffs().get(j, UniPoly())(x0) for j in range(n + 1)]
    size = m + n
    rows = []
    for i in range(n):
        row = [Fraction(0)] * size
        for k, c in enumerate(reversed(f)):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [Fraction(0)] * size
        for k, c in enumerate(reversed(g)):
            row[i + k] = c
        rows.append(row)
    return _det(rows)


def _det(rows):
    rows = [list(r) for r in rows]
    n = len(rows)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = 1 / p
        for r in range(col + 1, n):
            f = rows[r][col] * inv
            if f != 0:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


def squarefree_decomposition_y(F: BiPoly):
    """Yun decomposition in y over K(x).

    Returns ``(content, factors)`` where ``content`` is the x-only content of
    ``F`` (a UniPoly, up to a constant) and ``factors`` is a list of
    ``(P_i, i)`` with ``P_i`` primitive, squarefree and pairwise coprime, such
    that F equals content * prod P_i^i up to a nonzero constant.
    """
    A = _ytrim(_to_yx(F))
    if not A:
        raise ValueError("zero polynomial")
    content = _ycontent(A)
    A = _ynormalize(_ydivc(A, content))
    if len(A) == 1:
        return UniPoly.from_dense(content), []

    def yderiv(P):
        return _ytrim([_uscale(P[k], k) for k in range(1, len(P))])

    def ysub(P, Q):
        n = max(len(P), len(Q))
        return _ytrim([_usub(P[i] if i < len(P) else [], Q[i] if i < len(Q) else []) for i in range(n)])

    out = []
    dA = yderiv(A)
    a0 = _ygcd(A, dA)
    b = _ydiv_exact(A, a0)
    c = _ydiv_exact(dA, a0)
    d = ysub(c, yderiv(b))
    i = 1
    while len(b) > 1:
        a = _ygcd(b, d) if d else _yprimpart(b)
        if len(a) > 1:
            out.append((_from_yx(a), i))
        b = _ydiv_exact(b, a)
        c = _ydiv_exact(d, a) if d else []
        d = ysub(c, yderiv(b))
        i += 1
    return UniPoly.from_dense(content), out
