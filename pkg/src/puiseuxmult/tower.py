"""Exact coefficients: rationals plus a dynamically split tower of algebraic extensions.

Coefficients are either :class:`fractions.Fraction` (the base field) or
:class:`TowerElement`.  A tower is a chain of :class:`Tower` nodes, each one
adjoining a root of a monic squarefree modulus over its parent.  Moduli may be
reducible; when an inversion meets a zero divisor a :class:`ZeroDivisorSplit`
is raised carrying a coprime factorization of the offending modulus, and the
caller re-runs its computation once per factor (see :func:`split_evaluate`).

Representatives are dense nested tuples: a value over a node of degree ``d``
is a ``d``-tuple of values over the parent, and over the base it is a
``Fraction``.  Reduction happens eagerly, so equality is tuple identity.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

__all__ = [
    "BASE",
    "Tower",
    "TowerElement",
    "ZeroDivisorSplit",
    "Specializer",
    "Grafter",
    "adjoin_root",
    "root_classes",
    "certify_nonzero",
    "coerce",
    "tower_of",
    "join_towers",
    "split_evaluate",
    "split_locally",
    "tower_arithmetic",
    "tower_invert",
    "is_rational",
]


class ZeroDivisorSplit(ArithmeticError):
    """Raised when a non-invertible nonzero element is met.

    ``level`` is the tower node whose modulus factors; ``factors`` are monic
    coprime polynomials (coefficient tuples over ``level.parent``, low degree
    first) whose product is the modulus.
    """

    def __init__(self, level: "Tower", factors):
        super().__init__(f"zero divisor modulo the modulus of {level.name}")
        self.level = level
        self.factors = factors


class Tower:
    """One extension level (or the rational base when ``parent`` is None)."""

    __slots__ = ("parent", "modulus", "name", "depth", "degree")

    def __init__(self, parent, modulus, name):
        self.parent = parent
        self.modulus = tuple(modulus)
        self.name = name
        self.depth = 0 if parent is None else parent.depth + 1
        self.degree = 1 if parent is None else len(self.modulus) - 1

    def __repr__(self):
        if self.parent is None:
            return "Tower(QQ)"
        return f"Tower({' > '.join(self.chain_text())})"

    def is_above(self, other: "Tower") -> bool:
        """True when ``other`` is this node or one of its ancestors."""
        node = self
        while node is not None and node.depth >= other.depth:
            if node is other:
                return True
            node = node.parent
        return False

    def levels(self):
        """Nodes from the first extension up to this one."""
        out = []
        node = self
        while node.parent is not None:
            out.append(node)
            node = node.parent
        return out[::-1]

    def names(self):
        return [lvl.name for lvl in self.levels()]

    def chain_text(self):
        return [f"{lvl.name}: {_poly_text(lvl.parent, lvl.modulus, lvl.name)}" for lvl in self.levels()]

    def moduli_text(self):
        return [_poly_text(lvl.parent, lvl.modulus, lvl.name) for lvl in self.levels()]


BASE = Tower(None, (), "QQ")

_ZERO = Fraction(0)
_ONE = Fraction(1)


# ---------------------------------------------------------------------------
# representative arithmetic
# ---------------------------------------------------------------------------

def _rzero(t):
    if t.parent is None:
        return _ZERO
    z = _rzero(t.parent)
    return (z,) * t.degree


def _rconst(t, q):
    if t.parent is None:
        return Fraction(q)
    return (_rconst(t.parent, q),) + (_rzero(t.parent),) * (t.degree - 1)


def _riszero(t, a):
    if t.parent is None:
        return a == 0
    p = t.parent
    return all(_riszero(p, c) for c in a)


def _radd(t, a, b):
    if t.parent is None:
        return a + b
    p = t.parent
    return tuple(_radd(p, x, y) for x, y in zip(a, b))


def _rsub(t, a, b):
    if t.parent is None:
        return a - b
    p = t.parent
    return tuple(_rsub(p, x, y) for x, y in zip(a, b))


def _rneg(t, a):
    if t.parent is None:
        return -a
    p = t.parent
    return tuple(_rneg(p, x) for x in a)


def _rmul(t, a, b):
    if t.parent is None:
        return a * b
    p = t.parent
    d = t.degree
    prod = [_rzero(p)] * (2 * d - 1)
    for i, ai in enumerate(a):
        if _riszero(p, ai):
            continue
        for j, bj in enumerate(b):
            if _riszero(p, bj):
                continue
            prod[i + j] = _radd(p, prod[i + j], _rmul(p, ai, bj))
    return _rreduce(t, prod)


def _rreduce(t, coeffs):
    """Reduce a coefficient list over ``t.parent`` modulo the monic modulus of ``t``."""
    p = t.parent
    d = t.degree
    mod = t.modulus
    coeffs = list(coeffs)
    for k in range(len(coeffs) - 1, d - 1, -1):
        c = coeffs[k]
        if _riszero(p, c):
            continue
        for i in range(d):
            if not _riszero(p, mod[i]):
                coeffs[k - d + i] = _rsub(p, coeffs[k - d + i], _rmul(p, c, mod[i]))
    coeffs = coeffs[:d]
    while len(coeffs) < d:
        coeffs.append(_rzero(p))
    return tuple(coeffs)


def _rlift(rep, src, dst):
    """Embed a representative over ``src`` into the descendant node ``dst``."""
    if src is dst:
        return rep
    chain = []
    node = dst
    while node is not src:
        chain.append(node)
        node = node.parent
    for node in reversed(chain):
        rep = (rep,) + (_rzero(node.parent),) * (node.degree - 1)
    return rep


# dense univariate polynomials over a tower node, as lists of representatives

def _ptrim(t, a):
    a = list(a)
    while a and _riszero(t, a[-1]):
        a.pop()
    return a


def _pdivmod(t, a, b):
    """Division with remainder over node ``t``; inverts lc(b) (may split)."""
    a = list(a)
    inv = _rinv(t, b[-1])
    db = len(b) - 1
    q = [_rzero(t)] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if _riszero(t, c):
            continue
        c = _rmul(t, c, inv)
        q[k - db] = c
        for i in range(db + 1):
            a[k - db + i] = _rsub(t, a[k - db + i], _rmul(t, c, b[i]))
    return q, _ptrim(t, a[:db])


def _pmul(t, a, b):
    if not a or not b:
        return []
    out = [_rzero(t)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if _riszero(t, x):
            continue
        for j, y in enumerate(b):
            out[i + j] = _radd(t, out[i + j], _rmul(t, x, y))
    return _ptrim(t, out)


def _psub(t, a, b):
    n = max(len(a), len(b))
    z = _rzero(t)
    return _ptrim(t, [_rsub(t, a[i] if i < len(a) else z, b[i] if i < len(b) else z) for i in range(n)])


def _pmonic(t, a):
    inv = _rinv(t, a[-1])
    return [_rmul(t, c, inv) for c in a]


def _rinv(t, a):
    """Inverse of a representative; raises ZeroDivisorSplit on zero divisors."""
    if t.parent is None:
        if a == 0:
            raise ZeroDivisionError("division by zero")
        return 1 / a
    p = t.parent
    r0 = list(t.modulus)
    r1 = _ptrim(p, a)
    if not r1:
        raise ZeroDivisionError("division by zero")
    s0, s1 = [], [_rconst(p, 1)]
    while True:
        if len(r1) == 1:
            c = _rinv(p, r1[0])
            return _rreduce(t, [_rmul(p, c, s) for s in s1] or [_rzero(p)])
        q, r = _pdivmod(p, r0, r1)
        if not r:
            g = _pmonic(p, r1)
            h, rem = _pdivmod(p, list(t.modulus), g)
            assert not rem
            raise ZeroDivisorSplit(t, [tuple(g), tuple(h)])
        r0, r1 = r1, r
        s0, s1 = s1, _psub(p, s0, _pmul(p, q, s1))


# ---------------------------------------------------------------------------
# tower bookkeeping
# ---------------------------------------------------------------------------

def tower_of(c) -> Tower:
    return c.tower if isinstance(c, TowerElement) else BASE


def join_towers(*towers) -> Tower:
    """The longest tower among ``towers``; all others must be its prefixes."""
    best = BASE
    for t in towers:
        if t.depth > best.depth:
            if not t.is_above(best):
                raise ValueError("elements live in incompatible towers")
            best = t
        elif not best.is_above(t):
            raise ValueError("elements live in incompatible towers")
    return best


def _make(t, rep):
    if t.parent is None:
        return rep
    return TowerElement(t, rep)


def coerce(c):
    """Normalize a scalar into the coefficient domain (Fraction or TowerElement)."""
    if isinstance(c, TowerElement):
        return c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _rep_in(c, t):
    if isinstance(c, TowerElement):
        return _rlift(c.rep, c.tower, t)
    return _rconst(t, c)


def is_rational(c) -> bool:
    if not isinstance(c, TowerElement):
        return True
    return c.rational_value() is not None


class TowerElement:
    """An algebraic number: a reduced representative over a tower node."""

    __slots__ = ("tower", "rep", "_inverse")

    def __init__(self, tower: Tower, rep):
        self.tower = tower
        self.rep = rep
        self._inverse = None

    # -- structure
    def is_zero(self) -> bool:
        return _riszero(self.tower, self.rep)

    def lowered(self):
        """Same value over the shortest prefix tower that contains it."""
        t, rep = self.tower, self.rep
        while t.parent is not None:
            p = t.parent
            if not all(_riszero(p, c) for c in rep[1:]):
                break
            t, rep = p, rep[0]
        return t, rep

    def rational_value(self):
        t, rep = self.lowered()
        return rep if t.parent is None else None

    def _binary(self, other, fn):
        if isinstance(other, TowerElement):
            t = join_towers(self.tower, other.tower)
        elif isinstance(other, (int, Fraction, Rational)):
            t = self.tower
        else:
            return NotImplemented
        return _make(t, fn(t, _rep_in(self, t), _rep_in(other, t)))

    def __add__(self, other):
        return self._binary(other, _radd)

    def __radd__(self, other):
        return self._binary(other, lambda t, a, b: _radd(t, b, a))

    def __sub__(self, other):
        return self._binary(other, _rsub)

    def __rsub__(self, other):
        return self._binary(other, lambda t, a, b: _rsub(t, b, a))

    def __mul__(self, other):
        return self._binary(other, _rmul)

    def __rmul__(self, other):
        return self._binary(other, lambda t, a, b: _rmul(t, b, a))

    def __neg__(self):
        return TowerElement(self.tower, _rneg(self.tower, self.rep))

    def __pos__(self):
        return self

    def inverse(self):
        if self._inverse is None:
            self._inverse = TowerElement(self.tower, _rinv(self.tower, self.rep))
        return self._inverse

    def __truediv__(self, other):
        if isinstance(other, TowerElement):
            return self * other.inverse()
        if isinstance(other, (int, Fraction, Rational)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = TowerElement(self.tower, _rconst(self.tower, 1))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, TowerElement):
            try:
                t = join_towers(self.tower, other.tower)
            except ValueError:
                return False
            return _rep_in(self, t) == _rep_in(other, t)
        if isinstance(other, (int, Fraction, Rational)):
            return self.rep == _rconst(self.tower, other)
        return NotImplemented

    def __hash__(self):
        t, rep = self.lowered()
        if t.parent is None:
            return hash(rep)
        return hash((id(t), rep))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"TowerElement({self.to_text()} over {self.tower!r})"

    def __str__(self):
        return self.to_text()

    def to_text(self) -> str:
        return _rep_text(self.tower, self.rep)

    def map_coefficients(self, fn):
        return fn(self)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _frac_text(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _rep_text(t, rep):
    if t.parent is None:
        return _frac_text(rep)
    return _poly_text(t.parent, rep, t.name)


def _poly_text(parent, coeffs, var):
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if _riszero(parent, c):
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        ctext = _rep_text(parent, c)
        simple = parent.parent is None or all(_riszero(parent.parent, x) for x in c[1:])
        if mono and ctext in ("1", "-1"):
            term = mono if ctext == "1" else "-" + mono
        elif mono:
            term = f"{ctext}*{mono}" if simple else f"({ctext})*{mono}"
        else:
            term = ctext if simple else f"({ctext})"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def tower_arithmetic(a, b, op: str):
    """Add, subtract or multiply two coefficients, lifting to the common tower."""
    a, b = coerce(a), coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def tower_invert(a):
    """Inverse of ``a``.

    Raises ``ZeroDivisionError`` for zero and :class:`ZeroDivisorSplit` when
    ``a`` is a zero divisor modulo a reducible modulus.
    """
    a = coerce(a)
    if isinstance(a, TowerElement):
        return a.inverse()
    if a == 0:
        raise ZeroDivisionError("division by zero")
    return 1 / a


def certify_nonzero(c) -> bool:
    """Decide ``c != 0`` soundly: zero divisors raise :class:`ZeroDivisorSplit`."""
    if isinstance(c, TowerElement):
        if c.is_zero():
            return False
        c.inverse()
        return True
    return c != 0


def _fresh_name(parent):
    return f"z{parent.depth + 1}"


def _squarefree_monic(t, f):
    """Monic squarefree part of a representative polynomial over ``t``."""
    f = _pmonic(t, _ptrim(t, f))
    if len(f) <= 2:
        return f
    df = _ptrim(t, [_rmul(t, _rconst(t, k), f[k]) for k in range(1, len(f))])
    a, b = f, df
    while b:
        _, r = _pdivmod(t, a, b)
        a, b = b, r
    g = _pmonic(t, a)
    if len(g) == 1:
        return f
    q, r = _pdivmod(t, f, g)
    assert not r
    return _pmonic(t, q)


def _rational_linear_split(f):
    """Split a monic rational polynomial into (rational roots, residual factor)."""
    from sympy import Poly, QQ, Symbol

    z = Symbol("z")
    poly = Poly([c for c in reversed(f)], z, domain=QQ)
    roots = []
    residual = Poly(1, z, domain=QQ)
    for fac, _ in poly.factor_list()[1]:
        if fac.degree() == 1:
            a1, a0 = fac.all_coeffs()
            roots.append(-Fraction(int(a0.p), int(a0.q)) / Fraction(int(a1.p), int(a1.q)))
        else:
            residual = residual * fac
    residual = residual.monic()
    res = [Fraction(int(c.p), int(c.q)) for c in reversed(residual.all_coeffs())]
    return sorted(roots), res


def root_classes(coeffs):
    """All roots of a squarefree-or-not polynomial, grouped into symbolic classes.

    ``coeffs`` are coefficients low degree first.  Returns a list of
    ``(root, count)``: rational (or tower-linear) roots with count 1, and for
    the remaining squarefree factor of degree ``k >= 2`` a single new tag
    standing for ``k`` conjugate roots.  Multiplicities are not reported here;
    callers pass squarefree input (see :func:`squarefree_decomposition`).
    """
    coeffs = [coerce(c) for c in coeffs]
    t = join_towers(*(tower_of(c) for c in coeffs))
    f = _ptrim(t, [_rep_in(c, t) for c in coeffs])
    if len(f) < 2:
        raise ValueError("cannot adjoin a root of a constant polynomial")
    f = _squarefree_monic(t, f)
    roots = []
    if t.parent is None:
        rational, f = _rational_linear_split(f)
        roots.extend((r, 1) for r in rational)
    if len(f) == 2:
        roots.append((_make(t, _rneg(t, f[0])), 1))
    elif len(f) > 2:
        node = Tower(t, f, _fresh_name(t))
        gen = (_rzero(t), _rconst(t, 1)) + (_rzero(t),) * (node.degree - 2)
        roots.append((TowerElement(node, gen), node.degree))
    return roots


def adjoin_root(coeffs):
    """A root of the polynomial with the given coefficients (low degree first).

    The polynomial is replaced by its monic squarefree part.  Over the
    rationals linear factors are stripped first; when a factor of degree two
    or more remains a new tower level is created and its generator returned,
    otherwise a rational (or tower-linear) root is returned directly.
    """
    classes = root_classes(coeffs)
    for root, count in classes:
        if count > 1:
            return root
    return classes[0][0]


def squarefree_decomposition(coeffs):
    """Yun decomposition of a univariate polynomial over the tower.

    Returns a list of ``(factor_coeffs, multiplicity)`` with monic factors.
    """
    coeffs = [coerce(c) for c in coeffs]
    t = join_towers(*(tower_of(c) for c in coeffs))
    f = _ptrim(t, [_rep_in(c, t) for c in coeffs])
    if len(f) < 2:
        return []
    f = _pmonic(t, f)

    def deriv(a):
        return _ptrim(t, [_rmul(t, _rconst(t, k), a[k]) for k in range(1, len(a))])

    def gcd(a, b):
        while b:
            _, r = _pdivmod(t, a, b)
            a, b = b, r
        return _pmonic(t, a)

    def quo(a, b):
        q, r = _pdivmod(t, a, b)
        assert not r
        return q

    out = []
    df = deriv(f)
    a0 = gcd(f, df)
    b = quo(f, a0)
    c = quo(df, a0)
    d = _psub(t, c, deriv(b))
    i = 1
    while len(b) > 1:
        a = gcd(b, d) if d else _pmonic(t, b)
        if len(a) > 1:
            out.append(([_make(t, r) for r in a], i))
        b = quo(b, a)
        c = quo(d, a) if d else []
        d = _psub(t, c, deriv(b))
        i += 1
    return out


# ---------------------------------------------------------------------------
# dynamic evaluation drivers
# ---------------------------------------------------------------------------

class Specializer:
    """Rewrites data after replacing the modulus of ``level`` by ``factor``.

    A linear factor eliminates the level entirely (its generator becomes the
    root of the factor).  Nodes above ``level`` are rebuilt with their moduli
    reduced into the new parent, memoized so shared towers stay shared.
    """

    def __init__(self, level: Tower, factor):
        self.level = level
        self.factor = tuple(factor)
        self.linear = len(self.factor) == 2
        self._nodes = {}

    @property
    def ratio(self):
        return Fraction(len(self.factor) - 1, self.level.degree)

    def tower(self, t: Tower) -> Tower:
        if t.depth < self.level.depth or not t.is_above(self.level):
            return t
        key = id(t)
        hit = self._nodes.get(key)
        if hit is not None:
            return hit[1]
        if t is self.level:
            new = t.parent if self.linear else Tower(t.parent, self.factor, t.name)
        else:
            parent = self.tower(t.parent)
            mod = tuple(self.rep(c, t.parent) for c in t.modulus)
            new = Tower(parent, mod, t.name)
        self._nodes[key] = (t, new)
        return new

    def rep(self, rep, t: Tower):
        if t.depth < self.level.depth or not t.is_above(self.level):
            return rep
        if t is self.level:
            p = t.parent
            if self.linear:
                root = _rneg(p, self.factor[0])
                acc = _rzero(p)
                for c in reversed(rep):
                    acc = _radd(p, _rmul(p, acc, root), c)
                return acc
            return _rreduce(self.tower(t), list(rep))
        return tuple(self.rep(c, t.parent) for c in rep)

    def elem(self, c):
        if isinstance(c, TowerElement):
            return _make(self.tower(c.tower), self.rep(c.rep, c.tower))
        return c

    def map(self, obj):
        return _map_structure(obj, self.elem, self.tower)


class Grafter:
    """Re-adjoins the levels of one tower (above ``base``) on top of another.

    Used to form a compositum: branch towers built independently over the
    same base are stacked, so their elements can be compared.
    """

    def __init__(self, base: Tower, onto: Tower):
        if not onto.is_above(base):
            raise ValueError("graft target must extend the common base")
        self.base = base
        self.onto = onto
        self._nodes = {}

    def _above(self, t):
        return t.depth > self.base.depth

    def tower(self, t: Tower) -> Tower:
        if not self._above(t):
            return t
        if not t.is_above(self.base):
            raise ValueError("tower does not extend the graft base")
        hit = self._nodes.get(id(t))
        if hit is not None:
            return hit[1]
        parent = self.tower(t.parent) if self._above(t.parent) else self.onto
        mod = tuple(self._rep_into(c, t.parent) for c in t.modulus)
        new = Tower(parent, mod, f"{t.name}'")
        self._nodes[id(t)] = (t, new)
        return new

    def _rep_into(self, rep, t):
        if self._above(t):
            return tuple(self._rep_into(c, t.parent) for c in rep)
        return _rlift(rep, t, self.onto)

    def elem(self, c):
        if isinstance(c, TowerElement) and self._above(c.tower):
            return _make(self.tower(c.tower), self._rep_into(c.rep, c.tower))
        return c

    def map(self, obj):
        return _map_structure(obj, self.elem, self.tower)


def _map_structure(obj, elem, tower):
    if isinstance(obj, (Fraction, int, float, str, type(None), bool)):
        return obj
    if isinstance(obj, TowerElement):
        return elem(obj)
    if isinstance(obj, Tower):
        return tower(obj)
    if isinstance(obj, tuple):
        return tuple(_map_structure(o, elem, tower) for o in obj)
    if isinstance(obj, list):
        return [_map_structure(o, elem, tower) for o in obj]
    if isinstance(obj, frozenset):
        return frozenset(_map_structure(o, elem, tower) for o in obj)
    if isinstance(obj, dict):
        return {k: _map_structure(v, elem, tower) for k, v in obj.items()}
    if hasattr(obj, "map_structure"):
        return obj.map_structure(lambda o: _map_structure(o, elem, tower))
    if hasattr(obj, "map_coefficients"):
        return obj.map_coefficients(elem)
    raise TypeError(f"cannot map {type(obj).__name__} through a tower specialization")


def _towers_in(obj, acc):
    if isinstance(obj, TowerElement):
        acc.append(obj.tower)
    elif isinstance(obj, Tower):
        acc.append(obj)
    elif isinstance(obj, (tuple, list, frozenset)):
        for o in obj:
            _towers_in(o, acc)
    elif isinstance(obj, dict):
        for o in obj.values():
            _towers_in(o, acc)
    elif hasattr(obj, "coefficients_iter"):
        for c in obj.coefficients_iter():
            _towers_in(c, acc)
    return acc


def split_evaluate(fn, *args):
    """Run ``fn(*args)`` under dynamic evaluation.

    Returns a list of ``(args, result)``, one entry per split branch (a single
    entry when no zero divisor is met).
    """
    try:
        return [(args, fn(*args))]
    except ZeroDivisorSplit as z:
        towers = _towers_in(args, [])
        if not any(t.is_above(z.level) for t in towers):
            raise RuntimeError("zero divisor on a level unknown to the inputs") from z
        out = []
        for factor in z.factors:
            sp = Specializer(z.level, factor)
            out.extend(split_evaluate(fn, *sp.map(args)))
        return out


def split_locally(fn, state, owned, weight=1):
    """Evaluate ``fn(state)`` splitting only on levels in ``owned``.

    ``owned`` is a tuple of tower nodes created by the caller; ``weight`` is
    multiplied by ``deg(factor)/deg(modulus)`` on each split, so it keeps
    counting the conjugates a symbolic object stands for.  Splits on other
    levels propagate.  Returns a list of ``(state, owned, weight, result)``.
    """
    try:
        return [(state, owned, weight, fn(state))]
    except ZeroDivisorSplit as z:
        if not any(z.level is o for o in owned):
            raise
        out = []
        for factor in z.factors:
            sp = Specializer(z.level, factor)
            new_state = sp.map(state)
            new_owned = tuple(
                sp.tower(o) for o in owned if not (sp.linear and o is z.level)
            )
            new_weight = weight * (len(factor) - 1) // z.level.degree
            out.extend(split_locally(fn, new_state, new_owned, new_weight))
        return out
