"""Newton polygons and Newton-Puiseux expansion of the roots of F(x, y) in y.

Branches are symbolic: a root of an edge polynomial that does not split over
the rationals is adjoined as a new tower tag, and the resulting branch stands
for ``count`` conjugate roots.  Every tag a branch creates is *owned* by it,
so zero divisors met later on those levels split only that branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import TruncationExhausted
from .poly import BiPoly, squarefree_decomposition_y
from .series import PuiseuxSeries
from .tower import certify_nonzero, root_classes, split_locally, squarefree_decomposition

__all__ = [
    "Edge",
    "NewtonPolygon",
    "Branch",
    "newton_polygon",
    "positive_valuation_count",
    "x_divisibility",
    "expand_branches",
    "branch_values",
]


@dataclass(frozen=True)
class Edge:
    slope: Fraction
    length: int
    start: tuple
    end: tuple

    @property
    def valuation(self):
        """Valuation of the roots this edge accounts for."""
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple
    edges: tuple
    m: int
    zero_series_count: int

    @property
    def vertices(self):
        if not self.edges:
            return (self.points[0],) if self.points else ()
        return (self.edges[0].start,) + tuple(e.end for e in self.edges)

    @property
    def positive_count(self):
        """min{k : val F_k = m}: roots of positive valuation, zero series included."""
        return min(k for k, v in self.points if v == self.m)


@dataclass(frozen=True)
class Branch:
    """A series root of F in y standing for ``count`` conjugate roots."""

    series: PuiseuxSeries
    multiplicity: int
    count: int = 1
    owned: tuple = ()

    def map_structure(self, fn):
        return Branch(fn(self.series), self.multiplicity, self.count, fn(self.owned))

    def coefficients_iter(self):
        return self.series.coefficients_iter()


def _lowest(u):
    """Certified valuation and leading coefficient of a UniPoly in x."""
    k = u.valuation
    c = u.coeff(k)
    certify_nonzero(c)
    return k, c


def _lower_hull(points):
    hull = []
    for p in points:
        while len(hull) >= 2:
            (k1, v1), (k2, v2) = hull[-2], hull[-1]
            # drop hull[-1] unless it lies strictly below the chord hull[-2] -> p
            if (v2 - v1) * (p[0] - k1) >= (p[1] - v1) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _polygon_from_points(points):
    points = sorted(points)
    hull = _lower_hull(points)
    edges = tuple(
        Edge(Fraction(v2 - v1) / (k2 - k1), k2 - k1, (k1, v1), (k2, v2))
        for (k1, v1), (k2, v2) in zip(hull, hull[1:])
    )
    m = min(v for _, v in points)
    return NewtonPolygon(tuple(points), edges, m, points[0][0])


def newton_polygon(F: BiPoly) -> NewtonPolygon:
    """Lower hull of the points (k, val F_k) for the nonzero y-coefficients F_k."""
    if F.is_zero():
        raise ValueError("Newton polygon of the zero polynomial")
    pts = [(k, _lowest(u)[0]) for k, u in F.y_coeffs().items()]
    return _polygon_from_points(pts)


def x_divisibility(F: BiPoly) -> int:
    return F.x_divisibility()


def positive_valuation_count(F: BiPoly) -> int:
    return newton_polygon(F).positive_count


# ---------------------------------------------------------------------------
# expansion
# ---------------------------------------------------------------------------

def _substitute(H: BiPoly, q, p, beta_q, c):
    """w^(-beta_q) * H(w^q, w^p (c + y))."""
    out = {}
    cpow = {}
    for (i, k), a in H.items():
        ex = q * i + p * k - beta_q
        if k not in cpow:
            cpow[k] = [c**r for r in range(k + 1)]
        pw = cpow[k]
        for l in range(k + 1):
            v = a * comb(k, l) * pw[k - l]
            key = (ex, l)
            out[key] = out[key] + v if key in out else v
    return BiPoly(out)


# dense truncated power series in w (lists, low degree first)

def _smul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if y != 0:
                out[i + j] = out[i + j] + x * y
    return out


def _sinv(a, n):
    inv0 = 1 / a[0]
    out = [inv0] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] != 0 and out[k - j] != 0:
                acc = acc + a[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def _hensel(H: BiPoly, n):
    """The unique root y = Y(w), Y(0) = 0, modulo w^n (requires dH/dy(0,0) != 0)."""
    cols = {}
    for (i, k), a in H.items():
        if i < n:
            cols.setdefault(k, {})[i] = a
    dense = {}
    for k, d in cols.items():
        row = [0] * n
        for i, a in d.items():
            row[i] = a
        dense[k] = row
    top = max(dense) if dense else 0
    unit = dense.get(1, [0])[0]
    certify_nonzero(unit)

    def evaluate(Y, prec):
        f = [0] * prec
        fy = [0] * prec
        for k in range(top, -1, -1):
            # Horner for both H and dH/dy
            fy = _smul(fy, Y, prec)
            fy = [s + t for s, t in zip(fy, f)]
            f = _smul(f, Y, prec)
            row = dense.get(k)
            if row:
                f = [s + t for s, t in zip(f, row[:prec])]
        return f, fy

    Y = [0]
    prec = 1
    while prec < n:
        prec = min(2 * prec, n)
        Y = Y + [0] * (prec - len(Y))
        f, fy = evaluate(Y, prec)
        corr = _smul(f, _sinv(fy, prec), prec)
        Y = [y - c for y, c in zip(Y, corr)]
    return Y[:n]


def _is_exact_root(H: BiPoly, Y):
    """Whether the polynomial Y(w) is an exact root of H(w, y)."""
    ypoly = {i: c for i, c in enumerate(Y) if c != 0}
    # cheap necessary condition first: vanishing at a sample point
    w0 = Fraction(3, 7)
    if H.evaluate(w0, sum((c * w0**i for i, c in ypoly.items()), Fraction(0))) != 0:
        return False
    acc = {}
    for k in range(H.deg_y, -1, -1):
        nxt = {}
        for i, a in acc.items():
            for j, b in ypoly.items():
                nxt[i + j] = nxt.get(i + j, 0) + a * b
        for (i, kk), a in H.items():
            if kk == k:
                nxt[i] = nxt.get(i, 0) + a
        acc = {i: c for i, c in nxt.items() if c != 0}
    return not acc


@dataclass
class _Item:
    kind: str  # "np" or "hensel"
    H: BiPoly
    Q: int
    prefix: dict
    N: int
    first: bool

    def map_structure(self, fn):
        return _Item(self.kind, fn(self.H), self.Q, fn(self.prefix), self.N, self.first)


def _series(prefix, Q, extra=None, trunc=None):
    terms = dict(prefix)
    if extra:
        for k, c in extra.items():
            terms[k] = terms[k] + c if k in terms else c
    return PuiseuxSeries(terms, Q, trunc)


def _np_step(item: _Item, order, all_branches):
    """One Newton polygon step. Returns (branches, children) with new tags."""
    H = item.H
    cols = H.y_coeffs()
    pts, lead = [], {}
    for k, u in cols.items():
        v, c = _lowest(u)
        pts.append((k, v))
        lead[k] = (v, c)
    poly = _polygon_from_points(pts)
    done, children = [], []
    if poly.zero_series_count > 0:
        # y divides H: the prefix itself is an exact root
        done.append((_series(item.prefix, item.Q), 1, ()))
    for edge in poly.edges:
        lam = edge.valuation
        if lam <= 0 and not (item.first and all_branches):
            continue
        p, q = lam.numerator, lam.denominator
        k0, v0 = edge.start
        beta_q = q * v0 + p * k0
        phi = [0] * (edge.length + 1)
        for k, (v, c) in lead.items():
            if k0 <= k <= edge.end[0] and q * v + p * k == beta_q:
                phi[k - k0] = c
        Q2 = item.Q * q
        N2 = item.N * q + p
        base = {k * q: c for k, c in item.prefix.items()}
        for factor, mu in squarefree_decomposition(phi):
            for c, cnt in root_classes(factor):
                if c == 0:
                    continue
                tags = (c.tower,) if cnt > 1 else ()
                prefix2 = dict(base)
                prefix2[N2] = prefix2[N2] + c if N2 in prefix2 else c
                if mu > 1 and Fraction(N2, Q2) >= order:
                    s = _series({k * mu: v for k, v in prefix2.items()}, Q2 * mu, trunc=N2 * mu + 1)
                    done.append((s, cnt * mu, tags))
                    continue
                kind = "np" if mu > 1 else "hensel"
                children.append((_Item(kind, None, Q2, prefix2, N2, False), (H, q, p, beta_q, c), cnt, tags))
    return done, children


def _hensel_step(item: _Item, order):
    """Lift a simple root of the substituted polynomial to the requested order."""
    H = item.H
    n = max(1, math.ceil(order * item.Q) - item.N)
    Y = _hensel(H, n)
    extra = {item.N + i: c for i, c in enumerate(Y) if c != 0}
    if _is_exact_root(H, Y):
        return [(_series(item.prefix, item.Q, extra), 1, ())], []
    return [(_series(item.prefix, item.Q, extra, item.N + n), 1, ())], []


def expand_branches(F: BiPoly, order, all_branches: bool = False, max_steps=None):
    """Series roots of F in y, each known at least up to ``x^order``.

    Only roots of positive valuation (and the zero series) are returned unless
    ``all_branches`` is set.  Each :class:`Branch` carries the multiplicity of
    its squarefree factor and the number of conjugate roots it represents.
    """
    if F.is_zero():
        raise ValueError("cannot expand the zero polynomial")
    if not F.deg_y:
        raise ValueError("polynomial has no y-roots")
    order = Fraction(order)
    if max_steps is None:
        max_steps = 10 * max(1, math.ceil(order)) * F.deg_y * max(F.degree, 1) + 50
    _, factors = squarefree_decomposition_y(F)
    out = []
    steps = 0
    for P, mult in factors:
        work = [(_Item("np", P, 1, {}, 0, True), (), 1)]
        while work:
            item, owned, weight = work.pop()
            steps += 1
            if steps > max_steps:
                raise TruncationExhausted("Newton-Puiseux step budget exceeded")
            if item.kind == "np":
                fn = lambda it: _np_step(it, order, all_branches)
            else:
                fn = lambda it: _hensel_step(it, order)
            for it2, own2, w2, (done, children) in split_locally(fn, item, owned, weight):
                for s, cnt, tags in done:
                    out.append(Branch(s, mult, w2 * cnt, own2 + tags))
                for child, sub, cnt, tags in children:
                    work.append((_materialize(child, sub), own2 + tags, w2 * cnt))
    return out


def _materialize(child: _Item, sub):
    H, q, p, beta_q, c = sub
    child.H = _substitute(H, q, p, beta_q, c)
    return child


def branch_values(branch: Branch, fn):
    """Evaluate ``fn(series)`` on a branch, splitting its own tags as needed.

    Returns a list of ``(result, count)`` whose counts sum to ``branch.count``.
    """
    return [
        (res, w)
        for _, _, w, res in split_locally(fn, branch.series, branch.owned, branch.count)
    ]
