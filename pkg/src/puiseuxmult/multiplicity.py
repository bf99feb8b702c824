"""Local intersection multiplicity of two plane curves.

Three parametrization formulas (valuations of one curve along the positive
valuation branches of the other, or of branch differences) plus an
independent oracle computing the codimension of the ideal in truncated jets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import TruncationExhausted
from .newton import branch_values, expand_branches, positive_valuation_count
from .poly import BiPoly, gcd_bivariate
from .series import eval_on_series
from .tower import (
    BASE,
    Grafter,
    certify_nonzero,
    coerce,
    join_towers,
    split_evaluate,
    split_locally,
    tower_of,
)

__all__ = [
    "INFINITE",
    "HALPHEN_FORM1",
    "HALPHEN_FORM2",
    "HALPHEN_FORM3",
    "JET_ORACLE",
    "Point",
    "MultiplicityResult",
    "halphen_multiplicity",
    "jet_oracle_multiplicity",
    "is_infinite",
    "bezout_sum_check",
    "intersection_multiplicity",
]

INFINITE = math.inf

HALPHEN_FORM1 = "HALPHEN_FORM1"
HALPHEN_FORM2 = "HALPHEN_FORM2"
HALPHEN_FORM3 = "HALPHEN_FORM3"
JET_ORACLE = "JET_ORACLE"

_FORMS = {1: HALPHEN_FORM1, 2: HALPHEN_FORM2, 3: HALPHEN_FORM3}


@dataclass(frozen=True)
class Point:
    a: object
    b: object

    def __post_init__(self):
        object.__setattr__(self, "a", coerce(self.a))
        object.__setattr__(self, "b", coerce(self.b))

    def __iter__(self):
        return iter((self.a, self.b))

    def map_coefficients(self, fn):
        return Point(fn(self.a), fn(self.b))

    def coefficients_iter(self):
        return iter((self.a, self.b))


def _point(p):
    if p is None:
        return Point(0, 0)
    return p if isinstance(p, Point) else Point(*p)


@dataclass(frozen=True)
class MultiplicityResult:
    value: int | float
    method: str
    trace: dict = field(default_factory=dict, compare=False)

    @property
    def is_infinite(self):
        return self.value == INFINITE

    def __int__(self):
        if self.is_infinite:
            raise OverflowError("infinite multiplicity")
        return int(self.value)


def _shifted(F, G, p):
    a, b = p
    if a == 0 and b == 0:
        return F, G
    return F.shift(a, b), G.shift(a, b)


def _constant_term(P):
    return P.coeff(0, 0)


def is_infinite(F: BiPoly, G: BiPoly, p=None) -> bool:
    """Common factor of F and G through p."""
    if F.is_zero() or G.is_zero():
        raise ValueError("is_infinite needs nonzero polynomials")
    p = _point(p)
    H = gcd_bivariate(F, G)
    if not H.degree:
        return False
    return not certify_nonzero(H.evaluate(p.a, p.b))


# ---------------------------------------------------------------------------
# parametrization formulas
# ---------------------------------------------------------------------------

def _weighted_sum(branches, fn):
    """Sum of multiplicity * count * fn(series); None when a value is inexact."""
    total = Fraction(0)
    vals = []
    for br in branches:
        for tv, w in branch_values(br, fn):
            if not tv.exact:
                return None, vals
            vals.append((str(tv.value) if tv.value != INFINITE else "inf", br.multiplicity * w))
            if tv.value == INFINITE:
                return INFINITE, vals
            total += tv.value * br.multiplicity * w
    return total, vals


def _common_base(t1, t2):
    base = BASE
    for lvl in t1.levels():
        if t2.is_above(lvl):
            base = lvl
        else:
            break
    return base


def _series_tower(S):
    return join_towers(*(tower_of(c) for c in S.coefficients_iter()))


def _pair_sum(fb, gb):
    """Sum over all conjugate pairs of val(S - T)."""
    tS, tT = _series_tower(fb.series), _series_tower(gb.series)
    base = _common_base(tS, tT)
    graft = Grafter(base, tT)
    S = graft.map(fb.series)
    owned = tuple(graft.tower(o) for o in fb.owned) + gb.owned

    def diff(state):
        s, t = state
        return (s - t).val()

    total = Fraction(0)
    vals = []
    mult = fb.multiplicity * gb.multiplicity
    for _, _, w, tv in split_locally(diff, (S, gb.series), owned, fb.count * gb.count):
        if not tv.exact:
            return None, vals
        vals.append((str(tv.value) if tv.value != INFINITE else "inf", mult * w))
        if tv.value == INFINITE:
            return INFINITE, vals
        total += tv.value * mult * w
    return total, vals


def _halphen_once(Fb, Gb, form, order, quad):
    m, n, r, s = quad
    if form == 1:
        branches = expand_branches(Fb, order) if Fb.deg_y else []
        fn = lambda S: eval_on_series(Gb, 0, 0, S).val()
        total, vals = _weighted_sum(branches, fn)
        base = m * s
    elif form == 2:
        branches = expand_branches(Gb, order) if Gb.deg_y else []
        fn = lambda T: eval_on_series(Fb, 0, 0, T).val()
        total, vals = _weighted_sum(branches, fn)
        base = n * r
    else:
        fbs = expand_branches(Fb, order) if Fb.deg_y else []
        gbs = expand_branches(Gb, order) if Gb.deg_y else []
        total, vals = Fraction(0), []
        for fb in fbs:
            for gb in gbs:
                part, pv = _pair_sum(fb, gb)
                vals.extend(pv)
                if part is None or part == INFINITE:
                    total = part
                    break
                total += part
            if total is None or total == INFINITE:
                break
        base = m * s + n * r
    if total is None or total == INFINITE:
        return total, vals
    value = base + total
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral multiplicity {value}")
    return int(value), vals


def _halphen_at_origin(Fb, Gb, form, order, retries):
    m, n = Fb.x_divisibility(), Gb.x_divisibility()
    r, s = positive_valuation_count(Fb), positive_valuation_count(Gb)
    quad = (m, n, r, s)
    trace = {"m": m, "n": n, "r": r, "s": s}
    if certify_nonzero(_constant_term(Fb)) or certify_nonzero(_constant_term(Gb)):
        return 0, dict(trace, valuations=[])
    if m > 0 and n > 0:
        return INFINITE, dict(trace, valuations=[], reason="x divides both")
    if order is None:
        order = max(Fb.degree, 1) * max(Gb.degree, 1) + 1
    for attempt in range(retries + 1):
        value, vals = _halphen_once(Fb, Gb, form, order, quad)
        if value is not None:
            reason = "branch on both curves" if value == INFINITE else None
            return value, dict(trace, valuations=vals, order=str(order), **({"reason": reason} if reason else {}))
        order *= 2
    if is_infinite(Fb, Gb, Point(0, 0)):
        return INFINITE, dict(trace, valuations=[], reason="common factor")
    raise TruncationExhausted("summand valuations stayed undetermined after retries")


def _run_split(fn, F, G, p):
    """Evaluate under dynamic evaluation over the coordinates' tower."""
    results = split_evaluate(fn, F, G, p)
    values = {res[0] for _, res in results}
    if len(values) != 1:
        raise ValueError("the point's coordinates do not determine a single multiplicity")
    return results[0][1]


def halphen_multiplicity(F: BiPoly, G: BiPoly, p=None, form: int = 1, order=None, retries: int = 2):
    """I_p(F, G) from the parametrization formula number ``form`` (1, 2 or 3)."""
    if form not in _FORMS:
        raise ValueError("form must be 1, 2 or 3")
    if F.is_zero() or G.is_zero():
        raise ValueError("multiplicity needs nonzero polynomials")
    p = _point(p)

    def run(F, G, p):
        Fb, Gb = _shifted(F, G, p)
        return _halphen_at_origin(Fb, Gb, form, order, retries)

    value, trace = _run_split(run, F, G, p)
    return MultiplicityResult(value, _FORMS[form], trace)


# ---------------------------------------------------------------------------
# jet oracle
# ---------------------------------------------------------------------------

def _jet_dims(Fb, Gb, nmax):
    """dim of C[x,y]_{<N} modulo truncated multiples of Fb, Gb, for N <= nmax.

    One elimination at ``nmax`` suffices: with columns in graded order and the
    pivot taken at the lowest column, the pivots below degree N span exactly
    the truncation of the ideal to degree < N.
    """
    def idx(i, j):
        d = i + j
        return d * (d + 1) // 2 + j

    pivots = {}
    for P in (Fb, Gb):
        terms = list(P.items())
        ordp = min(i + j for (i, j), _ in terms)
        for s in range(max(nmax - ordp, 0)):
            for a in range(s + 1):
                b = s - a
                row = {}
                for (i, j), c in terms:
                    if i + j + s < nmax:
                        row[idx(i + a, j + b)] = c
                while row:
                    col = min(row)
                    piv = pivots.get(col)
                    if piv is None:
                        inv = 1 / row[col]
                        pivots[col] = {k: v * inv for k, v in row.items()}
                        break
                    f = row[col]
                    for k, v in piv.items():
                        nv = row.get(k, 0) - f * v
                        if nv == 0:
                            row.pop(k, None)
                        else:
                            row[k] = nv
    dims = []
    for N in range(nmax + 1):
        total = N * (N + 1) // 2
        dims.append(total - sum(1 for c in pivots if c < total))
    return dims


def _jet_at_origin(Fb, Gb):
    bound = max(Fb.degree, 1) * max(Gb.degree, 1)
    cap = bound + 2
    nmax = min(8, cap)
    while True:
        dims = _jet_dims(Fb, Gb, nmax)
        for N in range(nmax):
            if dims[N] == dims[N + 1]:
                return dims[N], {"stable_at": N, "dims": dims[: N + 2]}
        if nmax >= cap:
            return INFINITE, {"dims": dims, "reason": "no stabilization"}
        nmax = min(2 * nmax, cap)


def jet_oracle_multiplicity(F: BiPoly, G: BiPoly, p=None) -> MultiplicityResult:
    """I_p(F, G) as the stabilized codimension of the ideal in truncated jets.

    If the dimensions at N and N + 1 agree, Nakayama's lemma gives
    m^N inside the ideal, so the value is final; the search gives up (and
    reports infinity) past deg F * deg G + 2.
    """
    if F.is_zero() or G.is_zero():
        raise ValueError("multiplicity needs nonzero polynomials")
    p = _point(p)

    def run(F, G, p):
        return _jet_at_origin(*_shifted(F, G, p))

    value, trace = _run_split(run, F, G, p)
    return MultiplicityResult(value, JET_ORACLE, trace)


def intersection_multiplicity(F, G, p=None, method="halphen", form=1):
    if method == "jet":
        return jet_oracle_multiplicity(F, G, p)
    return halphen_multiplicity(F, G, p, form)


def bezout_sum_check(F: BiPoly, G: BiPoly, points):
    """(sum of I_p over the given points <= deg F * deg G, the sum)."""
    total = 0
    for p in points:
        res = halphen_multiplicity(F, G, p)
        if res.is_infinite:
            raise ValueError(f"infinite multiplicity at {p}")
        total += res.value
    return total <= F.degree * G.degree, total
