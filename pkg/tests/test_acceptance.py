"""Acceptance criteria, one test per criterion.

Each test measures its own wall time and fails when the limit is exceeded;
``conftest.py`` prints a PASS/FAIL line per criterion after the run.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from puiseuxmult.bounds import assembly_bound, theorem_bound
from puiseuxmult.campaign import ExperimentConfig, degenerate_family, theorem_campaign
from puiseuxmult.identities import (
    build_R,
    build_Rbar,
    derivative_of_power,
    hajos_max_multiplicity,
    shift_positive_count,
    verify_root_derivative_identity,
)
from puiseuxmult.multiplicity import (
    INFINITE,
    bezout_sum_check,
    halphen_multiplicity,
    is_infinite,
    jet_oracle_multiplicity,
)
from puiseuxmult.newton import branch_values, expand_branches, newton_polygon, positive_valuation_count
from puiseuxmult.parser import parse_poly
from puiseuxmult.poly import AffineMap, BiPoly, UniPoly, compose_affine, gcd_bivariate
from puiseuxmult.series import PuiseuxSeries, wronskian
from puiseuxmult.tower import adjoin_root

Q = Fraction
x, y = BiPoly.x(), BiPoly.y()
S_ = PuiseuxSeries.from_exponents


@contextmanager
def within(limit):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"took {elapsed:.1f} s, limit {limit} s"


def rand_q(rng, bound=4, den=3, nonzero=True):
    while True:
        q = Q(rng.randint(-bound, bound), rng.randint(1, den))
        if q or not nonzero:
            return q


def rand_bipoly(rng, d, t, constant=True):
    pool = [(i, s - i) for s in range(0 if constant else 1, d + 1) for i in range(s + 1)]
    return BiPoly({m: rand_q(rng) for m in rng.sample(pool, min(t, len(pool)))})


def origin_pair(rng, d=4, t=5):
    """Random F, G through the origin with finite multiplicity there."""
    while True:
        F = rand_bipoly(rng, rng.randint(1, d), rng.randint(1, t), constant=False)
        G = rand_bipoly(rng, rng.randint(1, d), rng.randint(1, t), constant=False)
        if not is_infinite(F, G):
            return F, G


# ---------------------------------------------------------------------------

NEWTON_TEXT = "x*y*(y - x + x^2)^2*(y - 1 + x)*(x*y^3 - 1)"
NEWTON_COLUMNS = {
    1: "x^3 - 3*x^4 + 3*x^5 - x^6",
    2: "-2*x^2 + 3*x^3 - x^5",
    3: "x + x^2 - 2*x^3",
    4: "-x - x^4 + 3*x^5 - 3*x^6 + x^7",
    5: "2*x^3 - 3*x^4 + x^6",
    6: "-x^2 - x^3 + 2*x^4",
    7: "x^2",
}


@pytest.mark.criterion(1, "worked example: expansion, Newton polygon, positive root count", 1)
def test_criterion_1_worked_example():
    with within(1):
        F = parse_poly(NEWTON_TEXT).poly
        cols = F.y_coeffs()
        assert set(cols) == set(NEWTON_COLUMNS)
        for k, text in NEWTON_COLUMNS.items():
            assert cols[k] == parse_poly(text, ("x",)).poly
        poly = newton_polygon(F)
        assert set(poly.points) == {(1, 3), (2, 2), (3, 1), (4, 1), (5, 3), (6, 2), (7, 2)}
        assert [(e.slope, e.length) for e in poly.edges] == [(-1, 2), (0, 1), (Q(1, 3), 3)]
        assert poly.m == 1
        assert positive_valuation_count(F) == 3


@pytest.mark.criterion(2, "degenerate families have multiplicity n (formula and jet oracle)", 10)
def test_criterion_2_degenerate_families():
    with within(10):
        for n in range(1, 7):
            pairs = [
                (x - y, x ** (2 * n) - y**n, (0, 0)),
                (x - 1, y**n + x - 1, (1, 0)),
            ]
            for F, G, p in pairs:
                assert halphen_multiplicity(F, G, p).value == n
                assert jet_oracle_multiplicity(F, G, p).value == n


@pytest.mark.criterion(3, "three formula forms and the jet oracle agree on 100 random instances", 120)
def test_criterion_3_oracle_equivalence():
    rng = random.Random(3)
    with within(120):
        seen = set()
        for _ in range(100):
            F, G = origin_pair(rng)
            values = [halphen_multiplicity(F, G, form=f).value for f in (1, 2, 3)]
            values.append(jet_oracle_multiplicity(F, G).value)
            assert len(set(values)) == 1, (F, G, values)
            seen.add(values[0])
        assert len(seen) > 2


@pytest.mark.criterion(4, "lemma suite on 500 inputs each", 180)
def test_criterion_4_lemma_suite():
    rng = random.Random(4)
    u = UniPoly.x()
    with within(180):
        # root multiplicity of sparse polynomials
        for _ in range(500):
            f = UniPoly({e: rand_q(rng) for e in rng.sample(range(12), rng.randint(1, 5))})
            f = f * (u - rand_q(rng)) ** rng.randint(0, 3)
            assert hajos_max_multiplicity(f) <= f.t - 1

        # positive-valuation roots after shifting to a point off the axes
        done = 0
        while done < 500:
            a, b = rand_q(rng), rand_q(rng)
            G0 = rand_bipoly(rng, rng.randint(1, 4), rng.randint(1, 4), constant=False)
            G = G0 - G0.evaluate(a, b)
            if G.degree < 1:
                continue
            s = shift_positive_count(G, (a, b))
            assert s <= G.t - 1
            Gb = G.shift(a, b)
            expected = 0
            if Gb.deg_y:
                branches = expand_branches(Gb, 1)
                expected = sum(br.multiplicity * br.count for br in branches)
            assert s == expected
            done += 1

        def rand_series(nonneg=False):
            exps = rng.sample(range(0 if nonneg else -4, 12), rng.randint(1, 4))
            e = rng.randint(1, 3)
            return S_({Q(k, e): rand_q(rng) for k in exps})

        for _ in range(500):
            S, T = rand_series(), rand_series()
            assert S.derivative().val().value >= S.val().value - 1
            assert (S * T).val().value == S.val().value + T.val().value

        # sum valuation against the Wronskian, for nonnegative valuations
        checked = 0
        while checked < 500:
            n = rng.randint(1, 3)
            tup = [rand_series(nonneg=True) for _ in range(n)]
            W = wronskian(tup)
            total = sum(tup[1:], tup[0])
            if W.is_zero() or total.is_zero():
                continue
            assert total.val().value <= Q(n * (n - 1), 2) + W.val().value
            checked += 1

        for _ in range(500):
            n = rng.randint(1, 4)
            alphas = [Q(k, 60) for k in rng.sample(range(1, 60), n)]
            W = wronskian([S_({a: 1}) for a in alphas])
            assert W.val().value == sum(alphas) - Q(n * (n - 1), 2)


@pytest.mark.criterion(5, "symmetry, additivity, affine invariance and the x-divisibility rule", 120)
def test_criterion_5_laws():
    rng = random.Random(5)
    with within(120):
        for _ in range(50):
            F, G = origin_pair(rng, d=3, t=4)
            assert halphen_multiplicity(F, G).value == halphen_multiplicity(G, F).value

        done = 0
        while done < 50:
            F1, G = origin_pair(rng, d=3, t=4)
            F2 = rand_bipoly(rng, rng.randint(1, 2), rng.randint(1, 3))
            if F2.degree < 1 or is_infinite(F1 * F2, G):
                continue
            whole = halphen_multiplicity(F1 * F2, G).value
            assert whole == halphen_multiplicity(F1, G).value + halphen_multiplicity(F2, G).value
            done += 1

        done = 0
        while done < 50:
            F, G = origin_pair(rng, d=3, t=4)
            m = [rand_q(rng, nonzero=False) for _ in range(6)]
            if m[0] * m[3] == m[1] * m[2]:
                continue
            L = AffineMap(((m[0], m[1]), (m[2], m[3])), (m[4], m[5]))
            q = L.inverse()((0, 0))
            FL, GL = compose_affine(F, L), compose_affine(G, L)
            assert halphen_multiplicity(F, G).value == halphen_multiplicity(FL, GL, q).value
            done += 1

        for _ in range(50):
            F = x * rand_bipoly(rng, 2, 3)
            G = x * rand_bipoly(rng, 2, 3)
            res = halphen_multiplicity(F, G)
            assert res.value == INFINITE
            assert res.trace["m"] > 0 and res.trace["n"] > 0
            assert jet_oracle_multiplicity(F, G).value == INFINITE


def _identity_fixtures(rng, count):
    fixtures = []
    while len(fixtures) < count:
        F = rand_bipoly(rng, rng.randint(1, 3), rng.randint(2, 4), constant=False)
        if F.deg_y == 0 or gcd_bivariate(F, F.partial(0, 1)).deg_y > 0:
            continue
        branches = [br for br in expand_branches(F, 14) if br.series.terms]
        if branches:
            fixtures.append((F, branches))
    return fixtures


@pytest.mark.criterion(6, "R_k, R-bar_{k,l}, the root-derivative identity and the power-derivative forms", 120)
def test_criterion_6_derivative_machinery():
    rng = random.Random(6)
    with within(120):
        assert build_R(1).to_text() == "-x[1,0]"
        for k in range(1, 6):
            assert build_R(k).degree <= 2 * k - 1
        for k in range(6):
            for l in range(6):
                if 1 <= k + l <= 5:
                    assert build_Rbar(k, l).degree <= 2 * k + l

        for k in range(1, 5):
            assert verify_root_derivative_identity(y - x**2, S_({2: 1}), k)
            for br in expand_branches(y**2 - x**3, 12):
                assert verify_root_derivative_identity(y**2 - x**3, br, k)

        for F, branches in _identity_fixtures(rng, 20):
            for br in branches:
                for k in range(1, 5):
                    results = branch_values(br, lambda S: verify_root_derivative_identity(F, S, k))
                    assert all(ok for ok, _ in results), (F, br.series, k)

        S = S_({Q(1, 2): 2, 1: -1, Q(4, 3): 3, 3: Q(1, 2)})
        for n in range(1, 9):
            for k in range(0, 7):
                direct, structured, _ = derivative_of_power(S, n, k)
                assert direct == structured


@pytest.mark.criterion(7, "200 planted instances meet both bounds; the axis families break the pattern", 300)
def test_criterion_7_theorem_campaign():
    with within(300):
        report = theorem_campaign(ExperimentConfig(seed=7, count=200, d_cap=3, t_cap=4))
        summary = report["summary"]
        assert summary["count"] == 200
        assert summary["violations"] == [] and summary["disagreements"] == []
        for rec in report["instances"]:
            d, t, value = rec["d"], rec["t"], rec["multiplicity"]
            assert value <= assembly_bound(d, t) <= theorem_bound(d, t)

        rows = degenerate_family([6, 11, 16, 24, 40])
        assert [r["multiplicity"] for r in rows] == [6, 11, 16, 24, 40]
        assert all((r["d"], r["t"]) == (1, 2) for r in rows)
        assert [r["verdict"]["ok"] for r in rows] == [True, False, False, False, False]
        rows = degenerate_family([10, 23, 40], which="axis")
        assert [r["multiplicity"] for r in rows] == [10, 23, 40]
        assert [r["verdict"]["ok"] for r in rows] == [True, False, False]


def _line(a, b, c):
    return a * x + b * y + c


def _bezout_instances(rng, count):
    """(F, G, points, exact total) with every common zero known."""
    out = []
    while len(out) < count:
        if len(out) % 2 == 0:
            # two pencils of lines; every nonparallel pair meets once
            Ls = [(rand_q(rng), rand_q(rng), rand_q(rng, nonzero=False)) for _ in range(rng.randint(1, 3))]
            Ms = [(rand_q(rng), rand_q(rng), rand_q(rng, nonzero=False)) for _ in range(rng.randint(1, 3))]
            F = BiPoly.constant(1)
            for l in Ls:
                F = F * _line(*l)
            G = BiPoly.constant(1)
            for m in Ms:
                G = G * _line(*m)
            if gcd_bivariate(F, G).degree > 0:
                continue
            pts = set()
            pairs = 0
            for a1, b1, c1 in Ls:
                for a2, b2, c2 in Ms:
                    det = a1 * b2 - a2 * b1
                    if det == 0:
                        continue
                    pairs += 1
                    pts.add(((-c1 * b2 + c2 * b1) / det, (-a1 * c2 + a2 * c1) / det))
            if not pts:
                continue
            out.append((F, G, sorted(pts), pairs))
        else:
            # a graph y = f(x) against vertical lines with multiplicities
            f = UniPoly({e: rand_q(rng) for e in rng.sample(range(4), rng.randint(1, 3))})
            F = y - BiPoly({(e, 0): c for e, c in f.items()})
            roots = rng.sample(range(-4, 5), rng.randint(1, 3))
            G = BiPoly.constant(1)
            total = 0
            for r in roots:
                e = rng.randint(1, 3)
                G = G * (x - r) ** e
                total += e
            out.append((F, G, [(r, f(r)) for r in roots], total))
    return out


@pytest.mark.criterion(8, "Bezout sum on the three fixtures and 20 constructed instances", 60)
def test_criterion_8_bezout():
    rng = random.Random(8)
    with within(60):
        z = adjoin_root([Q(-1, 2), 0, 1])
        assert bezout_sum_check(x**2 + y**2 - 1, x - y, [(z, z), (-z, -z)]) == (True, 2)
        assert bezout_sum_check(y - x**2, y, [(0, 0)]) == (True, 2)
        w = adjoin_root([1, 1, 1])
        ok, total = bezout_sum_check(x - y, x**6 - y**3, [(0, 0), (1, 1), (w, w), (w * w, w * w)])
        assert ok and total == 6

        for F, G, pts, expected in _bezout_instances(rng, 20):
            ok, total = bezout_sum_check(F, G, pts)
            assert ok and total == expected, (F, G, pts)
