import io
import json
import random
from fractions import Fraction

import pytest

from puiseuxmult.bounds import (
    assembly_bound,
    gabrielov_bound,
    hajos_cap,
    sum_val_bound,
    theorem_bound,
    verify_theorem_instance,
)
from puiseuxmult.campaign import (
    ExperimentConfig,
    degenerate_family,
    fgplus1_search,
    planted_instance,
    instance_rng,
    theorem_campaign,
)
from puiseuxmult.cli import run_cli
from puiseuxmult.errors import ParseError
from puiseuxmult.identities import hajos_max_multiplicity
from puiseuxmult.parser import parse_poly, render_poly
from puiseuxmult.report import SCHEMA, dumps, to_jsonable
from puiseuxmult.tower import adjoin_root

from helpers import NEWTON_TEXT, P, U, u, x, y

Q = Fraction


# -- parser

def test_parse_examples():
    spec = parse_poly("x - y")
    assert (spec.t, spec.d) == (2, 1)
    spec = parse_poly("x^6 - y^3")
    assert (spec.t, spec.d) == (2, 6)
    assert parse_poly("3/4*x*y - 2").poly == Q(3, 4) * x * y - 2
    assert parse_poly("-(x + 1)^2").poly == -((x + 1) ** 2)


def test_parse_worked_example():
    F = parse_poly(NEWTON_TEXT).poly
    cols = F.y_coeffs()
    assert cols[1] == U("x^3 - 3*x^4 + 3*x^5 - x^6")
    assert set(cols) == {1, 2, 3, 4, 5, 6, 7}


XY, X = ("x", "y"), ("x",)


@pytest.mark.parametrize(
    "text,variables,message,pos",
    [
        ("x - ", XY, "unexpected end of input", 4),
        ("x^-2", XY, "negative exponent", 2),
        ("z + 1", XY, "unknown variable 'z'", 0),
        ("x + y", X, "unknown variable 'y'", 4),
        ("(x + 1", XY, "expected ')'", 6),
        ("x y", XY, "unexpected 'y'", 2),
        ("1/0", XY, "zero denominator", 2),
        ("x + -1", XY, "unexpected '-'", 4),
    ],
)
def test_parse_errors(text, variables, message, pos):
    with pytest.raises(ParseError) as info:
        parse_poly(text, variables)
    assert info.value.position == pos
    assert message in str(info.value)


def _random_expr(rng, depth=0):
    kind = rng.random()
    if depth > 2 or kind < 0.35:
        atom = rng.choice(["x", "y", str(rng.randint(0, 9)), f"{rng.randint(1, 9)}/{rng.randint(1, 5)}"])
        return atom + (f"^{rng.randint(0, 4)}" if rng.random() < 0.3 else "")
    if kind < 0.6:
        ops = [rng.choice([" + ", " - ", "*"]) for _ in range(rng.randint(1, 3))]
        parts = [_random_expr(rng, depth + 1) for _ in range(len(ops) + 1)]
        text = parts[0]
        for op, part in zip(ops, parts[1:]):
            text += op + part
        return text
    inner = "(" + _random_expr(rng, depth + 1) + ")"
    return inner + (f"^{rng.randint(0, 3)}" if rng.random() < 0.5 else "")


def test_round_trip_corpus():
    rng = random.Random(20240601)
    for _ in range(500):
        text = _random_expr(rng)
        if rng.random() < 0.3:
            text = "-" + text
        poly = parse_poly(text).poly
        assert parse_poly(render_poly(poly)).poly == poly, text


def test_univariate_round_trip():
    f = U("(x - 1)^3 + 1/2*x^7")
    assert parse_poly(render_poly(f), ("x",)).poly == f


# -- bounds

def test_bound_formulas():
    assert theorem_bound(1, 1) == Q(5, 2)
    assert theorem_bound(2, 3) == theorem_bound(3, 2) == 90
    assert gabrielov_bound(2, 3) == 216
    assert gabrielov_bound(1, 1) == 2
    assert gabrielov_bound(2, 2) == 18
    assert sum_val_bound(2, 2) == 18
    assert assembly_bound(2, 2) == 20
    assert hajos_cap(3) == 9
    for bad in ((0, 1), (1, 0), (-1, 2)):
        with pytest.raises(ValueError):
            theorem_bound(*bad)


def test_assembly_bound_is_sharper():
    for d in range(1, 8):
        for t in range(1, 8):
            assert assembly_bound(d, t) <= theorem_bound(d, t)


def test_verify_instance_examples():
    rep = verify_theorem_instance(parse_poly("y - x^2"), parse_poly("y - x"), (1, 1))
    assert rep["multiplicity"] == 1 and rep["agree"]
    assert rep["verdicts"][0]["rhs"] == theorem_bound(2, 2)
    rep = verify_theorem_instance(x - y, x**6 - y**3, (1, 1))
    assert 1 <= rep["multiplicity"] <= theorem_bound(1, 2) == 10
    assert all(v["ok"] for v in rep["verdicts"])
    for v in rep["verdicts"]:
        assert {"formula", "lhs", "rhs", "ok"} <= set(v)


def test_verify_instance_refuses_axes():
    with pytest.raises(ValueError, match="nonzero coordinates"):
        verify_theorem_instance(x - y, x**6 - y**3, (0, 0))
    with pytest.raises(ValueError):
        verify_theorem_instance((y - x) * (x + 3), (y - x) * y, (1, 1))


def test_degenerate_family_grows():
    rows = degenerate_family([2, 5, 11, 20])
    assert [r["multiplicity"] for r in rows] == [2, 5, 11, 20]
    assert {(r["d"], r["t"]) for r in rows} == {(1, 2)}
    assert [r["verdict"]["ok"] for r in rows] == [True, True, False, False]


# -- campaigns

def test_planted_instances_vanish():
    cfg = ExperimentConfig(count=20)
    for i in range(20):
        F, G, p = planted_instance(instance_rng(cfg.seed, i), cfg)
        assert F.evaluate(p.a, p.b) == 0 and G.evaluate(p.a, p.b) == 0
        assert p.a != 0 and p.b != 0
        assert F.t <= cfg.t_cap and G.t <= cfg.t_cap and F.degree <= cfg.d_cap


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(t_cap=0)
    with pytest.raises(ValueError):
        ExperimentConfig(seed=-1)


def test_campaign_is_deterministic():
    cfg = ExperimentConfig(seed=11, count=12)
    a = dumps(theorem_campaign(cfg))
    assert a == dumps(theorem_campaign(cfg))
    assert a == dumps(theorem_campaign(ExperimentConfig(seed=11, count=12, workers=2)))
    assert a != dumps(theorem_campaign(ExperimentConfig(seed=12, count=12)))
    data = json.loads(a)
    assert data["schema"] == SCHEMA and not data["summary"]["violations"]


def test_fgplus1_examples():
    assert hajos_max_multiplicity((u - 1) * (u - 1) + 1) == 1
    assert hajos_max_multiplicity(u * (-u) + 1) == 1
    assert hajos_max_multiplicity(u * (u - 2) + 1) == 2


def test_fgplus1_search():
    rep = fgplus1_search(ExperimentConfig(seed=3, count=300, t_cap=3, exp_cap=4, coeff_range=2))
    s = rep["summary"]
    assert not s["violations"]
    assert 1 <= s["observed_max"] <= s["cap"] == 9
    assert all(ex["multiplicity"] == s["observed_max"] for ex in s["extremal"])
    for ex in s["extremal"]:
        f, g = U(ex["f"]), U(ex["g"])
        assert U(ex["h"]) == f * g + 1


# -- reports

def test_json_encoding():
    z = adjoin_root([-2, 0, 1])
    data = to_jsonable({"q": Q(3, 4), "inf": float("inf"), "alg": z + 1, "poly": x - y})
    assert data["q"] == "3/4" and data["inf"] == "inf"
    assert data["alg"] == {"tower": ["z1^2 - 2"], "rep": "z1 + 1"}
    assert data["poly"] == "x - y"
    text = dumps({"b": 1, "a": 2})
    assert text.index('"a"') < text.index('"b"')


# -- CLI

def cli(*argv):
    out = io.StringIO()
    code = run_cli(list(argv), out)
    return code, out.getvalue()


def test_cli_imult():
    assert cli("imult", "--F", "x - y", "--G", "x^6 - y^3", "--point", "0,0") == (0, "3\n")
    assert cli("imult", "--F", "x - 1", "--G", "y^3 + x - 1", "--point", "1,0", "--form", "3") == (0, "3\n")
    assert cli("imult", "--F", "(y-x)*(y+1)", "--G", "(y-x)*(x+1)", "--method", "jet") == (0, "inf\n")


def test_cli_rk_and_rbar():
    assert cli("rk", "--k", "1") == (0, "-x[1,0]\n")
    assert cli("rbar", "--k", "0", "--l", "1") == (0, "x[0,2]/2\n")


def test_cli_polygon():
    code, text = cli("polygon", "--F", NEWTON_TEXT)
    assert code == 0
    assert "points: (1,3) (2,2) (3,1) (4,1) (5,3) (6,2) (7,2)" in text
    assert "m = 1, positive roots = 3" in text


def test_cli_other_commands(tmp_path):
    code, text = cli("expand", "--F", "y^2 - 2*x^3")
    assert code == 0 and "z1^2 - 2" in text
    code, text = cli("wronskian", "--exponent", "1/2", "--exponent", "2")
    assert code == 0 and "val W = 3/2" in text
    assert cli("hajos", "--f", "x^3 - 3*x^2 + 3*x - 1") == (0, "3\n")
    code, text = cli("verify-bound", "--F", "y - x^2", "--G", "y - x", "--point", "1,1")
    assert code == 0 and "PASS theorem" in text
    path = tmp_path / "r.json"
    code, _ = cli("search-fgplus1", "--count", "50", "--seed", "5", "--json", str(path))
    assert code == 0 and json.loads(path.read_text())["schema"] == SCHEMA


def test_cli_json_is_deterministic():
    a = cli("verify-bound", "--count", "5", "--seed", "9", "--json", "-")
    b = cli("verify-bound", "--count", "5", "--seed", "9", "--json", "-")
    assert a == b and a[0] == 0


def test_cli_exit_codes():
    assert cli("imult", "--F", "x - ", "--G", "y")[0] == 1
    assert cli("verify-bound", "--F", "x - y", "--G", "x^6 - y^3", "--point", "0,0")[0] == 1
    assert cli("imult", "--F", "x")[0] == 2
    assert cli("frobnicate")[0] == 2
    assert cli("imult", "--F", "x", "--G", "y", "--point", "1")[0] == 2
