"""Command-line interface: ``python3 -m puiseuxmult <command> ...``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .bounds import verify_theorem_instance
from .campaign import ExperimentConfig, fgplus1_search, theorem_campaign
from .errors import ParseError, TruncationExhausted
from .identities import build_R, build_Rbar, hajos_max_multiplicity
from .multiplicity import INFINITE, halphen_multiplicity, jet_oracle_multiplicity
from .newton import expand_branches, newton_polygon
from .parser import parse_poly
from .report import SCHEMA, dumps
from .series import PuiseuxSeries, wronskian
from .tower import join_towers, tower_of

__all__ = ["build_parser", "run_cli", "main"]


class _UsageError(Exception):
    pass


def _point(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"point must be 'a,b', got {text!r}")
    try:
        return tuple(Fraction(s.strip()) for s in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"bad point coordinate in {text!r}") from exc


def _bi(text):
    return parse_poly(text).poly


def _fmt(v):
    if v == INFINITE:
        return "inf"
    return str(v)


def _emit(args, report, out):
    if args.json is None:
        return
    text = dumps(report)
    if args.json == "-":
        out.write(text)
    else:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_imult(args, out):
    F, G = _bi(args.F), _bi(args.G)
    p = _point(args.point)
    if args.method == "jet":
        res = jet_oracle_multiplicity(F, G, p)
    else:
        res = halphen_multiplicity(F, G, p, form=args.form, order=args.order)
    print(_fmt(res.value), file=out)
    _emit(args, {"schema": SCHEMA, "F": F, "G": G, "point": list(p), "value": res.value,
                 "method": res.method, "trace": res.trace}, out)
    return 0


def cmd_polygon(args, out):
    F = _bi(args.F)
    poly = newton_polygon(F)
    print("points: " + " ".join(f"({k},{v})" for k, v in poly.points), file=out)
    print("hull vertices: " + " ".join(f"({k},{v})" for k, v in poly.vertices), file=out)
    print(f"{'slope':>8} {'length':>6}  start -> end", file=out)
    for e in poly.edges:
        print(f"{str(e.slope):>8} {e.length:>6}  {e.start} -> {e.end}", file=out)
    print(f"m = {poly.m}, positive roots = {poly.positive_count}", file=out)
    _emit(args, {
        "schema": SCHEMA,
        "F": F,
        "points": [list(pt) for pt in poly.points],
        "vertices": [list(v) for v in poly.vertices],
        "edges": [{"slope": e.slope, "length": e.length, "start": list(e.start), "end": list(e.end)}
                  for e in poly.edges],
        "m": poly.m,
        "positive_count": poly.positive_count,
    }, out)
    return 0


def cmd_expand(args, out):
    F = _bi(args.F)
    order = args.order if args.order is not None else 4
    branches = expand_branches(F, order, all_branches=args.all)
    rows = []
    for br in branches:
        moduli = join_towers(*(tower_of(c) for c in br.series.coefficients_iter())).moduli_text()
        line = f"{br.series.to_text()}  [multiplicity {br.multiplicity}, conjugates {br.count}]"
        if moduli:
            line += "  where " + ", ".join(moduli)
        print(line, file=out)
        rows.append({"series": br.series, "multiplicity": br.multiplicity, "count": br.count,
                     "moduli": moduli})
    _emit(args, {"schema": SCHEMA, "F": F, "order": order, "branches": rows}, out)
    return 0


def cmd_wronskian(args, out):
    series = []
    for text in args.S or []:
        series.append(PuiseuxSeries.from_poly(parse_poly(text, ("x",)).poly))
    for text in args.exponents or []:
        series.append(PuiseuxSeries.monomial(1, Fraction(text)))
    if not series:
        raise _UsageError("give at least one --S or --exponent")
    W = wronskian(series)
    tv = W.val()
    print(f"W = {W.to_text()}", file=out)
    print(f"val W = {_fmt(tv.value)}", file=out)
    _emit(args, {"schema": SCHEMA, "series": series, "wronskian": W, "val": tv.value}, out)
    return 0


def cmd_hajos(args, out):
    f = parse_poly(args.f, ("x",)).poly
    mult = hajos_max_multiplicity(f)
    print(mult, file=out)
    _emit(args, {"schema": SCHEMA, "f": f, "t": f.t, "multiplicity": mult}, out)
    return 0


def cmd_rk(args, out):
    if args.k < 1:
        raise _UsageError("--k must be at least 1")
    R = build_R(args.k)
    print(R.to_text(), file=out)
    _emit(args, {"schema": SCHEMA, "k": args.k, "R": R.to_text(), "degree": R.degree}, out)
    return 0


def cmd_rbar(args, out):
    if args.k < 0 or args.l < 0 or args.k + args.l < 1:
        raise _UsageError("need k, l >= 0 with k + l >= 1")
    R = build_Rbar(args.k, args.l)
    print(R.to_text(), file=out)
    _emit(args, {"schema": SCHEMA, "k": args.k, "l": args.l, "Rbar": R.to_text(),
                 "denominator": R.denominator, "degree": R.degree}, out)
    return 0


def _print_verdicts(verdicts, out):
    ok = True
    for v in verdicts:
        ok &= v["ok"]
        mark = "PASS" if v["ok"] else "FAIL"
        print(f"{mark} {v['formula']}: {_fmt(v['lhs'])} {v['relation']} {_fmt(v['rhs'])}", file=out)
    return ok


def cmd_verify_bound(args, out):
    if args.F is None and args.G is None:
        cfg = ExperimentConfig(seed=args.seed, count=args.count, order_cap=args.order,
                               workers=args.workers)
        report = theorem_campaign(cfg)
        s = report["summary"]
        print(f"instances: {s['count']}, max multiplicity: {s['max_multiplicity']}", file=out)
        print(f"violations: {len(s['violations'])}, oracle disagreements: {len(s['disagreements'])}",
              file=out)
        _emit(args, report, out)
        return 0 if not s["violations"] and not s["disagreements"] else 1
    if args.F is None or args.G is None or args.point is None:
        raise _UsageError("verify-bound needs --F, --G and --point (or neither F nor G for a campaign)")
    report = verify_theorem_instance(_bi(args.F), _bi(args.G), _point(args.point),
                                     form=args.form, order=args.order)
    print(f"I_p = {_fmt(report['multiplicity'])} (oracle agrees: {report['agree']})", file=out)
    ok = _print_verdicts(report["verdicts"], out)
    _emit(args, report, out)
    return 0 if ok and report["agree"] else 1


def cmd_search_fgplus1(args, out):
    cfg = ExperimentConfig(seed=args.seed, t_cap=args.t_cap, exp_cap=args.exp_cap,
                           coeff_range=args.coeff_range, count=args.count, workers=args.workers)
    report = fgplus1_search(cfg)
    s = report["summary"]
    print(f"instances: {s['count']}, observed max multiplicity: {s['observed_max']}, cap t^2 = {s['cap']}",
          file=out)
    for ex in s["extremal"][:3]:
        print(f"  f = {ex['f']}, g = {ex['g']}: multiplicity {ex['multiplicity']}", file=out)
    _emit(args, report, out)
    return 0 if not s["violations"] else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order", type=int, default=None, help="initial expansion order")
    common.add_argument("--json", metavar="PATH", default=None, help="write a JSON report ('-' for stdout)")
    common.add_argument("--form", type=int, choices=(1, 2, 3), default=1)

    parser = argparse.ArgumentParser(prog="puiseuxmult", description="Local intersection multiplicities "
                                     "of plane curves via Puiseux expansions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("imult", parents=[common], help="intersection multiplicity at a point")
    p.add_argument("--F", required=True)
    p.add_argument("--G", required=True)
    p.add_argument("--point", default="0,0")
    p.add_argument("--method", choices=("halphen", "jet"), default="halphen")
    p.set_defaults(fn=cmd_imult)

    p = sub.add_parser("polygon", parents=[common], help="Newton polygon of F in y")
    p.add_argument("--F", required=True)
    p.set_defaults(fn=cmd_polygon)

    p = sub.add_parser("expand", parents=[common], help="Puiseux roots of F in y")
    p.add_argument("--F", required=True)
    p.add_argument("--all", action="store_true", help="include roots of nonpositive valuation")
    p.set_defaults(fn=cmd_expand)

    p = sub.add_parser("wronskian", parents=[common], help="Wronskian of series")
    p.add_argument("--S", action="append", help="polynomial in x (repeatable)")
    p.add_argument("--exponent", dest="exponents", action="append", help="monomial x^a (repeatable)")
    p.set_defaults(fn=cmd_wronskian)

    p = sub.add_parser("hajos", parents=[common], help="largest multiplicity of a nonzero root")
    p.add_argument("--f", required=True, help="polynomial in x")
    p.set_defaults(fn=cmd_hajos)

    p = sub.add_parser("rk", parents=[common], help="print R_k")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(fn=cmd_rk)

    p = sub.add_parser("rbar", parents=[common], help="print R-bar_{k,l}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.set_defaults(fn=cmd_rbar)

    p = sub.add_parser("verify-bound", parents=[common], help="check the multiplicity bound")
    p.add_argument("--F")
    p.add_argument("--G")
    p.add_argument("--point")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_verify_bound)

    p = sub.add_parser("search-fgplus1", parents=[common], help="multiplicities of f*g + 1")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--t-cap", type=int, default=3)
    p.add_argument("--exp-cap", type=int, default=4)
    p.add_argument("--coeff-range", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_search_fgplus1)
    return parser


def run_cli(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, TruncationExhausted, ArithmeticError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())
