"""Seeded verification campaigns.

Every instance draws from its own ``random.Random(f"{seed}:{index}")`` so a
run is reproducible from ``(seed, config)`` regardless of worker count.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

from .bounds import hajos_cap, theorem_bound, verify_theorem_instance
from .identities import hajos_max_multiplicity
from .multiplicity import Point, halphen_multiplicity, is_infinite
from .poly import BiPoly, UniPoly
from .report import SCHEMA, verdict

__all__ = [
    "ExperimentConfig",
    "instance_rng",
    "random_sparse_bipoly",
    "random_sparse_unipoly",
    "random_nonzero_rational",
    "planted_instance",
    "theorem_campaign",
    "fgplus1_search",
    "degenerate_family",
]


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    t_cap: int = 4
    d_cap: int = 3
    exp_cap: int = 8
    coeff_range: int = 5
    count: int = 200
    order_cap: int | None = None
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name in ("t_cap", "d_cap", "exp_cap", "coeff_range", "count", "workers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.order_cap is not None and self.order_cap < 1:
            raise ValueError("order_cap must be positive")


def instance_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{index}")


def _coeff(rng, bound):
    c = rng.randint(1, bound)
    return c if rng.random() < 0.5 else -c


def random_nonzero_rational(rng, bound=3) -> Fraction:
    return Fraction(_coeff(rng, bound), rng.randint(1, 2))


def random_sparse_bipoly(rng, d_cap, t, coeff_range, constant=True) -> BiPoly:
    """At most ``t`` monomials of total degree <= ``d_cap``."""
    pool = [(i, s - i) for s in range(0 if constant else 1, d_cap + 1) for i in range(s + 1)]
    support = rng.sample(pool, min(t, len(pool)))
    return BiPoly({m: Fraction(_coeff(rng, coeff_range)) for m in support})


def random_sparse_unipoly(rng, exp_cap, t, coeff_range) -> UniPoly:
    support = rng.sample(range(exp_cap + 1), min(t, exp_cap + 1))
    return UniPoly({e: Fraction(_coeff(rng, coeff_range)) for e in support})


def _solve(rows, rhs):
    """Gaussian elimination over the rationals; None when singular."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


_CONDITIONS = ((0, 0), (1, 0), (0, 1))


def _planted(rng, d_cap, t, coeff_range, p, singular=False):
    """At most t monomials vanishing at p, and singular there if requested."""
    if not singular:
        # t - 1 nonconstant monomials; subtracting the value at p keeps t terms
        P0 = random_sparse_bipoly(rng, d_cap, t - 1, coeff_range, constant=False)
        return P0 - P0.evaluate(p.a, p.b)
    while True:
        P = random_sparse_bipoly(rng, d_cap, t, coeff_range)
        support = sorted(P.support)
        free = rng.sample(support, len(_CONDITIONS))
        fixed = BiPoly({m: c for m, c in P.items() if m not in free})
        rows = [[BiPoly.monomial(1, *m).partial(*c).evaluate(p.a, p.b) for m in free] for c in _CONDITIONS]
        rhs = [-fixed.partial(*c).evaluate(p.a, p.b) for c in _CONDITIONS]
        sol = _solve(rows, rhs)
        if sol is None:
            continue
        P = fixed + BiPoly(dict(zip(free, sol)))
        if P.degree > 0:
            return P


def _draw(rng, cfg, p):
    t = rng.randint(2, max(2, cfg.t_cap))
    singular = t > len(_CONDITIONS) and cfg.d_cap >= 2 and rng.random() < 0.4
    return _planted(rng, cfg.d_cap, t, cfg.coeff_range, p, singular)


def planted_instance(rng, cfg: ExperimentConfig, max_tries: int = 100):
    """(F, G, p) with F(p) = G(p) = 0, p off the axes, I_p(F, G) finite."""
    for _ in range(max_tries):
        p = Point(random_nonzero_rational(rng), random_nonzero_rational(rng))
        F = _draw(rng, cfg, p)
        G = _draw(rng, cfg, p)
        if not is_infinite(F, G, p):
            return F, G, p
    raise RuntimeError("could not draw an instance with finite multiplicity")


def _theorem_task(args):
    cfg, index = args
    rng = instance_rng(cfg.seed, index)
    F, G, p = planted_instance(rng, cfg)
    start = time.perf_counter()
    rec = verify_theorem_instance(F, G, p, order=cfg.order_cap)
    rec.pop("schema", None)
    rec["index"] = index
    return rec, time.perf_counter() - start


def _run(task, cfg):
    jobs = [(cfg, i) for i in range(cfg.count)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(task, jobs))
    return [task(j) for j in jobs]


def _base_report(kind, cfg):
    config = asdict(cfg)
    # the worker count does not affect results, so reports stay byte-identical
    config.pop("workers")
    return {"schema": SCHEMA, "kind": kind, "seed": cfg.seed, "config": config}


def theorem_campaign(cfg: ExperimentConfig, timings: bool = False) -> dict:
    """Planted-zero instances checked against the main bound and its sharper form."""
    results = _run(_theorem_task, cfg)
    records = [r for r, _ in results]
    violations = [r["index"] for r in records if not all(v["ok"] for v in r["verdicts"])]
    disagreements = [r["index"] for r in records if not r["agree"]]
    report = _base_report("theorem-campaign", cfg)
    report["instances"] = records
    report["summary"] = {
        "count": len(records),
        "violations": violations,
        "disagreements": disagreements,
        "max_multiplicity": max((r["multiplicity"] for r in records), default=0),
    }
    if timings:
        report["timings"] = {"per_instance": [round(s, 6) for _, s in results]}
    return report


def _fg_task(args):
    cfg, index = args
    rng = instance_rng(cfg.seed, index)
    t = rng.randint(1, cfg.t_cap)
    while True:
        f = random_sparse_unipoly(rng, cfg.exp_cap, t, cfg.coeff_range)
        g = random_sparse_unipoly(rng, cfg.exp_cap, t, cfg.coeff_range)
        h = f * g + UniPoly.constant(1)
        if not h.is_zero():
            break
    start = time.perf_counter()
    mult = hajos_max_multiplicity(h)
    rec = {
        "index": index,
        "t": t,
        "f": f.to_text(),
        "g": g.to_text(),
        "h": h.to_text(),
        "multiplicity": mult,
        "verdict": verdict("hajos cap: mult <= t^2", mult, hajos_cap(t)),
    }
    return rec, time.perf_counter() - start


def fgplus1_search(cfg: ExperimentConfig, timings: bool = False, keep: int = 10) -> dict:
    """Largest nonzero-root multiplicity of f*g + 1 over random sparse f, g."""
    results = _run(_fg_task, cfg)
    records = [r for r, _ in results]
    best = max((r["multiplicity"] for r in records), default=0)
    report = _base_report("fgplus1-search", cfg)
    report["instances"] = records
    report["summary"] = {
        "count": len(records),
        "observed_max": best,
        "cap": hajos_cap(cfg.t_cap),
        "violations": [r["index"] for r in records if not r["verdict"]["ok"]],
        "extremal": [r for r in records if r["multiplicity"] == best][:keep],
    }
    if timings:
        report["timings"] = {"per_instance": [round(s, 6) for _, s in results]}
    return report


def degenerate_family(ns, which: str = "origin") -> list:
    """Multiplicities on the axis families where the bound pattern fails.

    ``origin``: I_(0,0)(x - y, x^(2n) - y^n) = n with d = 1, t = 2.
    ``axis``: I_(1,0)(x - 1, y^n + x - 1) = n with d = 1, t = 3.
    """
    x, y = BiPoly.x(), BiPoly.y()
    rows = []
    for n in ns:
        if which == "origin":
            F, G, p = x - y, x ** (2 * n) - y**n, Point(0, 0)
        elif which == "axis":
            F, G, p = x - 1, y**n + x - 1, Point(1, 0)
        else:
            raise ValueError(f"unknown family {which!r}")
        value = halphen_multiplicity(F, G, p).value
        bound = theorem_bound(F.degree, G.t)
        rows.append({
            "n": n,
            "d": F.degree,
            "t": G.t,
            "multiplicity": value,
            "verdict": verdict("pattern: I_p <= 5/2 d^2 t^2", value, bound),
        })
    return rows
