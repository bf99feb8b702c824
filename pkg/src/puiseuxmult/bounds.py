"""Multiplicity bound formulas and single-instance verification."""

from __future__ import annotations

from fractions import Fraction

from .multiplicity import (
    Point,
    halphen_multiplicity,
    is_infinite,
    jet_oracle_multiplicity,
)
from .parser import PolySpec
from .report import SCHEMA, verdict

__all__ = [
    "theorem_bound",
    "gabrielov_bound",
    "assembly_bound",
    "sum_val_bound",
    "hajos_cap",
    "verify_theorem_instance",
]


def _positive(**kw):
    for name, v in kw.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v!r}")


def theorem_bound(d: int, t: int) -> Fraction:
    """(5/2) d^2 t^2 for F of degree d and G with t monomials."""
    _positive(d=d, t=t)
    return Fraction(5 * d * d * t * t, 2)


def gabrielov_bound(n: int, t: int) -> int:
    _positive(n=n, t=t)
    return 2 ** (t * (t - 1) // 2) * (min(n, t) + 1) ** t


def sum_val_bound(d: int, t: int) -> Fraction:
    _positive(d=d, t=t)
    return Fraction(d * (4 * d + 1) * t * (t - 1), 2)


def assembly_bound(d: int, t: int) -> Fraction:
    """d(t-1) + d(4d+1)t(t-1)/2, the sharper form the main bound rounds up."""
    return d * (t - 1) + sum_val_bound(d, t)


def hajos_cap(t: int) -> int:
    """Multiplicity cap for a nonzero root of f*g + 1 when f, g have <= t terms."""
    _positive(t=t)
    return t * t


def _poly(spec):
    return spec.poly if isinstance(spec, PolySpec) else spec


def verify_theorem_instance(F, G, p, form: int = 1, order=None) -> dict:
    """Check I_p(F, G) against the degree/sparsity bound at a point off the axes.

    ``F`` and ``G`` may be :class:`PolySpec` or ``BiPoly``.  The multiplicity
    is computed twice (parametrization formula and jet oracle) and the report
    records whether they agree.
    """
    Fp, Gp = _poly(F), _poly(G)
    p = p if isinstance(p, Point) else Point(*p)
    if p.a == 0 or p.b == 0:
        raise ValueError(
            "the bound needs a point with nonzero coordinates: at the origin "
            "I(x - y, x^(2n) - y^n) = n grows with n while deg F and the "
            "monomial count of G stay fixed"
        )
    if is_infinite(Fp, Gp, p):
        raise ValueError("F and G share a component through the point")
    d, t = Fp.degree, Gp.t
    if d < 1:
        raise ValueError("F must be nonconstant")
    halphen = halphen_multiplicity(Fp, Gp, p, form=form, order=order)
    jet = jet_oracle_multiplicity(Fp, Gp, p)
    value = halphen.value
    return {
        "schema": SCHEMA,
        "F": Fp.to_text(),
        "G": Gp.to_text(),
        "point": [p.a, p.b],
        "d": d,
        "t": t,
        "multiplicity": value,
        "methods": {halphen.method: value, jet.method: jet.value},
        "agree": value == jet.value,
        "trace": halphen.trace,
        "verdicts": [
            verdict("theorem: I_p <= 5/2 d^2 t^2", value, theorem_bound(d, t)),
            verdict("assembly: I_p <= d(t-1) + d(4d+1)t(t-1)/2", value, assembly_bound(d, t)),
        ],
    }
