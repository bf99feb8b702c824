"""Deterministic JSON reports."""

from __future__ import annotations

import json
import math
from fractions import Fraction

from .poly import BiPoly, UniPoly
from .series import PuiseuxSeries
from .tower import TowerElement

__all__ = ["SCHEMA", "to_jsonable", "dumps", "verdict"]

SCHEMA = "imult-report/1"


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, TowerElement):
        return {"tower": obj.tower.moduli_text(), "rep": obj.to_text()}
    if isinstance(obj, (BiPoly, UniPoly, PuiseuxSeries)):
        return obj.to_text()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_text"):
        return obj.to_text()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def verdict(formula, lhs, rhs, relation="<="):
    """One inequality check with both sides recorded."""
    if relation == "<=":
        ok = lhs <= rhs
    elif relation == "==":
        ok = lhs == rhs
    elif relation == ">":
        ok = lhs > rhs
    else:
        raise ValueError(f"unknown relation {relation!r}")
    return {"formula": formula, "lhs": lhs, "rhs": rhs, "relation": relation, "ok": bool(ok)}
