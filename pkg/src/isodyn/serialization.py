"""JSON encoding of schemes, points, model parameters and orbit records.

Rationals are ``{"n": "<numerator>", "d": "<denominator>"}``, infinity is
``{"inf": true}``, matrices are nested lists of rationals, and every top-level
document carries ``"isodyn-schema": 1``.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .dpmodels import FGPoint, INFINITY, ParamsA1, ParamsA2
from .exactalg import INF, RatMat, rat
from .fuchsian import DecompositionPoint, PoleData, RiemannScheme

SCHEMA_VERSION = 1


def rat_to_json(value) -> dict:
    if value is INF:
        return {"inf": True}
    value = rat(value)
    return {"n": str(value.numerator), "d": str(value.denominator)}


def rat_from_json(obj):
    """Accept the canonical dict form, an int, or a string such as ``"-3/4"`` or ``"inf"``."""
    if isinstance(obj, dict):
        if obj.get("inf"):
            return INF
        return Fraction(int(obj["n"]), int(obj["d"]))
    if isinstance(obj, str) and obj.strip().lower() in ("inf", "infinity", "oo"):
        return INF
    if isinstance(obj, float):
        raise TypeError("floating-point values are not accepted; use a rational string")
    return rat(obj)


def matrix_to_json(m: RatMat) -> list:
    return [[rat_to_json(v) for v in row] for row in m.tolist()]


def matrix_from_json(rows) -> RatMat:
    return RatMat([[rat_from_json(v) for v in row] for row in rows])


def scheme_to_json(scheme: RiemannScheme) -> dict:
    return {
        "isodyn-schema": SCHEMA_VERSION,
        "positions": [rat_to_json(p) for p in scheme.positions],
        "indices": [[rat_to_json(t) for t in row] for row in scheme.indices],
    }


def scheme_from_json(doc: dict) -> RiemannScheme:
    return RiemannScheme(
        tuple(rat_from_json(p) for p in doc["positions"]),
        tuple(tuple(rat_from_json(t) for t in row) for row in doc["indices"]),
    )


def point_to_json(point: DecompositionPoint) -> dict:
    return {
        "isodyn-schema": SCHEMA_VERSION,
        "poles": [
            {
                "z": rat_to_json(p.z),
                "b": matrix_to_json(p.b),
                "c": matrix_to_json(p.c),
                "thetas": [rat_to_json(t) for t in p.thetas],
            }
            for p in point.poles
        ],
        "theta_inf": [rat_to_json(t) for t in point.theta_inf],
    }


def point_from_json(doc: dict) -> DecompositionPoint:
    poles = tuple(
        PoleData(
            rat_from_json(p["z"]),
            matrix_from_json(p["b"]),
            matrix_from_json(p["c"]),
            tuple(rat_from_json(t) for t in p["thetas"]),
        )
        for p in doc["poles"]
    )
    return DecompositionPoint(poles, tuple(rat_from_json(t) for t in doc["theta_inf"]))


def params_to_json(params) -> dict:
    if isinstance(params, ParamsA2):
        return {"model": "a2", "b": [rat_to_json(v) for v in params.b]}
    if isinstance(params, ParamsA1):
        return {"model": "a1", "b0": rat_to_json(params.b0), "b": [rat_to_json(v) for v in params.b]}
    raise TypeError(f"not a model parameter set: {params!r}")


def params_from_json(doc: dict, model: str | None = None):
    model = model or doc.get("model")
    b = [rat_from_json(v) for v in doc["b"]]
    if model == "a2":
        return ParamsA2(tuple(b))
    if model == "a1":
        if "b0" not in doc:
            raise KeyError("a1 parameters need 'b0' (the parameter b) besides b1..b8")
        return ParamsA1(rat_from_json(doc["b0"]), tuple(b))
    raise ValueError(f"unknown model {model!r}; expected 'a2' or 'a1'")


def fg_to_json(pt: FGPoint) -> dict:
    return {"f": rat_to_json(pt.f), "g": rat_to_json(pt.g)}


def parse_fg(text: str) -> FGPoint:
    """Parse ``"f,g"`` where each entry is a rational string or ``inf``."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"expected 'f,g', got {text!r}")
    values = [INFINITY if p.lower() in ("inf", "infinity", "oo") else rat(p) for p in parts]
    return FGPoint(*values)


def orbit_record(n: int, params, pt: FGPoint) -> dict:
    return {"n": n, "f": rat_to_json(pt.f), "g": rat_to_json(pt.g), "params": params_to_json(params)}


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
