"""JSON (de)serialization for sequence specs; round-trips are bit-exact."""

from __future__ import annotations

import math
from typing import Any

from .core import SequenceSpec, Side, SpaceParams, SpecError, TailedSpec, TailKind


class ValidationError(SpecError):
    """Schema violation; carries a pointer to the offending field."""

    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


def tailed_to_json(t: TailedSpec) -> dict[str, Any]:
    if t.kind is TailKind.CONSTANT:
        return {"kind": "constant", "value": t.constant}
    if t.kind is TailKind.PERIODIC:
        return {"kind": "periodic", "values": list(t.values)}
    return {
        "kind": "table",
        "entries": {str(k): v for k, v in sorted(t.entries.items())},
        "default_right": t.default_right,
        "default_left": t.default_left,
    }


def tailed_from_json(obj: Any, pointer: str) -> TailedSpec:
    if not isinstance(obj, dict):
        raise ValidationError(pointer, "expected an object")
    kind = obj.get("kind")
    if kind == "constant":
        if "value" not in obj:
            raise ValidationError(pointer + "/value", "missing field")
        return TailedSpec.const(_number(obj["value"], pointer + "/value"))
    if kind == "periodic":
        values = obj.get("values")
        if not isinstance(values, list) or not values:
            raise ValidationError(pointer + "/values", "expected a nonempty list")
        return TailedSpec.periodic(_number(v, pointer + "/values") for v in values)
    if kind == "table":
        entries = obj.get("entries", {})
        if not isinstance(entries, dict):
            raise ValidationError(pointer + "/entries", "expected an object")
        try:
            parsed = {int(k): _number(v, pointer + f"/entries/{k}")
                      for k, v in entries.items()}
        except ValueError:
            raise ValidationError(pointer + "/entries",
                                  "keys must be decimal integer strings") from None
        if "default_right" not in obj:
            raise ValidationError(pointer + "/default_right", "missing field")
        return TailedSpec.table(
            parsed,
            _number(obj["default_right"], pointer + "/default_right"),
            _number(obj.get("default_left", 0.0), pointer + "/default_left"),
        )
    raise ValidationError(pointer + "/kind",
                          f"unknown kind {kind!r} (constant|periodic|table)")


def _number(v: Any, pointer: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(pointer, "expected a number")
    return float(v)


def spec_to_json(spec: SequenceSpec) -> dict[str, Any]:
    return {
        "alpha": spec.space.alpha,
        "p": "inf" if math.isinf(spec.space.p) else spec.space.p,
        "side": spec.space.side.value,
        "delta": tailed_to_json(spec.delta),
        "theta": tailed_to_json(spec.theta),
    }


def spec_from_json(obj: Any) -> SequenceSpec:
    if not isinstance(obj, dict):
        raise ValidationError("", "expected a top-level object")
    for key in ("alpha", "p", "side", "delta", "theta"):
        if key not in obj:
            raise ValidationError("/" + key, "missing field")
    alpha = _number(obj["alpha"], "/alpha")
    p_raw = obj["p"]
    if p_raw == "inf":
        p = math.inf
    else:
        p = _number(p_raw, "/p")
    side_raw = obj["side"]
    if side_raw not in ("one", "two"):
        raise ValidationError("/side", 'expected "one" or "two"')
    side = Side.ONE_SIDED if side_raw == "one" else Side.TWO_SIDED
    try:
        space = SpaceParams(alpha, p, side)
    except SpecError as exc:
        raise ValidationError("/alpha", str(exc)) from None
    return SequenceSpec(
        delta=tailed_from_json(obj["delta"], "/delta"),
        theta=tailed_from_json(obj["theta"], "/theta"),
        space=space,
    )
