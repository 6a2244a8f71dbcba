"""Check reports and their JSON encoding."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

FLOAT_TOL = 1e-7


class Status(str, enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "NOT_APPLICABLE"
    SKIPPED_SCALE = "SKIPPED_SCALE"


def encode(value: Any) -> Any:
    """Exact values become {"num", "den"}; floats become 12-significant-digit strings."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return str(value)


@dataclass
class CheckReport:
    check_id: str
    instance: dict
    status: Status
    lhs: Any = None
    rhs: Any = None
    slack: Any = None
    details: dict = field(default_factory=dict)
    bundle: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def to_json(self) -> dict:
        out = {
            "check_id": self.check_id,
            "instance": encode(self.instance),
            "status": self.status.value,
            "lhs": encode(self.lhs),
            "rhs": encode(self.rhs),
            "slack": encode(self.slack),
            "details": encode(self.details),
        }
        if self.bundle is not None:
            out["bundle"] = encode(self.bundle)
        return out


def exact_le(lhs: Fraction | int, rhs: Fraction | int) -> tuple[bool, Fraction]:
    slack = Fraction(rhs) - Fraction(lhs)
    return slack >= 0, slack


def float_le(lhs: float | Fraction, rhs: float | Fraction, tol: float = FLOAT_TOL) -> tuple[bool, float]:
    """``lhs <= rhs`` up to an additive tolerance; rational sides go to nearest float."""
    slack = float(rhs) - float(lhs)
    return slack >= -tol, slack


def status_of(ok: bool) -> Status:
    return Status.PASS if ok else Status.FAIL


def combine(subchecks: dict[str, dict]) -> Status:
    return status_of(all(sc["ok"] for sc in subchecks.values()))


def sub(lhs, rhs, ok: bool, slack) -> dict:
    return {"lhs": lhs, "rhs": rhs, "ok": ok, "slack": slack}


def repro_bundle(graph, group=None, **params) -> dict:
    from mwiso.graph import format_graph
    from mwiso.perm import format_perms

    out = {"graph": format_graph(graph), "params": params}
    if group is not None:
        out["perms"] = format_perms(group.generators)
        out["group_source"] = group.source
    return out
