"""Structured results of identity checks, with a stable wire format.

The JSON wire format has exactly the keys
``name, params, grid, max_abs_err, max_rel_err, elapsed_s``.  Timing is
zeroed on serialization unless explicitly requested, so that report files
are byte-identical across reruns of the same configuration.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterable

__all__ = ["IdentityReport", "timed", "reports_to_json", "reports_from_json", "reports_to_csv"]

CSV_COLUMNS = ("name", "params", "grid", "max_abs_err", "max_rel_err", "elapsed_s")


@dataclass
class IdentityReport:
    name: str
    params: dict
    grid_summary: str
    max_abs_err: float
    max_rel_err: float
    elapsed: float = 0.0

    def __post_init__(self) -> None:
        if self.max_abs_err < 0 or self.max_rel_err < 0:
            raise ValueError("error fields must be nonnegative")

    @property
    def tolerance(self) -> float | None:
        tol = self.params.get("tol")
        return None if tol is None else float(tol)

    def passed(self) -> bool:
        tol = self.tolerance
        if tol is None:
            return True
        return self.max_rel_err <= tol

    def to_wire(self, include_timing: bool = False) -> dict:
        return {
            "name": self.name,
            "params": _jsonable(self.params),
            "grid": self.grid_summary,
            "max_abs_err": self.max_abs_err,
            "max_rel_err": self.max_rel_err,
            "elapsed_s": self.elapsed if include_timing else 0.0,
        }

    @classmethod
    def from_wire(cls, d: dict) -> "IdentityReport":
        return cls(
            name=d["name"],
            params=dict(d.get("params", {})),
            grid_summary=d.get("grid", ""),
            max_abs_err=float(d["max_abs_err"]),
            max_rel_err=float(d["max_rel_err"]),
            elapsed=float(d.get("elapsed_s", 0.0)),
        )


def _jsonable(obj: Any):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "item"):
        return obj.item()
    return obj


@contextmanager
def timed(setter):
    start = time.perf_counter()
    yield
    setter(time.perf_counter() - start)


def _float_repr(x: float) -> str:
    return format(float(x), ".17g")


def reports_to_json(reports: Iterable[IdentityReport], include_timing: bool = False) -> str:
    return json.dumps([r.to_wire(include_timing) for r in reports], indent=2, sort_keys=True)


def reports_from_json(text: str) -> list[IdentityReport]:
    data = json.loads(text)
    if not isinstance(data, list):
        raise ValueError("report file must contain a JSON array")
    return [IdentityReport.from_wire(d) for d in data]


def reports_to_csv(reports: Iterable[IdentityReport], include_timing: bool = False) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for r in reports:
        wire = r.to_wire(include_timing)
        params = json.dumps(wire["params"], sort_keys=True).replace('"', "'")
        lines.append(
            ",".join(
                [
                    wire["name"],
                    f'"{params}"',
                    f'"{wire["grid"]}"',
                    _float_repr(wire["max_abs_err"]),
                    _float_repr(wire["max_rel_err"]),
                    _float_repr(wire["elapsed_s"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"
