"""Machine-readable run reports and deterministic CSV/JSON writers.

All numbers are serialized with ``repr``, the shortest representation
that round-trips, so identical inputs yield byte-identical files.  No
timestamps or environment-dependent values are written.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "measured": float(self.measured),
            "tolerance": float(self.tolerance),
            "detail": self.detail,
        }


@dataclass
class RunReport:
    kind: str
    config_hash: str
    package_version: str
    outcomes: list = field(default_factory=list)
    artifacts: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes)

    def add(self, name, passed, measured, tolerance, detail="") -> CheckOutcome:
        outcome = CheckOutcome(name, bool(passed), float(measured), float(tolerance), detail)
        self.outcomes.append(outcome)
        return outcome

    def as_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "config_hash": self.config_hash,
            "package_version": self.package_version,
            "passed": self.passed,
            "outcomes": [o.as_dict() for o in self.outcomes],
            "artifacts": list(self.artifacts),
        }


def write_report(report: RunReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}j"
    return str(value)


def write_csv(path: str, header: list, rows: list) -> None:
    """Plain deterministic CSV (no quoting; fields must not contain commas)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(v) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path: str) -> tuple[list, list]:
    """Inverse of write_csv for the plotting layer; values stay strings."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines:
        return [], []
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


def matrix_to_json(matrix: np.ndarray) -> dict:
    """Complex array as nested [re, im] pairs with explicit shape."""
    arr = np.asarray(matrix, dtype=np.complex128)
    return {
        "shape": list(arr.shape),
        "real": arr.real.tolist(),
        "imag": arr.imag.tolist(),
    }


def write_snapshot(path: str, array: np.ndarray) -> None:
    payload = (
        matrix_to_json(array)
        if np.iscomplexobj(array)
        else {"shape": list(array.shape), "values": np.asarray(array, dtype=float).tolist()}
    )
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
        fh.write("\n")
