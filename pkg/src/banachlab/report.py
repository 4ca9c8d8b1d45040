"""Inequality records, implied constants and verification reports."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

PASS, FAIL, OUT_OF_RANGE = "pass", "fail", "out-of-range"


def clean(obj):
    """Recursively convert numpy scalars and tuples into JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


@dataclass(frozen=True)
class InequalityRecord:
    """lhs <= rhs up to ``tolerance``; ``hard`` records decide the exit status."""

    suite: str
    params: dict
    lhs: float
    rhs: float
    tolerance: float = 0.0
    status: str = ""
    witness: tuple | None = None
    hard: bool = True

    def __post_init__(self):
        object.__setattr__(self, "lhs", float(self.lhs))
        object.__setattr__(self, "rhs", float(self.rhs))
        if not self.status:
            object.__setattr__(self, "status", PASS if self.margin >= -self.tolerance else FAIL)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def failed(self) -> bool:
        return self.hard and self.status == FAIL

    def to_json(self):
        return clean({"params": self.params, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
                      "tolerance": self.tolerance, "status": self.status, "hard": self.hard,
                      "witness": None if self.witness is None else list(self.witness)})


def out_of_range(suite, params, lhs=0.0, rhs=0.0):
    return InequalityRecord(suite, params, lhs, rhs, status=OUT_OF_RANGE, hard=False)


@dataclass(frozen=True)
class ImpliedConstant:
    name: str
    p: float
    value: float
    instances: int

    def to_json(self):
        return clean({"name": self.name, "p": self.p, "value": self.value, "instances": self.instances})

    def merge(self, other: "ImpliedConstant") -> "ImpliedConstant":
        return ImpliedConstant(self.name, self.p, max(self.value, other.value), self.instances + other.instances)


def lhs_over_rhs(record: InequalityRecord) -> float:
    return record.lhs / record.rhs


def infer_implied_constant(records: Sequence[InequalityRecord], name: str, p: float,
                           form: Callable[[InequalityRecord], float] = lhs_over_rhs) -> ImpliedConstant:
    """Smallest constant c with form(record) <= c on every record."""
    records = list(records)
    if not records:
        raise ValueError("cannot infer a constant from no records")
    return ImpliedConstant(name, float(p), max(float(form(r)) for r in records), len(records))


def scale_rhs(record: InequalityRecord, factor: float, rel_tol: float = 1e-12) -> InequalityRecord:
    """Replace rhs by factor * rhs, as when an inferred constant is substituted."""
    params = dict(record.params, rawRhs=record.rhs, constant=factor)
    rhs = factor * record.rhs
    return replace(record, params=params, rhs=rhs, tolerance=rel_tol * abs(rhs), status="")


@dataclass
class VerificationReport:
    suite: str
    params: dict
    records: list = field(default_factory=list)
    implied_constants: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    warnings: list = field(default_factory=list)

    @property
    def failures(self):
        return [r for r in self.records if r.failed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def counts(self):
        out = {PASS: 0, FAIL: 0, OUT_OF_RANGE: 0}
        for r in self.records:
            out[r.status] = out.get(r.status, 0) + 1
        return out

    def worst_margin(self):
        hard = [r.margin + r.tolerance for r in self.records if r.hard and r.status != OUT_OF_RANGE]
        return min(hard) if hard else None

    def constant(self, name):
        for c in self.implied_constants:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        return clean({"suite": self.suite, "params": self.params,
                      "records": [r.to_json() for r in self.records],
                      "impliedConstants": [c.to_json() for c in self.implied_constants],
                      "tolerances": self.tolerances, "seed": self.seed, "warnings": self.warnings})

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, allow_nan=False) + "\n"

    def summary(self) -> str:
        c = self.counts()
        worst = self.worst_margin()
        consts = ", ".join(f"{k.name}={k.value:.6g}" for k in self.implied_constants)
        parts = [f"{self.suite}: {c[PASS]} pass, {c[FAIL]} fail, {c[OUT_OF_RANGE]} out-of-range",
                 "worst margin " + ("n/a" if worst is None else f"{worst:.3e}")]
        if consts:
            parts.append(consts)
        if self.warnings:
            parts.append(f"{len(self.warnings)} warning(s)")
        return "; ".join(parts)

    def to_csv(self) -> str:
        rows = [r.to_json() for r in self.records]
        keys = sorted({k for r in rows for k in r["params"]})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "index", "status", "hard", "lhs", "rhs", "margin", "tolerance"] + keys)
        for i, r in enumerate(rows):
            w.writerow([self.suite, i, r["status"], r["hard"], r["lhs"], r["rhs"], r["margin"], r["tolerance"]]
                       + [_cell(r["params"].get(k, "")) for k in keys])
        return buf.getvalue()


def _cell(v):
    return json.dumps(v) if isinstance(v, (list, dict)) else v


def merge_reports(reports: Sequence[VerificationReport], suite: str = "merged") -> VerificationReport:
    """Concatenate records and max-reduce implied constants by (name, p)."""
    merged = VerificationReport(suite, {"suites": [r.suite for r in reports]},
                                seed=reports[0].seed if reports else 0)
    constants = {}
    for rep in reports:
        merged.records.extend(rep.records)
        merged.warnings.extend(rep.warnings)
        for k, v in rep.tolerances.items():
            merged.tolerances[f"{rep.suite}.{k}"] = v
        for c in rep.implied_constants:
            key = (c.name, c.p)
            constants[key] = constants[key].merge(c) if key in constants else c
    merged.implied_constants = [constants[k] for k in sorted(constants)]
    return merged


def emit_plot_data(report: VerificationReport, x: str, y: str, group: str | None = None) -> str:
    """Two-column CSV (plus an optional group column) from records carrying both fields."""
    header = [x, y] + ([group] if group else [])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for rec in report.records:
        flat = dict(rec.params, lhs=rec.lhs, rhs=rec.rhs, margin=rec.margin)
        if x not in flat or y not in flat or (group and group not in flat):
            continue
        w.writerow([clean(flat[k]) for k in header])
    if report.records and buf.getvalue().count("\n") == 1:
        fields = sorted({k for r in report.records for k in r.params} | {"lhs", "rhs", "margin"})
        missing = [k for k in header if k not in fields]
        if missing:
            raise KeyError(f"fields not present in report: {missing}")
    return buf.getvalue()
