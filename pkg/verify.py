# verify.py - Check registry, expectations and structured reports
"""
A check binds one statement to a construction and a list of findings.  Each
finding pairs a measured quantity (a DecayEstimate, a constant, a set, a flag)
with an expectation; the check passes when every finding does.

Builders live in checks.py; REGISTRY there fixes the suite order.
"""

from __future__ import annotations

import fnmatch
import math
import os
import sys
import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np
import pandas as pd

from asymptotics import (Classification, DecayEstimate, EpsNet, estimate_net, leading_constant,
                         log2_series)
from config import LabSettings, load_config, settings_from_config
from errors import UnknownCheck
from mollifier import gaussian_rho
from utils import Timer
from workers import run_ordered

STATEMENTS_FILE = "statements.txt"


# --- expectations ------------------------------------------------------------------

def _is_order(d):
    return isinstance(d, DecayEstimate) and d.classification is Classification.ORDER


@dataclass(frozen=True)
class SlopeAtLeast:
    bound: float

    def judge(self, d):
        return d.negligible or (_is_order(d) and d.slope >= self.bound)

    def to_dict(self):
        return {"kind": "SlopeAtLeast", "bound": self.bound}


@dataclass(frozen=True)
class SlopeAtMost:
    bound: float

    def judge(self, d):
        return _is_order(d) and d.slope <= self.bound

    def to_dict(self):
        return {"kind": "SlopeAtMost", "bound": self.bound}


@dataclass(frozen=True)
class SlopeEquals:
    value: float
    tol: float = 0.1

    def judge(self, d):
        return _is_order(d) and abs(d.slope - self.value) <= self.tol

    def to_dict(self):
        return {"kind": "SlopeEquals", "value": self.value, "tol": self.tol}


@dataclass(frozen=True)
class Negligible:
    def judge(self, d):
        return d.negligible

    def to_dict(self):
        return {"kind": "Negligible"}


@dataclass(frozen=True)
class NonNegligible:
    def judge(self, d):
        return _is_order(d)

    def to_dict(self):
        return {"kind": "NonNegligible"}


@dataclass(frozen=True)
class IdenticallyZero:
    def judge(self, d):
        return d.classification is Classification.IDENTICALLY_ZERO

    def to_dict(self):
        return {"kind": "IdenticallyZero"}


@dataclass(frozen=True)
class ConstantEquals:
    value: complex
    rel_tol: float = 0.05
    abs_tol: float = 0.0

    def judge(self, c):
        return abs(complex(c) - complex(self.value)) <= self.rel_tol * abs(self.value) + self.abs_tol

    def to_dict(self):
        return {"kind": "ConstantEquals", "value": self.value, "rel_tol": self.rel_tol, "abs_tol": self.abs_tol}


@dataclass(frozen=True)
class SetEquals:
    points: tuple
    radius: float

    def judge(self, found):
        found = sorted(found)
        if len(found) != len(self.points):
            return False
        return all(any(abs(p - q) <= self.radius for q in found) for p in self.points) and \
            all(any(abs(p - q) <= self.radius for p in self.points) for q in found)

    def to_dict(self):
        return {"kind": "SetEquals", "points": list(self.points), "radius": self.radius}


@dataclass(frozen=True)
class AtMost:
    bound: float

    def judge(self, value):
        return math.isfinite(value) and value <= self.bound

    def to_dict(self):
        return {"kind": "AtMost", "bound": self.bound}


@dataclass(frozen=True)
class Holds:
    def judge(self, value):
        return bool(value)

    def to_dict(self):
        return {"kind": "Holds"}


# --- findings and reports -------------------------------------------------------

def _measured_value(value):
    if isinstance(value, DecayEstimate):
        out = value.to_dict()
        out["label"] = value.label()
        return out
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    return value


@dataclass
class Finding:
    name: str
    measured: object
    expectation: object
    series: list | None = None
    detail: str | None = None

    @property
    def passed(self):
        return bool(self.expectation.judge(self.measured))

    def to_dict(self):
        return {
            "name": self.name,
            "measured": _measured_value(self.measured),
            "expected": self.expectation.to_dict(),
            "pass": self.passed,
            "detail": self.detail,
        }


class CheckSkipped(Exception):
    """Raised by a builder whose preconditions are measured to fail."""


@dataclass(frozen=True)
class CheckDef:
    id: str
    reference: str
    quote: str
    builder: Callable
    expectation: object
    note: str = ""


@dataclass
class CheckReport:
    check_id: str
    reference: str
    quote: str
    expected: dict
    findings: tuple
    eps_grid: dict
    corpus_version: str
    runtime_ms: float | None = None
    skipped: str | None = None
    error: str | None = None
    note: str = ""

    @property
    def passed(self):
        if self.error is not None:
            return False
        if self.skipped is not None:
            return True
        return bool(self.findings) and all(f.passed for f in self.findings)

    def to_dict(self):
        return {
            "check_id": self.check_id,
            "reference": self.reference,
            "quote": self.quote,
            "expected": self.expected,
            "measured": [f.to_dict() for f in self.findings],
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
            "eps_grid": self.eps_grid,
            "corpus_version": self.corpus_version,
            "series": {f.name: f.series for f in self.findings if f.series},
            "skipped": self.skipped,
            "error": self.error,
            "note": self.note,
        }


# --- context ---------------------------------------------------------------------

class CheckContext:
    """Settings plus the kernels every check shares, built once per run."""

    def __init__(self, lab: LabSettings):
        self.lab = lab
        self._cache = {}
        self._lock = threading.Lock()

    @classmethod
    def from_config(cls, config=None):
        return cls(settings_from_config(config if config is not None else load_config()))

    @property
    def numerics(self):
        return self.lab.numerics

    @property
    def settings(self):
        return self.lab.numerics.valuation

    @property
    def grid(self):
        return self.settings.grid

    def _cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def phi(self):
        return self._cached("phi", lambda: self.lab.mollifier.build())

    @property
    def phi_skew(self):
        return self._cached("phi_skew", lambda: self.lab.mollifier.build(skewed=True))

    @property
    def rho(self):
        return self._cached("rho", lambda: gaussian_rho(1))

    # measurement helpers

    def estimate(self, net: EpsNet) -> DecayEstimate:
        return estimate_net(net, self.settings)

    def series(self, net: EpsNet):
        mags = net.magnitudes(self.grid, self.settings.cancellation_tol)
        return log2_series(self.grid.eps, mags)

    def net_finding(self, name, net, expectation, detail=None) -> Finding:
        return Finding(name, self.estimate(net), expectation, self.series(net), detail)

    def worst_finding(self, name, labelled_nets, expectation) -> Finding:
        """One finding over many nets: the first failing one, else the lowest order."""
        worst = None
        for label, net in labelled_nets:
            d = self.estimate(net)
            if not expectation.judge(d):
                return Finding(name, d, expectation, self.series(net), f"fails on {label}")
            if worst is None or d.order < worst[1].order:
                worst = (label, d, net)
        if worst is None:
            raise ValueError(f"{name}: no nets to measure")
        label, d, net = worst
        return Finding(name, d, expectation, self.series(net), f"weakest of {len(labelled_nets)}: {label}")

    def constant_finding(self, name, net, exponent, value, rel_tol=0.05) -> Finding:
        c = leading_constant(net, exponent, self.grid)
        return Finding(name, c, ConstantEquals(value, rel_tol), None, f"tail median of eps^{-exponent:g} * net")


# --- registry and runs ----------------------------------------------------------

def registry():
    from checks import REGISTRY
    return REGISTRY


def registry_ids():
    return [spec.id for spec in registry()]


def _lookup(check_id):
    for spec in registry():
        if spec.id == check_id:
            return spec
    raise UnknownCheck(f"unknown check '{check_id}'")


def select_checks(suite="all"):
    """Ids matching a comma-separated filter of ids or glob patterns, in registry order."""
    ids = registry_ids()
    if suite is None or suite.strip() in ("", "all"):
        return ids
    chosen = set()
    for token in (t.strip() for t in suite.split(",")):
        if not token:
            continue
        hits = [i for i in ids if fnmatch.fnmatchcase(i, token)]
        if not hits:
            raise UnknownCheck(f"no check matches '{token}'")
        chosen.update(hits)
    return [i for i in ids if i in chosen]


def _context(config, context):
    if context is not None:
        return context
    return CheckContext.from_config(config)


def run_check(check_id, config=None, context: CheckContext | None = None) -> CheckReport:
    """Run one registered check; numeric failures end up in the report, never raised."""
    spec = _lookup(check_id)
    ctx = _context(config, context)
    findings, skipped, error = (), None, None
    with Timer(check_id) as timer:
        try:
            findings = tuple(spec.builder(ctx))
        except CheckSkipped as exc:
            skipped = str(exc)
        except Exception as exc:
            error = f"{type(exc).__name__}: {exc}"
    return CheckReport(
        check_id=spec.id,
        reference=spec.reference,
        quote=spec.quote,
        expected=spec.expectation.to_dict(),
        findings=findings,
        eps_grid=ctx.grid.to_dict(),
        corpus_version=ctx.lab.corpus_version,
        runtime_ms=round(timer.elapsed_ms, 3) if ctx.lab.include_timings else None,
        skipped=skipped,
        error=error,
        note=spec.note,
    )


def run_suite(suite="all", config=None, context: CheckContext | None = None, jobs=None) -> list[CheckReport]:
    """Run the selected checks (in parallel when jobs > 1); results in registry order."""
    ids = select_checks(suite)
    ctx = _context(config, context)
    tasks = [lambda i=i: run_check(i, context=ctx) for i in ids]
    return run_ordered(tasks, jobs or ctx.lab.jobs)


def suite_summary(reports):
    return {
        "total": len(reports),
        "passed": sum(1 for r in reports if r.passed and r.skipped is None),
        "skipped": sum(1 for r in reports if r.skipped is not None),
        "failed": sum(1 for r in reports if not r.passed),
    }


def suite_document(reports, ctx: CheckContext):
    return {
        "corpus_version": ctx.lab.corpus_version,
        "eps_grid": ctx.grid.to_dict(),
        "summary": suite_summary(reports),
        "checks": [r.to_dict() for r in reports],
    }


def series_frame(document) -> pd.DataFrame:
    """Plot-ready rows (check_id, series, log2_eps, log2_magnitude) from a suite document."""
    rows = []
    for check in document.get("checks", []):
        for name, pairs in sorted((check.get("series") or {}).items()):
            for log2_eps, log2_mag in pairs:
                rows.append({"check_id": check["check_id"], "series": name,
                             "log2_eps": log2_eps, "log2_magnitude": log2_mag})
    return pd.DataFrame(rows, columns=["check_id", "series", "log2_eps", "log2_magnitude"])


# --- statement anchors ------------------------------------------------------------

def statements_path():
    base = getattr(sys, "_MEIPASS", os.path.dirname(os.path.abspath(__file__)))
    return os.path.join(base, STATEMENTS_FILE)


def load_statements(path=None):
    with open(path or statements_path(), "r", encoding="utf-8") as f:
        return f.read()


def unanchored_quotes(path=None):
    """Registry ids whose quote does not occur verbatim in the statements file."""
    text = load_statements(path)
    return [spec.id for spec in registry() if spec.quote not in text]


def worst_ratio(ratios):
    """Largest finite ratio; inf when any ratio is infinite."""
    values = np.asarray(list(ratios), dtype=float)
    if values.size == 0:
        return 0.0
    return float(np.max(values))
