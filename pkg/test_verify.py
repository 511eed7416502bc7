"""
Tests for expectations, the check registry and suite reports.
"""

import math

import pytest

from asymptotics import Classification, DecayEstimate, EpsNet, power_net
from errors import UnknownCheck
from verify import (AtMost, CheckDef, CheckSkipped, ConstantEquals, Holds, IdenticallyZero, Negligible,
                    NonNegligible, SetEquals, SlopeAtLeast, SlopeAtMost, SlopeEquals, registry, registry_ids,
                    run_check, run_suite, select_checks, series_frame, suite_document, suite_summary,
                    unanchored_quotes, worst_ratio)


def _order(slope):
    return DecayEstimate(slope, 0.0, 0.01, Classification.ORDER, 10.0, False)


BEYOND = DecayEstimate(math.nan, math.nan, math.nan, Classification.BEYOND_ORDER, 10.0, False)
ZERO = DecayEstimate(math.nan, math.nan, math.nan, Classification.IDENTICALLY_ZERO, 10.0, False)
AMBIGUOUS = DecayEstimate(1.0, 0.0, 3.0, Classification.AMBIGUOUS, 10.0, False)


def test_slope_expectations():
    assert SlopeAtLeast(1.0).judge(_order(1.5))
    assert SlopeAtLeast(1.0).judge(BEYOND)
    assert not SlopeAtLeast(1.0).judge(AMBIGUOUS)
    assert SlopeAtMost(0.0).judge(_order(-1.0))
    assert not SlopeAtMost(0.0).judge(BEYOND)
    assert SlopeEquals(2.0, 0.05).judge(_order(2.04))
    assert not SlopeEquals(2.0, 0.05).judge(_order(2.1))


def test_negligibility_expectations():
    assert Negligible().judge(BEYOND) and Negligible().judge(ZERO)
    assert not Negligible().judge(_order(3.0))
    assert NonNegligible().judge(_order(3.0))
    assert not NonNegligible().judge(AMBIGUOUS)
    assert IdenticallyZero().judge(ZERO)
    assert not IdenticallyZero().judge(BEYOND)


def test_value_expectations():
    assert ConstantEquals(-0.1168, 0.05).judge(-0.117)
    assert not ConstantEquals(1.0, 0.01).judge(1.1)
    assert ConstantEquals(0.0, 0.05, 1e-6).judge(1e-7 + 0j)
    assert SetEquals((0.0, 1.0), 1e-3).judge({1.0005, 0.0})
    assert not SetEquals((0.0, 1.0), 1e-3).judge({0.0})
    assert not SetEquals((0.0,), 1e-3).judge({0.5})
    assert AtMost(0.05).judge(0.01)
    assert not AtMost(0.05).judge(math.inf)
    assert Holds().judge(True) and not Holds().judge(0)
    assert SlopeEquals(2.0).to_dict() == {"kind": "SlopeEquals", "value": 2.0, "tol": 0.1}


def test_registry_ids_are_unique_and_quoted():
    ids = registry_ids()
    assert len(ids) >= 24
    assert len(set(ids)) == len(ids)
    assert ids[-1] == "A-valuation-engine"
    assert all(spec.quote and spec.reference for spec in registry())


def test_every_quote_is_anchored_in_the_statements_file():
    assert unanchored_quotes() == []


def test_select_checks():
    assert select_checks("all") == registry_ids()
    assert select_checks(None) == registry_ids()
    assert select_checks("A-valuation-engine") == ["A-valuation-engine"]
    chosen = select_checks("P-ideal-*, E-supp-empty")
    assert chosen == [i for i in registry_ids() if i.startswith("P-ideal-") or i == "E-supp-empty"]
    with pytest.raises(UnknownCheck):
        select_checks("Z-nothing")
    with pytest.raises(KeyError):
        select_checks("E-supp-empty,nope*")


def test_unknown_check_id(ctx):
    with pytest.raises(UnknownCheck):
        run_check("no-such-check", context=ctx)


def test_valuation_engine_check(ctx):
    report = run_check("A-valuation-engine", context=ctx)
    assert report.error is None
    assert report.passed
    data = report.to_dict()
    assert set(data) >= {"check_id", "reference", "quote", "expected", "measured", "pass", "runtime_ms",
                         "eps_grid", "corpus_version", "series"}
    assert data["runtime_ms"] is None
    assert data["eps_grid"]["k_max"] == 40
    assert "exp(-1/eps)" in data["series"]


def _spec_raising(exc):
    def builder(ctx):
        raise exc
    return CheckDef("X-raises", "synthetic", "quote", builder, Negligible())


def test_builder_errors_are_captured(ctx, monkeypatch):
    import checks

    monkeypatch.setattr(checks, "REGISTRY", [_spec_raising(ValueError("boom"))])
    report = run_check("X-raises", context=ctx)
    assert not report.passed
    assert report.error == "ValueError: boom"
    assert report.to_dict()["pass"] is False


def test_skipped_checks_count_apart(ctx, monkeypatch):
    import checks

    monkeypatch.setattr(checks, "REGISTRY", [_spec_raising(CheckSkipped("needs the 2-D kernel"))])
    reports = run_suite("all", context=ctx, jobs=2)
    assert reports[0].skipped == "needs the 2-D kernel"
    assert reports[0].passed
    assert suite_summary(reports) == {"total": 1, "passed": 0, "skipped": 1, "failed": 0}


def test_suite_document_and_series_frame(ctx):
    reports = run_suite("A-valuation-engine", context=ctx)
    document = suite_document(reports, ctx)
    assert document["summary"]["failed"] == 0
    frame = series_frame(document)
    assert list(frame.columns) == ["check_id", "series", "log2_eps", "log2_magnitude"]
    assert len(frame) == len(ctx.grid)
    assert set(frame["check_id"]) == {"A-valuation-engine"}
    assert frame["log2_eps"].iloc[0] == -6.0


def test_series_frame_of_an_empty_document():
    assert series_frame({}).empty


def test_context_measurement_helpers(ctx):
    finding = ctx.net_finding("eps^2", power_net(2.0), SlopeEquals(2.0, 0.05))
    assert finding.passed
    assert len(finding.series) == len(ctx.grid)
    worst = ctx.worst_finding("both", [("eps", power_net(1.0)), ("eps^3", power_net(3.0))], SlopeAtLeast(0.5))
    assert worst.passed
    assert worst.detail == "weakest of 2: eps"
    failing = ctx.worst_finding("both", [("one", EpsNet(lambda e: 1.0))], SlopeAtLeast(0.5))
    assert not failing.passed
    assert failing.detail == "fails on one"


def test_worst_ratio():
    assert worst_ratio([]) == 0.0
    assert worst_ratio([0.5, 2.0]) == 2.0
    assert worst_ratio([1.0, math.inf]) == math.inf
