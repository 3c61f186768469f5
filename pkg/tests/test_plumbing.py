import numpy as np
import pytest

from core.aggregator import aggregate_checks, summarize
from core.bus import CheckBus
from core.errors import InputError
from core.models import MAX_REASONS, CheckResult, SuiteContext, Tally
from core.selftest import SUITES, _guarded, run_selftest
from core.status_report import StatusReporter


def test_tally_records_failures():
    t = Tally("s", "p")
    assert t.record(True, residual=1e-12)
    assert not t.record(False, residual=0.5, reason="bad case")
    for _ in range(10):
        t.record(False)
    res = t.result()
    assert not res.passed
    assert res.cases == 12
    assert res.worst == 0.5
    assert res.reasons[0] == "bad case"
    assert len(res.reasons) == MAX_REASONS
    assert res.extra["failures"] == 11


def test_empty_tally_does_not_pass():
    assert not Tally("s", "p").result().passed


def test_bus_drains():
    bus = CheckBus()
    t = Tally("s", "p")
    t.record(True)
    bus.publish(t, CheckResult("s", "q", True, 1))
    t.record(False)
    assert len(bus) == 2
    drained = bus.drain()
    assert [r.prop for r in drained] == ["p", "q"]
    assert drained[0].passed and drained[0].cases == 1
    assert bus.drain() == []


def test_aggregate_merges_same_property():
    checks = aggregate_checks(
        [
            CheckResult("b", "p", True, 3, worst=0.1, reasons=[], extra={"failures": 0}),
            CheckResult("a", "x", True, 1),
            CheckResult("b", "p", False, 2, worst=0.4, reasons=["r1"], extra={"failures": 1}),
        ]
    )
    assert [(c.suite, c.prop) for c in checks] == [("a", "x"), ("b", "p")]
    merged = checks[1]
    assert not merged.passed
    assert merged.cases == 5
    assert merged.worst == 0.4
    assert merged.reasons == ["r1"]
    assert merged.extra["failures"] == 1
    summary = summarize(checks)
    assert not summary["passed"]
    assert summary["failed_properties"] == ["b.p"]
    assert summary["suites"]["b"] == {"properties": 1, "failed": 1, "cases": 5}


def test_status_reporter_records_crash():
    reporter = StatusReporter()
    reporter.record("ok_suite", 0.01)
    reporter.record("bad_suite", 0.02, RuntimeError("boom"))
    assert not reporter.all_ok
    summary = reporter.summary()
    assert summary["bad_suite"] == {"ok": False, "error": "RuntimeError: boom"}
    assert "runtime_ms" in reporter.summary(timing=True)["ok_suite"]


def test_crashing_suite_is_contained():
    reporter = StatusReporter()

    def explode(bus, ctx):
        raise ValueError("nope")

    assert not _guarded("explode", explode, reporter, CheckBus(), None, {})
    assert reporter.summary()["explode"]["ok"] is False


def test_context_rng_is_reproducible():
    ctx = SuiteContext(tol=None, seed=3)
    a = ctx.rng("comparison").normal(size=4)
    b = ctx.rng("comparison").normal(size=4)
    c = ctx.rng("dimension").normal(size=4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_unknown_suite_rejected(suite_ctx):
    with pytest.raises(InputError, match="unknown suite"):
        run_selftest(suite_ctx, {}, only=["nope"])


def test_registry_covers_every_engine():
    assert set(SUITES) == {
        "cardinal_laws",
        "comparison",
        "diagonalization",
        "dimension",
        "fdalg_laws",
        "functoriality",
        "masa_props",
    }


def test_tally_records_arrays():
    t = Tally("s", "p")
    ok = np.array([[True, False], [True, False]])
    assert not t.record_all(ok, lambda i: f"cell {i}")
    assert t.record_all(np.ones(3, dtype=bool), lambda i: "unused")
    res = t.result()
    assert res.cases == 7
    assert res.extra["failures"] == 2
    assert res.reasons == ["cell 1", "cell 3"]


def test_crash_keeps_checks_published_before_it():
    reporter = StatusReporter()
    bus = CheckBus()

    def half_done(bus, ctx):
        t = Tally("half", "first")
        t.record(True)
        bus.publish(t)
        raise RuntimeError("second property blew up")

    assert not _guarded("half", half_done, reporter, bus, None, {})
    assert [r.prop for r in bus.drain()] == ["first"]
    assert reporter.summary()["half"]["error"] == "RuntimeError: second property blew up"
