import json
from fractions import Fraction

import pytest

from qverify.heyvl import vcgen
from qverify.parser import load_file
from qverify.report import (
    COLUMNS,
    EXIT_ERROR,
    EXIT_REFUTED,
    EXIT_UNKNOWN,
    EXIT_VERIFIED,
    FileOutcome,
    exit_code,
    render_table,
    show_bound,
    summary_line,
    to_frame,
    to_json,
)
from qverify.solver import CheckResult, Refuted, Timings, Unknown, Verified

TIMINGS = Timings(prune_s=0.1, lower_s=0.1, solve_s=0.2)


@pytest.fixture
def foo_bar(benchmarks):
    return vcgen(load_file(benchmarks / "foo_bar.heyvl"))


def outcome(vcs, *verdicts, **kw) -> FileOutcome:
    results = [("proc", CheckResult(vc, v, TIMINGS)) for vc, v in zip(vcs, verdicts)]
    return FileOutcome("foo_bar.heyvl", results, **kw)


def test_frame_rows(foo_bar):
    frame = to_frame([outcome(foo_bar, Verified(), Refuted({"x": 1}))])
    assert list(frame.columns) == COLUMNS
    assert list(frame["procedure"]) == ["foo", "bar"]
    assert list(frame["verdict"]) == ["verified", "refuted"]
    assert frame.loc[1, "counterexample"] == "x=1"
    assert frame.loc[0, "pruning_pct"] == 25.0
    assert frame.loc[0, "sat_pct"] == 50.0


@pytest.mark.parametrize(
    "verdicts, error, code",
    [
        ((Verified(), Verified()), None, EXIT_VERIFIED),
        ((Verified(), Refuted({"x": 1})), None, EXIT_REFUTED),
        ((Unknown("timeout after 1s"), Verified()), None, EXIT_UNKNOWN),
        ((Unknown("timeout after 1s"), Refuted()), None, EXIT_REFUTED),
        ((Verified(), Verified()), "foo_bar.heyvl:3:1: parse error", EXIT_ERROR),
    ],
)
def test_exit_codes(foo_bar, verdicts, error, code):
    outcomes = [outcome(foo_bar, *verdicts, error=error)]
    assert exit_code(to_frame(outcomes), outcomes) == code


def test_summary_and_table(foo_bar):
    frame = to_frame([outcome(foo_bar, Verified(), Unknown("solver returned unknown"))])
    assert summary_line(frame) == "1/2 verified"
    table = render_table(frame)
    assert "solver returned unknown" in table and "25%" in table
    assert render_table(to_frame([])) == "(no verification conditions)"


@pytest.mark.parametrize("q, text", [(Fraction(7, 2), "3.5 (7/2)"), (Fraction(3), "3")])
def test_show_bound(q, text):
    assert show_bound(q) == text


def test_json_report(foo_bar):
    outcomes = [outcome(foo_bar, Verified(), Verified(), cwp_bound=Fraction(7, 2))]
    frame = to_frame(outcomes)
    payload = json.loads(to_json(frame, exit_code(frame, outcomes), outcomes))
    assert payload["exit_code"] == 0
    assert payload["cwp_bound"] == {"foo_bar.heyvl": "7/2"}
    assert [r["verdict"] for r in payload["results"]] == ["verified", "verified"]
    assert "errors" not in payload
