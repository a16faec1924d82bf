"""Testes do diagnóstico de traços"""

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conceptions.diagnosis import (
    Trace,
    diagnose,
    explain_step,
    load_trace,
    parse_trace,
    trace_from_result,
)
from conceptions.exceptions import TraceValidationError
from conceptions.solver import solves
from conceptions.terms import parse_term
from conceptions.utils import Verdict

MIXED = [
    {"before": "(add 16 4)", "after": "(state 16 4)"},
    {"before": "(state 16 4)", "after": "(state 17 3)", "assessment": "valid"},
    {"before": "(add 16 23)", "after": "(num 39)", "assessment": "solved"},
]


def test_mixed_trace(addition):
    report = diagnose(addition, parse_trace(MIXED), workers=2)
    assert report.ranking() == ["C2", "C3", "C1", "C4", "C_mu"]
    assert report.coverage("C2") == Fraction(2, 3)
    assert report.coverage("C3") == Fraction(1, 3)
    assert report.coverage("C1") == 0
    records = report.to_records()
    assert records[0]["coverage"] == "2/3"
    assert records[0]["rank"] == 1
    assert [item["operator"] for item in records[0]["explanations"]] == [
        "c2-start",
        "count-on-step",
    ]
    assert records[1]["explanations"][0]["control"] == "c3-done"
    assert records[1]["explanations"][0]["position"] == "root"


def test_assessment_must_match(addition):
    event = {"before": "(state 16 4)", "after": "(state 17 3)", "assessment": "invalid"}
    trace = parse_trace([event])
    report = diagnose(addition, trace)
    assert report.coverage("C2") == 0


def test_explain_step_lists_every_candidate(addition):
    before, after = parse_term("(add 16 4)"), parse_term("(state 16 4)")
    assert explain_step(addition.conceptions.values(), before, after) == [("C2", "c2-start", ())]
    assert explain_step([addition.conception("C3")], before, after) == []


@pytest.mark.parametrize(
    "conception_id, problem_id",
    [("C1", "p_5+4"), ("C2", "p_16+4"), ("C3", "p_16+23")],
)
def test_synthesized_traces_point_back(addition, conception_id, problem_id):
    result = solves([addition.conception(conception_id)], addition.problem(problem_id).term)
    trace = trace_from_result(result)
    assert trace.events[-1].assessment is Verdict.SOLVED
    report = diagnose(addition, trace)
    assert report.ranking()[0] == conception_id
    assert report.coverage(conception_id) == 1


def test_empty_traces_are_rejected(addition):
    with pytest.raises(TraceValidationError):
        diagnose(addition, Trace(()))
    with pytest.raises(TraceValidationError):
        parse_trace({"events": []})


def test_states_outside_every_language_are_rejected(addition):
    trace = parse_trace(
        [
            {"before": "(add 16 4)", "after": "(state 16 4)"},
            {"before": "(times 10 1/5)", "after": "(add 16 1/2)"},
        ]
    )
    with pytest.raises(TraceValidationError) as e:
        diagnose(addition, trace)
    assert e.value.errors == [
        ("events[1].before", "(times 10 1/5) does not conform to any registry language"),
        ("events[1].after", "(add 16 1/2) does not conform to any registry language"),
    ]


def test_trace_errors_are_located():
    with pytest.raises(TraceValidationError) as e:
        parse_trace({"events": [{"before": "(add 1", "after": "(num 1)"}]})
    assert e.value.errors == [
        ("events[0].before", "syntax error at byte 0: unbalanced parenthesis")
    ]
    with pytest.raises(TraceValidationError) as e:
        parse_trace([{"before": "(add 1 2)", "after": "(num 3)", "assessment": "maybe"}])
    assert e.value.errors[0][0] == "events[0].assessment"


def test_load_trace(tmp_path):
    path = tmp_path / "trace.json"
    path.write_text(json.dumps({"events": MIXED}), encoding="utf-8")
    trace = load_trace(path)
    assert len(trace.events) == 3
    assert trace.events[1].assessment is Verdict.VALID
    assert trace.events[0].assessment is None

    with pytest.raises(TraceValidationError) as e:
        load_trace(tmp_path / "missing.json")
    assert e.value.errors[0][1] == "file not found"

    broken = tmp_path / "broken.json"
    broken.write_text("{\n  nope", encoding="utf-8")
    with pytest.raises(TraceValidationError) as e:
        load_trace(broken)
    assert e.value.errors[0][0].startswith(f"{broken}:2:")


POOL = MIXED + [
    {"before": "(join (count 5) (count 4))", "after": "(join (count 6) (count 3))"},
    {"before": "(keys 16 23)", "after": "(screen 39)"},
    {"before": "(add 9 1)", "after": "(num 10)", "assessment": "valid"},
]

# Eventos que uma única concepção do pacote de adição explica
OWN_EVENTS = [
    ("C2", MIXED[0]),
    ("C3", MIXED[2]),
    ("C3", {"before": "(add 16 23)", "after": "(num 39)"}),
]


@pytest.mark.parametrize("conception_id, event", OWN_EVENTS)
@given(base=st.lists(st.sampled_from(POOL), min_size=1, max_size=6))
def test_own_evidence_never_lowers_rank(addition, conception_id, event, base):
    own = parse_trace([event]).events[0]
    candidates = addition.conceptions.values()
    explainers = {item[0] for item in explain_step(candidates, own.before, own.after)}
    assert explainers == {conception_id}

    before = diagnose(addition, parse_trace(base), workers=1)
    after = diagnose(addition, parse_trace(base + [event]), workers=1)
    assert after.ranking().index(conception_id) <= before.ranking().index(conception_id)
    assert after.scores[conception_id].explained == before.scores[conception_id].explained + 1
    for other, score in before.scores.items():
        if other != conception_id:
            assert after.scores[other].explained == score.explained
