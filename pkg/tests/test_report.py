import json

import pytest

from framecheck_core.scene_model import Box3, make_member, make_scene
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    SuiteReport,
    describe_members,
    format_feedback,
    format_number,
    make_violation,
    report_to_dict,
)
from framecheck_core.validators.suite import run_suite


def _report(*violations):
    failed = {v.check_id for v in violations}
    verdicts = {c: "fail" if c in failed else "pass" for c in CheckId}
    return SuiteReport(verdicts, tuple(violations), 1.0, not violations)


def _floating(name):
    return make_violation(
        CheckId.T1,
        "Member",
        "needs a load path to ground of at least",
        Quantity(1, "path"),
        Quantity(0, "paths"),
        members=(name,),
        tag="floating member",
    )


@pytest.mark.parametrize(
    ("value", "text"),
    [
        (3.0, "3.0"),
        (4.326, "4.326"),
        (7, "7"),
        (0.5, "0.5"),
        (1 / 3, "0.333"),
        (-0.0001, "0.0"),
        (float("inf"), "inf"),
    ],
)
def test_format_number(value, text):
    assert format_number(value) == text


def test_describe_members():
    assert describe_members((), "across scene") == "across scene"
    assert describe_members(("A",), "") == "in A"
    assert describe_members(("A", "B"), "") == "between A and B"
    four = describe_members(("A", "B", "C", "D"), "")
    assert four == "across A, B, C, ... (4 members)"


def test_feedback_line_format():
    violation = make_violation(
        CheckId.T8,
        "BeamPost gap",
        "exceeds",
        Quantity(3.0, "m"),
        Quantity(7.0, "m"),
        members=("BeamPost_01", "rim"),
        quantity="spacing",
    )
    assert violation.message == (
        "BeamPost gap exceeds 3.0 m; detected spacing 7.0 m between BeamPost_01 and rim"
    )


def test_empty_report_has_no_feedback():
    assert format_feedback(_report()) == ""
    assert format_feedback(_report(), machine=True) == []


def test_feedback_orders_by_test_then_member():
    t10 = make_violation(
        CheckId.T10, "Stud top end", "needs at least", Quantity(1), Quantity(0)
    )
    report = _report(t10, _floating("Collar_b"), _floating("Collar_a"))
    lines = format_feedback(report).splitlines()
    assert [line.split(" ")[-3] for line in lines[:2]] == ["Collar_a", "Collar_b"]
    assert lines[2].startswith("Stud top end")


def test_machine_feedback_mirrors_records():
    (record,) = format_feedback(_report(_floating("Collar_a")), machine=True)
    assert record["check_id"] == "T1"
    assert record["members"] == ["Collar_a"]
    assert record["measured"] == {"value": 0, "unit": "paths"}
    assert record["limit"] == {"value": 1, "unit": "path"}
    assert record["tag"] == "floating member"


def test_report_to_dict_is_json_ready():
    data = report_to_dict(_report(_floating("Collar_a")))
    assert data["overall_pass"] is False
    assert data["verdicts"]["T1"] == "fail"
    assert list(data["verdicts"]) == [c.value for c in CheckId]
    json.dumps(data)


def _reject_constant(token):
    raise ValueError(f"non-standard JSON constant {token}")


def test_degenerate_joist_report_is_strict_json(table):
    flat = make_member("Joist_flat", Box3((0, 0, 0), (0.0, 2.0, 0.235)))
    text = json.dumps(report_to_dict(run_suite(make_scene([flat]), table)))
    data = json.loads(text, parse_constant=_reject_constant)
    (record,) = [v for v in data["violations"] if v["check_id"] == "T5"]
    assert record["tag"] == "degenerate section"
    assert record["measured"] == {"value": None, "unit": "m"}


def test_check_metadata():
    assert CheckId.T10.number == 10
    assert CheckId.T5.display_name == "Deflection L/360"
    assert CheckId.T9.category == "Topological"
