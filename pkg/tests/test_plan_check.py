import copy
import json

import pytest

from framecheck_core.errors import PlanParseError
from framecheck_core.plan_check import (
    PlanContext,
    check_plan,
    parse_plan,
    phase_warnings,
    topo_order,
)
from framecheck_core.scene_model import RoofType


CTX = PlanContext(lot_width=10.0, lot_depth=8.0, stories=1, roof_type=RoofType.GABLE)

PLAN = {
    "analysis": {
        "stories": 1,
        "roof_type": "gable",
        "lot_size": {"width": 10.0, "depth": 8.0, "area": 80.0},
        "sections": ["main"],
        "complexity": "simple",
    },
    "sections": [
        {
            "name": "main",
            "bounds": {"x_min": 0, "x_max": 10, "y_min": 0, "y_max": 8},
            "systems": ["foundation", "floor", "walls", "roof"],
        }
    ],
    "construction_order": [
        {
            "step": 1,
            "section": "main",
            "phase": "foundation",
            "members": [{"type": "Sill", "count": 4}, {"type": "Post", "count": 6}],
        },
        {
            "step": 2,
            "section": "main",
            "phase": "floor",
            "members": [{"type": "Rim", "count": 2}, {"type": "Joist", "count": 20}],
            "depends_on": [1],
        },
        {
            "step": 3,
            "section": "main",
            "phase": "walls",
            "members": [
                {"type": "SolePlate", "count": 4},
                {"type": "Stud", "count": 40},
            ],
            "depends_on": [2],
        },
        {
            "step": 4,
            "section": "main",
            "phase": "roof",
            "members": [{"type": "Ridge", "count": 1}, {"type": "Rafter", "count": 30}],
            "depends_on": [3],
        },
    ],
    "expected_member_counts": {"Stud": 40, "Rafter": 30},
}


def _plan(edit=None):
    raw = copy.deepcopy(PLAN)
    if edit:
        edit(raw)
    return parse_plan(json.dumps(raw))


def _kinds(violations):
    return [v.kind for v in violations]


def test_valid_plan_is_accepted():
    plan = _plan()
    assert plan.analysis.lot_size.area == 80.0
    assert plan.construction_order[1].depends_on == (1,)
    assert check_plan(plan, CTX) == []
    assert phase_warnings(plan) == []
    assert topo_order(plan).order == (1, 2, 3, 4)


def test_plan_parses_from_bytes():
    assert parse_plan(json.dumps(PLAN).encode()).expected_member_counts["Stud"] == 40


@pytest.mark.parametrize(("width", "accepted"), [(10.004, True), (10.01, False)])
def test_lot_width_tolerance(width, accepted):
    def edit(raw):
        raw["analysis"]["lot_size"]["width"] = width

    violations = check_plan(_plan(edit), CTX)
    assert (violations == []) is accepted
    if not accepted:
        assert violations[0].message == "lot width 10.01 must be 10.00"


def test_lot_area_must_match_the_context():
    def edit(raw):
        raw["analysis"]["lot_size"]["area"] = 79.0

    (violation,) = check_plan(_plan(edit), CTX)
    assert violation.kind == "lot_size"
    assert violation.message == "lot area 79.0 must be 80.00"


def test_context_mismatch():
    ctx = CTX._replace(stories=2, roof_type=RoofType.HIP)
    assert _kinds(check_plan(_plan(), ctx)) == ["context", "context"]


def test_unknown_member_types_and_phases():
    def edit(raw):
        raw["construction_order"][0]["members"].append({"type": "Beam", "count": 1})
        raw["construction_order"][1]["phase"] = "framing"
        raw["expected_member_counts"]["Truss"] = 2

    messages = [v.message for v in check_plan(_plan(edit), CTX)]
    assert messages == [
        "step 1: unknown member type 'Beam'",
        "step 2: unknown phase 'framing'",
        "expected_member_counts: unknown member type 'Truss'",
    ]


def test_dependency_cycle_is_reported():
    def edit(raw):
        raw["construction_order"][1]["depends_on"] = [1, 3]

    plan = _plan(edit)
    result = topo_order(plan)
    assert result.order is None
    assert result.cycle == (2, 3)
    (violation,) = check_plan(plan, CTX)
    assert violation.message == "depends_on has a cycle: 2 -> 3 -> 2"
    assert phase_warnings(plan) == []


def test_unknown_step_and_section_references():
    def edit(raw):
        raw["construction_order"][2]["depends_on"] = [2, 9]
        raw["construction_order"][3]["section"] = "annex"
        raw["sections"][0]["dependencies"] = ["garage"]

    violations = check_plan(_plan(edit), CTX)
    assert [(v.kind, v.message) for v in violations] == [
        ("dependency", "step 3 depends on unknown step 9"),
        ("reference", "step 4 names unknown section 'annex'"),
        ("reference", "section 'main' depends on unknown section 'garage'"),
    ]


def test_section_larger_than_the_lot():
    def edit(raw):
        raw["sections"][0]["bounds"]["x_max"] = 12

    (violation,) = check_plan(_plan(edit), CTX)
    assert violation.kind == "bounds"
    assert "12.00 x 8.00 m" in violation.message


def test_empty_section_bounds():
    def edit(raw):
        raw["sections"][0]["bounds"]["x_max"] = 0

    (violation,) = check_plan(_plan(edit), CTX)
    assert violation.message == "section 'main' has empty bounds"


def test_sections_together_must_fit_the_lot():
    def edit(raw):
        raw["sections"][0]["bounds"]["x_max"] = 6
        raw["sections"].append(
            {
                "name": "annex",
                "bounds": {"x_min": 5, "x_max": 11, "y_min": 0, "y_max": 8},
            }
        )

    (violation,) = check_plan(_plan(edit), CTX)
    assert violation.message.startswith("sections together span 11.00 x 8.00 m")


def test_topo_order_breaks_ties_by_step_id():
    def edit(raw):
        raw["construction_order"] = [
            {"step": 3, "section": "main", "phase": "walls"},
            {"step": 2, "section": "main", "phase": "floor", "depends_on": [5]},
            {"step": 1, "section": "main", "phase": "foundation"},
            {"step": 5, "section": "main", "phase": "foundation"},
        ]

    assert topo_order(_plan(edit)).order == (1, 3, 5, 2)


def test_phase_warnings():
    def edit(raw):
        del raw["construction_order"][2:]
        raw["construction_order"][1]["depends_on"] = []

    plan = _plan(edit)
    assert check_plan(plan, CTX) == []
    (warning,) = phase_warnings(plan)
    assert warning.kind == "phase_order"
    assert warning.message == (
        "section 'main': floor step 2 does not depend on foundation step 1"
    )


def _set(path, value):
    def edit(raw):
        target = raw
        for key in path[:-1]:
            target = target[key]
        target[path[-1]] = value

    return edit


@pytest.mark.parametrize(
    ("edit", "message"),
    [
        (_set(["analysis", "stories"], True), "must be an integer"),
        (_set(["analysis", "lot_size", "width"], "ten"), "must be a number"),
        (_set(["construction_order", 0, "members", 0, "count"], -1), "not be negative"),
        (_set(["construction_order", 1, "step"], 1), "appears more than once"),
        (_set(["sections"], {}), "sections must be an array"),
        (_set(["expected_member_counts"], []), "must be an object"),
    ],
)
def test_malformed_plans(edit, message):
    with pytest.raises(PlanParseError, match=message):
        _plan(edit)


def test_plan_must_be_json():
    with pytest.raises(PlanParseError, match="not valid JSON"):
        parse_plan("{")
    with pytest.raises(PlanParseError, match="missing field 'analysis'"):
        parse_plan("{}")
