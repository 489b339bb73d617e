import json

import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from framecheck_core.errors import SceneParseError, SceneValidationError
from framecheck_core.scene_model import (
    Box3,
    Category,
    Phase,
    RoofType,
    SceneMeta,
    classify_member,
    make_box,
    make_member,
    make_scene,
    member_section,
    member_span,
    parse_scene,
    serialize_scene,
)


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("Sill_front", Category.SILL),
        ("GableStud_07", Category.GABLE_STUD),
        ("Stud_s1_front_000", Category.STUD),
        ("SolePlate_s1_front", Category.SOLE_PLATE),
        ("BeamPost_01", Category.BEAM_POST),
        ("beam_001", None),
        ("", None),
    ],
)
def test_classify_member(name, expected):
    assert classify_member(name) is expected


@given(st.sampled_from(list(Category)), st.text(max_size=12))
def test_classify_member_keeps_prefix_category(category, suffix):
    # no taxonomy prefix extends another, so the suffix never changes the match
    assert classify_member(category.value + suffix) is category


def test_categories_map_to_phases():
    assert Category.POST.phase is Phase.FOUNDATION
    assert Category.CENTER_BEAM.phase is Phase.FLOOR
    assert Category.CRIPPLE.phase is Phase.WALLS
    assert Category.PURLIN.phase is Phase.ROOF
    assert [p.rank for p in Phase] == [0, 1, 2, 3]


def test_make_box_rejects_inverted_corners():
    with pytest.raises(SceneValidationError, match="y axis"):
        make_box([0, 1, 0], [1, 0, 1], owner="member 'Joist_1'")


def test_make_box_rejects_non_finite():
    with pytest.raises(SceneValidationError, match="non-finite"):
        make_box([0, 0, 0], [float("inf"), 1, 1])


def test_make_member_rejects_disagreeing_category():
    box = Box3((0, 0, 0), (1, 1, 1))
    with pytest.raises(SceneValidationError, match="disagrees"):
        make_member("Stud_a", box, Category.JOIST)


def test_make_member_needs_prefix_or_category():
    box = Box3((0, 0, 0), (1, 1, 1))
    with pytest.raises(SceneValidationError, match="no taxonomy prefix"):
        make_member("beam_001", box)
    assert make_member("beam_001", box, Category.HEADER).category is Category.HEADER


@pytest.mark.parametrize(
    ("hi", "span"),
    [((4.0, 0.038, 0.235), 4.0), ((0.038, 3.5, 0.235), 3.5), ((1, 1, 1), 1.0)],
)
def test_member_span(hi, span):
    assert member_span(make_member("Joist_a", Box3((0, 0, 0), hi))) == span


def test_member_section_prefers_declared():
    box = Box3((0, 0, 0), (0.038, 1.9, 1.2))
    assert member_section(make_member("Rafter_a", box)) == (0.038, 1.2)
    declared = make_member("Rafter_a", box, section=(0.14, 0.038))
    assert member_section(declared) == (0.038, 0.14)


def test_parse_empty_scene():
    scene = parse_scene(b'{"members": []}')
    assert scene.members == ()
    assert scene.meta is None


def test_parse_single_stud():
    doc = {"members": [{"name": "Stud_a", "min": [0, 0, 0], "max": [0.04, 0.09, 2.4]}]}
    scene = parse_scene(json.dumps(doc))
    assert len(scene.members) == 1
    assert scene.members[0].category is Category.STUD
    assert scene.members[0].box.max_corner == (0.04, 0.09, 2.4)


def test_parse_duplicate_name():
    entry = {"name": "Joist_1", "min": [0, 0, 0], "max": [1, 1, 1]}
    with pytest.raises(SceneValidationError, match="Joist_1"):
        parse_scene(json.dumps({"members": [entry, entry]}))


def test_parse_inverted_box_names_member():
    entry = {"name": "Joist_1", "min": [0, 0, 2], "max": [1, 1, 1]}
    with pytest.raises(SceneValidationError, match="Joist_1"):
        parse_scene(json.dumps({"members": [entry]}))


def test_parse_malformed_json_reports_location():
    with pytest.raises(SceneParseError) as info:
        parse_scene(b'{"members": [\n  {"name": }\n]}')
    assert info.value.line == 2
    assert info.value.offset is not None


def test_parse_error_offset_counts_bytes():
    # the stray comma sits after a two-byte character
    with pytest.raises(SceneParseError) as info:
        parse_scene('["\u00e4", ]'.encode("utf-8"))
    assert info.value.column == 7
    assert info.value.offset == 7


def test_parse_wrong_shape_reports_path():
    doc = {"members": [{"name": "Stud_a", "min": [0, 0], "max": [1, 1, 1]}]}
    with pytest.raises(SceneParseError) as info:
        parse_scene(json.dumps(doc))
    assert info.value.path == "members[0].min"


def test_parse_meta():
    doc = {
        "meta": {"lot_width": 7, "lot_depth": 5, "stories": 2, "roof_type": "hip"},
        "members": [],
    }
    scene = parse_scene(json.dumps(doc))
    assert scene.meta == SceneMeta(7.0, 5.0, 2, RoofType.HIP, None)


def test_parse_meta_rejects_unknown_roof():
    doc = {"meta": {"lot_width": 7, "lot_depth": 5, "roof_type": "dome"}, "members": []}
    with pytest.raises(SceneValidationError, match="roof_type"):
        parse_scene(json.dumps(doc))


def test_serialize_keeps_member_order():
    scene = make_scene(
        [
            make_member("Stud_b", Box3((1, 0, 0), (1.04, 0.09, 2.4))),
            make_member("Stud_a", Box3((0, 0, 0), (0.04, 0.09, 2.4))),
        ]
    )
    doc = json.loads(serialize_scene(scene))
    assert [m["name"] for m in doc["members"]] == ["Stud_b", "Stud_a"]


def test_serialize_empty_scene():
    assert serialize_scene(make_scene([])) == b'{\n  "members": []\n}\n'


def test_fixture_round_trip_is_bit_stable(gable):
    once = serialize_scene(gable)
    assert parse_scene(once) == gable
    assert serialize_scene(parse_scene(once)) == once


_coord = st.floats(min_value=-50, max_value=50, allow_nan=False, width=32)


@st.composite
def scenes(draw):
    count = draw(st.integers(min_value=0, max_value=8))
    members = []
    for k in range(count):
        category = draw(st.sampled_from(list(Category)))
        lo = [draw(_coord) for _ in range(3)]
        size = [draw(st.floats(min_value=0, max_value=10, width=32)) for _ in range(3)]
        hi = [a + b for a, b in zip(lo, size, strict=True)]
        members.append(
            make_member(f"{category.value}_{k}", make_box(lo, hi), category)
        )
    return make_scene(members)


@settings(max_examples=50)
@given(scenes())
def test_round_trip_identity(scene):
    assert parse_scene(serialize_scene(scene)) == scene


@settings(max_examples=50)
@given(scenes())
def test_member_span_is_max_horizontal_extent(scene):
    for m in scene.members:
        dx, dy, _ = m.box.extents()
        assert member_span(m) == max(dx, dy) >= 0
