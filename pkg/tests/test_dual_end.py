from framecheck_core.scene_model import Box3, make_member, make_scene
from framecheck_core.validators.dual_end import end_connections, t10_dual_end


STUD = make_member("Stud_a", Box3((0, 0, 0.3), (0.038, 0.089, 2.7)))
SOLE = make_member("SolePlate_a", Box3((0, 0, 0.262), (1, 0.089, 0.3)))
TOP = make_member("TopPlate_a", Box3((0, 0, 2.7), (1, 0.089, 2.738)))


def test_stud_between_plates_passes(params):
    scene = make_scene([SOLE, STUD, TOP])
    assert end_connections(scene, params) == {"Stud_a": (True, True)}
    assert t10_dual_end(scene, params).passed


def test_stud_without_top_plate(params):
    (violation,) = t10_dual_end(make_scene([SOLE, STUD]), params).violations
    assert violation.message == (
        "Stud top end needs at least 1 connector; detected 0 connectors in Stud_a "
        "(free end)"
    )


def test_stud_without_sole_plate_is_a_floating_column(params):
    (violation,) = t10_dual_end(make_scene([STUD, TOP]), params).violations
    assert violation.tag == "floating column"


def test_rafter_without_ridge_is_a_hinge_failure(params):
    rafter = make_member("Rafter_a", Box3((0, 0, 2.738), (0.038, 1.9, 3.9)))
    result = t10_dual_end(make_scene([TOP, rafter]), params)
    assert [v.tag for v in result.violations] == ["hinge failure"]


def test_member_never_connects_to_itself(params):
    assert end_connections(make_scene([STUD]), params) == {"Stud_a": (False, False)}


def test_short_members_are_skipped(params):
    block = make_member("Stud_block", Box3((0, 0, 0), (0.038, 0.089, 0.25)))
    scene = make_scene([block])
    assert end_connections(scene, params) == {}
    assert t10_dual_end(scene, params).passed


def test_connector_tolerance(params):
    # 0.08 m of clearance in x is within the 0.10 m connection tolerance
    near = make_member("TopPlate_a", Box3((0.118, 0, 2.7), (1, 0.089, 2.738)))
    assert end_connections(make_scene([SOLE, STUD, near]), params)["Stud_a"][1]
    far = make_member("TopPlate_a", Box3((0.2, 0, 2.7), (1, 0.089, 2.738)))
    assert not end_connections(make_scene([SOLE, STUD, far]), params)["Stud_a"][1]


def test_fixtures_are_restrained_at_both_ends(gable, two_story_gable, params):
    for scene in (gable, two_story_gable):
        assert all(
            ends == (True, True) for ends in end_connections(scene, params).values()
        )
