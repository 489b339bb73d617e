import numpy as np
import pytest

from framecheck_core.scene_model import Box3, make_member, make_scene
from framecheck_core.validators.coverage import (
    coverage_grid,
    t6_roof_coverage,
    t7_gap_detection,
)


def _sill(x1, y1):
    return make_member("Sill_a", Box3((0, 0, 0), (x1, y1, 0.038)))


def _rafter(name, x0, y0, x1, y1):
    return make_member(name, Box3((x0, y0, 3.0), (x1, y1, 4.0)))


def test_full_cover(params):
    scene = make_scene([_sill(4, 2), _rafter("Rafter_a", 0, 0, 4, 2)])
    grid = coverage_grid(scene, params)
    assert len(grid.footprint) == 8
    assert (grid.rho, grid.gamma) == (1.0, 0.0)
    assert t6_roof_coverage(scene, params, grid).passed
    assert t7_gap_detection(scene, params, grid).passed


def test_no_rafters(params):
    scene = make_scene([_sill(4, 2)])
    assert t6_roof_coverage(scene, params).metric == 0.0
    assert not t6_roof_coverage(scene, params).passed


def test_half_cover(params):
    # inflated by 0.3 m the rafter reaches x = 2.0, covering columns 0 and 1
    scene = make_scene([_sill(4, 2), _rafter("Rafter_a", 0, 0, 1.7, 2)])
    grid = coverage_grid(scene, params)
    assert grid.rho == 0.5
    assert sorted(grid.gaps()) == [(2, 0), (2, 1), (3, 0), (3, 1)]
    assert not t6_roof_coverage(scene, params, grid).passed


def test_gap_detection_is_stricter_than_coverage(params):
    scene = make_scene([_sill(4, 2), _rafter("Rafter_a", 0, 0, 2.7, 2)])
    grid = coverage_grid(scene, params)
    assert grid.rho == 0.75
    assert grid.gamma == 0.25
    assert t6_roof_coverage(scene, params, grid).passed
    (violation,) = t7_gap_detection(scene, params, grid).violations
    assert violation.cells == ((3, 0), (3, 1))
    assert violation.tag == "2 gap cells"


def test_small_gap_passes(params):
    scene = make_scene(
        [
            _sill(5, 4),
            _rafter("Rafter_a", 0, 0, 3.7, 4),
            _rafter("Rafter_b", 4.2, 0.2, 4.8, 0.8),
        ]
    )
    grid = coverage_grid(scene, params)
    assert grid.rho == pytest.approx(0.85)
    assert grid.gamma == pytest.approx(0.15)
    assert t7_gap_detection(scene, params, grid).passed


def test_gap_cells_are_capped(params):
    scene = make_scene([_sill(5, 5)])
    (violation,) = t7_gap_detection(scene, params).violations
    assert len(violation.cells) == 20
    assert violation.tag == "25 gap cells"


def test_empty_footprint_passes(params):
    grid = coverage_grid(make_scene([_rafter("Rafter_a", 0, 0, 1, 1)]), params)
    assert (grid.rho, grid.gamma) == (1.0, 0.0)


def test_cells_use_world_aligned_centres(params):
    # the sill misses every cell centre on the y axis
    scene = make_scene([make_member("Sill_a", Box3((0, 0.6, 0), (3, 1.4, 0.1)))])
    grid = coverage_grid(scene, params)
    assert grid.footprint == ()


def test_fixture_is_fully_covered(gable, beam_gable, params):
    for scene in (gable, beam_gable):
        grid = coverage_grid(scene, params)
        assert grid.rho == 1.0


def test_gap_pass_implies_coverage_pass(params):
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        members = []
        for k in range(int(rng.integers(1, 4))):
            x0, y0 = rng.uniform(0, 6, size=2)
            w, d = rng.uniform(0.2, 5, size=2)
            members.append(
                make_member(f"Joist_{k}", Box3((x0, y0, 0), (x0 + w, y0 + d, 0.2)))
            )
        for k in range(int(rng.integers(0, 5))):
            x0, y0 = rng.uniform(-1, 8, size=2)
            w, d = rng.uniform(0.05, 4, size=2)
            members.append(_rafter(f"Rafter_{k}", x0, y0, x0 + w, y0 + d))
        scene = make_scene(members)
        grid = coverage_grid(scene, params)
        assert grid.rho + grid.gamma == pytest.approx(1.0)
        if t7_gap_detection(scene, params, grid).passed:
            assert t6_roof_coverage(scene, params, grid).passed
