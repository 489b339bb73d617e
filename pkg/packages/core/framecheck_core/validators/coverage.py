"""
Roof coverage (T6) and gap detection (T7) over a shared footprint grid.

Cells are squares of side `grid_cell` aligned to the world origin; cell
(i, j) has its center at ((i + 0.5) c, (j + 0.5) c). A cell belongs to a
region when its center lies inside (or on the edge of) a member's XY
projection.
"""

import math

from typing import NamedTuple

import numpy as np

from framecheck_core.constants import FOOTPRINT_CATEGORIES, GAP_CELL_REPORT_LIMIT
from framecheck_core.scene_model import Category, Member, Scene
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    make_violation,
    outcome,
)


Cell = tuple[int, int]

_FOOTPRINT = tuple(Category(c) for c in FOOTPRINT_CATEGORIES)


class CoverageGrid(NamedTuple):
    footprint: tuple[Cell, ...]
    covered: tuple[Cell, ...]
    rho: float
    gamma: float

    def gaps(self) -> tuple[Cell, ...]:
        covered = set(self.covered)
        return tuple(c for c in self.footprint if c not in covered)


def _rects(members: list[Member], margin: float = 0.0) -> np.ndarray:
    return np.array(
        [
            (
                m.box.min_corner[0] - margin,
                m.box.min_corner[1] - margin,
                m.box.max_corner[0] + margin,
                m.box.max_corner[1] + margin,
            )
            for m in members
        ],
        dtype=float,
    ).reshape(-1, 4)


def _inside(rects: np.ndarray, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """(len(cx), len(cy)) mask of centers inside any of the rectangles."""
    mask = np.zeros((len(cx), len(cy)), dtype=bool)
    for x0, y0, x1, y1 in rects:
        in_x = (cx >= x0) & (cx <= x1)
        in_y = (cy >= y0) & (cy <= y1)
        mask |= np.outer(in_x, in_y)
    return mask


def _cells(mask: np.ndarray, i0: int, j0: int) -> tuple[Cell, ...]:
    return tuple((int(i) + i0, int(j) + j0) for i, j in np.argwhere(mask))


def coverage_grid(scene: Scene, params: ValidationParams) -> CoverageGrid:
    footprint_members = scene.by_category(*_FOOTPRINT)
    if not footprint_members:
        return CoverageGrid((), (), 1.0, 0.0)

    c = params.grid_cell
    fp = _rects(footprint_members)
    i0 = math.ceil(fp[:, 0].min() / c - 0.5)
    i1 = math.floor(fp[:, 2].max() / c - 0.5)
    j0 = math.ceil(fp[:, 1].min() / c - 0.5)
    j1 = math.floor(fp[:, 3].max() / c - 0.5)
    if i1 < i0 or j1 < j0:
        return CoverageGrid((), (), 1.0, 0.0)

    cx = (np.arange(i0, i1 + 1) + 0.5) * c
    cy = (np.arange(j0, j1 + 1) + 0.5) * c
    footprint = _inside(fp, cx, cy)
    rafters = scene.by_category(Category.RAFTER)
    covered = footprint & _inside(_rects(rafters, params.rafter_margin_mu), cx, cy)

    n_footprint = int(footprint.sum())
    if n_footprint == 0:
        return CoverageGrid((), (), 1.0, 0.0)
    n_covered = int(covered.sum())
    return CoverageGrid(
        _cells(footprint, i0, j0),
        _cells(covered, i0, j0),
        n_covered / n_footprint,
        (n_footprint - n_covered) / n_footprint,
    )


def t6_roof_coverage(
    scene: Scene, params: ValidationParams, grid: CoverageGrid | None = None
) -> TestOutcome:
    grid = grid if grid is not None else coverage_grid(scene, params)
    violations = []
    if grid.rho < params.coverage_min_rho:
        violations.append(
            make_violation(
                CheckId.T6,
                "Roof coverage",
                "falls below",
                Quantity(params.coverage_min_rho),
                Quantity(grid.rho),
                quantity="ratio",
                scope="across footprint",
            )
        )
    return outcome(CheckId.T6, violations, grid.rho)


def t7_gap_detection(
    scene: Scene, params: ValidationParams, grid: CoverageGrid | None = None
) -> TestOutcome:
    grid = grid if grid is not None else coverage_grid(scene, params)
    violations = []
    if grid.gamma > params.gap_max_gamma:
        gaps = grid.gaps()
        violations.append(
            make_violation(
                CheckId.T7,
                "Uncovered footprint fraction",
                "exceeds",
                Quantity(params.gap_max_gamma),
                Quantity(grid.gamma),
                quantity="fraction",
                tag=f"{len(gaps)} gap cells",
                cells=gaps[:GAP_CELL_REPORT_LIMIT],
                scope="across footprint",
            )
        )
    return outcome(CheckId.T7, violations, grid.gamma)
