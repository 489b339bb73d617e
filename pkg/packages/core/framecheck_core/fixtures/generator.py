"""
Parametric gable timber frame that passes every validation test.

Layout: x runs along the width, y along the depth, z up; the ridge runs
along x at mid-depth. All boxes are rounded to the micrometre so repeated
generation serialises to identical bytes.
"""

import logging
import math

from typing import NamedTuple

from framecheck_core.errors import FixtureError, SpanTableError
from framecheck_core.scene_model import (
    Member,
    RoofType,
    Scene,
    SceneMeta,
    make_box,
    make_member,
    make_scene,
)
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.span_table import (
    SpanKind,
    SpanTable,
    fixture_span_table,
)
from framecheck_core.validators.spacing import spacing_deviation
from framecheck_core.validators.spans import (
    deflection_limit,
    midspan_deflection,
    span_limit,
)


THICKNESS = 0.038
WALL_DEPTH = 0.089
POST_SIZE = 0.089
SILL_WIDTH = 0.140
BEAM_SIZE = 0.140
MAX_POST_SPACING = 1.8
COLLAR_HEIGHT_FRACTION = 0.4
MIN_ROOF_RISE = 0.6
MIN_STORY_HEIGHT = 1.0


class FixtureSpec(NamedTuple):
    width: float
    depth: float
    stories: int = 1
    roof_pitch_ratio: float = 0.6
    stud_spacing: float = 0.406
    joist_spacing: float = 0.406
    rafter_spacing: float = 0.610
    story_height: float = 2.7
    floor_z: tuple[float, ...] = (0.3, 3.0, 5.7)
    center_beam: bool = False

    @property
    def roof_rise(self) -> float:
        return self.roof_pitch_ratio * self.depth / 2


def story_levels(spec: FixtureSpec) -> list[tuple[float, float]]:
    """(floor base, wall top) per story, continuing past floor_z at story_height."""
    bases = list(spec.floor_z[: spec.stories])
    while len(bases) < spec.stories:
        bases.append(bases[-1] + spec.story_height)
    tops = [*bases[1:], bases[-1] + spec.story_height]
    return list(zip(bases, tops, strict=True))


def rafter_pitch(spec: FixtureSpec) -> float:
    """On-centre distance the rafter pairs are actually laid at."""
    run = spec.width - THICKNESS
    return run / max(1, math.ceil(run / spec.rafter_spacing - 1e-9))


def check_fixture_spec(
    spec: FixtureSpec, params: ValidationParams | None = None
) -> None:
    """
    Raises:
        FixtureError: the fixture spec is outside the generator's valid range.
    """
    params = params or ValidationParams()
    if spec.width <= 1 or spec.depth <= 1:
        raise FixtureError("width and depth must exceed 1 m")
    if spec.stories < 1:
        raise FixtureError("stories must be a positive integer")
    for name in ("stud_spacing", "joist_spacing", "rafter_spacing", "story_height"):
        if getattr(spec, name) <= 0:
            raise FixtureError(f"{name} must be positive")
    if spec.roof_pitch_ratio <= 0:
        raise FixtureError("roof_pitch_ratio must be positive")
    if not spec.floor_z:
        raise FixtureError("floor_z needs at least one level")
    if not 0.25 <= spec.floor_z[0] <= 1.0:
        raise FixtureError(
            f"first floor at z={spec.floor_z[0]} must lie in [0.25, 1.0]"
        )
    if any(b <= a for a, b in zip(spec.floor_z, spec.floor_z[1:], strict=False)):
        raise FixtureError("floor_z must be strictly increasing")
    for story, (base, top) in enumerate(story_levels(spec), start=1):
        if top - base < MIN_STORY_HEIGHT:
            raise FixtureError(f"story {story} is shorter than {MIN_STORY_HEIGHT} m")
    if spec.roof_rise < MIN_ROOF_RISE - 1e-9:
        raise FixtureError(
            f"roof rise {spec.roof_rise:.3f} m is below {MIN_ROOF_RISE} m; "
            "raise roof_pitch_ratio"
        )
    if spacing_deviation(spec.joist_spacing, params) >= params.spacing_tolerance:
        standards = ", ".join(f"{s:.3f}" for s in params.spacing_standards)
        raise FixtureError(
            f"joist_spacing {spec.joist_spacing} m is not a standard on-centre "
            f"spacing ({standards} m)"
        )
    # neighbouring rafters closer than the zone tolerance restrain each other
    gap = rafter_pitch(spec) - THICKNESS
    if gap <= params.zone_tolerance_eps_c:
        raise FixtureError(
            f"rafter_spacing {spec.rafter_spacing} m leaves {gap:.3f} m between "
            f"rafters; it must exceed {params.zone_tolerance_eps_c} m"
        )
    widest = THICKNESS + 2 * params.rafter_margin_mu
    if spec.rafter_spacing > widest + 1e-9:
        raise FixtureError(
            f"rafter_spacing {spec.rafter_spacing} m leaves roof gaps; "
            f"keep it at or below {widest:.3f} m"
        )


def _even(start: float, stop: float, max_step: float) -> list[float]:
    """Evenly spaced positions from start to stop, no step above max_step."""
    count = max(1, math.ceil((stop - start) / max_step - 1e-9))
    return [start + k * (stop - start) / count for k in range(count + 1)]


def _stud_positions(start: float, stop: float, spacing: float) -> list[float]:
    """Stud min corners along a wall, on centre from `start` plus an end stud."""
    positions = []
    k = 0
    while start + k * spacing + THICKNESS <= stop + 1e-9:
        positions.append(start + k * spacing)
        k += 1
    end = stop - THICKNESS
    if end - positions[-1] >= THICKNESS:
        positions.append(end)
    return positions


def _sections_by_depth(params: ValidationParams) -> list[tuple[float, float]]:
    thinnest = min(w for w, _ in params.lumber_set_lambda)
    pairs = sorted(p for p in params.lumber_set_lambda if p[0] == thinnest)
    return [(w / 1000, d / 1000) for w, d in pairs]


def _smallest_section(
    kind: SpanKind,
    span: float,
    table: SpanTable,
    params: ValidationParams,
    check_deflection: bool,
) -> tuple[float, float] | None:
    for section in _sections_by_depth(params):
        try:
            limit = span_limit(table, kind, section, params)
        except SpanTableError:
            continue
        if span > limit:
            continue
        if check_deflection:
            delta = midspan_deflection(section[0], section[1], span, params)
            if delta > deflection_limit(span, params):
                continue
        return section
    return None


class _Frame:
    def __init__(self) -> None:
        self.members: list[Member] = []
        self.post_count = 0

    def add(
        self,
        name: str,
        lo: tuple[float, float, float],
        hi: tuple[float, float, float],
        section: tuple[float, float] | None = None,
    ) -> None:
        box = make_box(
            [round(v, 6) for v in lo], [round(v, 6) for v in hi], owner=name
        )
        self.members.append(make_member(name, box, section=section))

    def post(self, x: float, y: float, z0: float, z1: float) -> None:
        """Post with its min corner at (x, y)."""
        self.add(
            f"Post_{self.post_count:03d}",
            (x, y, z0),
            (x + POST_SIZE, y + POST_SIZE, z1),
        )
        self.post_count += 1


def _foundation(frame: _Frame, w: float, d: float, base: float) -> None:
    z0, z1 = base - THICKNESS, base
    frame.add("Sill_front", (0, 0, z0), (w, SILL_WIDTH, z1))
    frame.add("Sill_back", (0, d - SILL_WIDTH, z0), (w, d, z1))
    frame.add("Sill_left", (0, SILL_WIDTH, z0), (SILL_WIDTH, d - SILL_WIDTH, z1))
    frame.add(
        "Sill_right", (w - SILL_WIDTH, SILL_WIDTH, z0), (w, d - SILL_WIDTH, z1)
    )
    for x in _even(0, w - POST_SIZE, MAX_POST_SPACING):
        frame.post(x, 0, 0, z0)
        frame.post(x, d - POST_SIZE, 0, z0)
    for y in _even(0, d - POST_SIZE, MAX_POST_SPACING)[1:-1]:
        frame.post(0, y, 0, z0)
        frame.post(w - POST_SIZE, y, 0, z0)


def _center_beam(
    frame: _Frame, spec: FixtureSpec, story: int, base: float, below: float
) -> None:
    w, d = spec.width, spec.depth
    y0, y1 = d / 2 - BEAM_SIZE / 2, d / 2 + BEAM_SIZE / 2
    z0 = base - BEAM_SIZE
    inset = SILL_WIDTH if story == 1 else WALL_DEPTH
    frame.add(f"CenterBeam_s{story}", (inset, y0, z0), (w - inset, y1, base))

    post_y = d / 2 - POST_SIZE / 2
    if story == 1:
        for x in _even(inset, w - inset - POST_SIZE, MAX_POST_SPACING):
            frame.post(x, post_y, 0, z0)
        return
    # upper beams stand on posts in the joist bays of the floor below
    s = spec.joist_spacing
    bays = max(1, round(MAX_POST_SPACING // s))
    m = 0
    while (m + 0.5) * s + POST_SIZE / 2 <= w - inset:
        frame.post((m + 0.5) * s - POST_SIZE / 2, post_y, below, z0)
        m += bays


def _floor(
    frame: _Frame,
    spec: FixtureSpec,
    story: int,
    base: float,
    joist: tuple[float, float],
) -> None:
    w, d, t = spec.width, spec.depth, THICKNESS
    top = base + joist[1]
    frame.add(f"Rim_s{story}_front", (0, 0, base), (w, t, top))
    frame.add(f"Rim_s{story}_back", (0, d - t, base), (w, d, top))
    frame.add(f"Rim_s{story}_left", (0, t, base), (t, d - t, top))
    frame.add(f"Rim_s{story}_right", (w - t, t, base), (w, d - t, top))

    k = 1
    while k * spec.joist_spacing + t / 2 <= w - t + 1e-9:
        x = k * spec.joist_spacing
        name = f"Joist_s{story}_{k - 1:03d}"
        if spec.center_beam:
            frame.add(
                name, (x - t / 2, t, base), (x + t / 2, d / 2 - BEAM_SIZE / 2, top)
            )
            frame.add(
                f"{name}b",
                (x - t / 2, d / 2 + BEAM_SIZE / 2, base),
                (x + t / 2, d - t, top),
            )
        else:
            frame.add(name, (x - t / 2, t, base), (x + t / 2, d - t, top))
        k += 1


def _walls(
    frame: _Frame, spec: FixtureSpec, story: int, floor_top: float, wall_top: float
) -> None:
    w, d, t, p = spec.width, spec.depth, THICKNESS, WALL_DEPTH
    sole = (floor_top, floor_top + t)
    plate = (wall_top - t, wall_top)
    stud_z = (sole[1], plate[0])
    s = spec.stud_spacing

    for wall, y0 in (("front", 0.0), ("back", d - p)):
        frame.add(f"SolePlate_s{story}_{wall}", (0, y0, sole[0]), (w, y0 + p, sole[1]))
        for k, x in enumerate(_stud_positions(0, w, s)):
            frame.add(
                f"Stud_s{story}_{wall}_{k:03d}",
                (x, y0, stud_z[0]),
                (x + t, y0 + p, stud_z[1]),
            )
        frame.add(f"TopPlate_s{story}_{wall}", (0, y0, plate[0]), (w, y0 + p, plate[1]))

    for wall, x0 in (("left", 0.0), ("right", w - p)):
        frame.add(
            f"SolePlate_s{story}_{wall}", (x0, p, sole[0]), (x0 + p, d - p, sole[1])
        )
        for k, y in enumerate(_stud_positions(p, d - p, s)):
            frame.add(
                f"Stud_s{story}_{wall}_{k:03d}",
                (x0, y, stud_z[0]),
                (x0 + p, y + t, stud_z[1]),
            )
        frame.add(
            f"TopPlate_s{story}_{wall}", (x0, p, plate[0]), (x0 + p, d - p, plate[1])
        )


def _roof(
    frame: _Frame, spec: FixtureSpec, eave: float, rafter: tuple[float, float]
) -> None:
    w, d, t = spec.width, spec.depth, THICKNESS
    rise = spec.roof_rise
    ridge_y = (d / 2 - BEAM_SIZE / 2, d / 2 + BEAM_SIZE / 2)
    peak = eave + rise

    frame.add("Ridge", (0, ridge_y[0], peak - BEAM_SIZE), (w, ridge_y[1], peak))
    collar_z = eave + COLLAR_HEIGHT_FRACTION * rise
    for k, x in enumerate(_even(t / 2, w - t / 2, spec.rafter_spacing)):
        frame.add(
            f"Rafter_L{k:03d}",
            (x - t / 2, 0, eave),
            (x + t / 2, ridge_y[0], peak),
            rafter,
        )
        frame.add(
            f"Rafter_R{k:03d}",
            (x - t / 2, ridge_y[1], eave),
            (x + t / 2, d, peak),
            rafter,
        )
        cx = x + t / 2 if x + t / 2 + t <= w else x - t / 2 - t
        frame.add(
            f"Collar_{k:03d}",
            (cx, 0.2 * d, collar_z),
            (cx + t, 0.8 * d, collar_z + WALL_DEPTH),
        )


def generate_gable(
    spec: FixtureSpec,
    table: SpanTable | None = None,
    params: ValidationParams | None = None,
) -> Scene:
    """
    Builds the gable fixture: foundation, then per story a floor system and
    four framed walls, then the roof.

    Raises:
        FixtureError: the fixture spec is invalid, or no standard section carries the
            joist or rafter span under the span table.
    """
    params = params or ValidationParams()
    check_fixture_spec(spec, params)
    table = table or fixture_span_table()
    w, d = spec.width, spec.depth

    if spec.center_beam:
        joist_span = d / 2 - BEAM_SIZE / 2 - THICKNESS
    else:
        joist_span = d - 2 * THICKNESS
    joist = _smallest_section("joist", joist_span, table, params, check_deflection=True)
    if joist is None:
        advice = (
            "reduce the depth"
            if spec.center_beam
            else "set center_beam=True to split the span"
        )
        raise FixtureError(
            f"no standard joist carries a {joist_span:.3f} m span; {advice}"
        )
    rafter_run = d / 2 - BEAM_SIZE / 2
    rafter = _smallest_section(
        "rafter", rafter_run, table, params, check_deflection=False
    )
    if rafter is None:
        raise FixtureError(
            f"no standard rafter carries a {rafter_run:.3f} m run; reduce the depth"
        )

    frame = _Frame()
    levels = story_levels(spec)
    _foundation(frame, w, d, levels[0][0])
    below = 0.0
    for story, (base, top) in enumerate(levels, start=1):
        if spec.center_beam:
            _center_beam(frame, spec, story, base, below)
        _floor(frame, spec, story, base, joist)
        _walls(frame, spec, story, base + joist[1], top)
        below = base
    _roof(frame, spec, levels[-1][1], rafter)

    scene = make_scene(
        frame.members, SceneMeta(w, d, spec.stories, RoofType.GABLE, "gable")
    )
    logging.info(
        f"Generated gable fixture {w}x{d} m, {spec.stories} stories: "
        f"{len(scene.members)} members, joists 38x{round(joist[1] * 1000)}"
    )
    return scene
