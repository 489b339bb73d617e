from framecheck_core.scene_model import Category, Member, Scene
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    format_number,
    make_violation,
    outcome,
)


def spanning_axis(member: Member) -> int:
    """0 when the member runs along x (ties included), 1 along y."""
    dx, dy, _ = member.box.extents()
    return 0 if dx >= dy else 1


def joist_groups(members: list[Member]) -> list[list[Member]]:
    """
    Groups joists by spanning direction, then by overlapping vertical
    intervals. Each group is sorted by its position on the short axis, with
    the name breaking ties.
    """
    groups: list[list[Member]] = []
    for axis in (0, 1):
        same_direction = [m for m in members if spanning_axis(m) == axis]
        same_direction.sort(key=lambda m: (m.box.min_corner[2], m.name))
        band: list[Member] = []
        band_top = float("-inf")
        for member in same_direction:
            z0, z1 = member.box.min_corner[2], member.box.max_corner[2]
            if band and z0 < band_top:
                band.append(member)
                band_top = max(band_top, z1)
            else:
                if band:
                    groups.append(band)
                band, band_top = [member], z1
        if band:
            groups.append(band)

    for group in groups:
        short = 1 - spanning_axis(group[0])
        group.sort(key=lambda m: (m.box.center()[short], m.name))
    return groups


def spacing_deviation(spacing: float, params: ValidationParams) -> float:
    return min(abs(spacing - standard) for standard in params.spacing_standards)


def spacing_compliant(spacing: float, params: ValidationParams) -> bool:
    if spacing <= params.spacing_exempt_below:
        return True
    return spacing_deviation(spacing, params) < params.spacing_tolerance


def t3_oc_spacing(scene: Scene, params: ValidationParams) -> TestOutcome:
    violations = []
    worst = 0.0
    for group in joist_groups(scene.by_category(Category.JOIST)):
        short = 1 - spanning_axis(group[0])
        for a, b in zip(group, group[1:], strict=False):
            spacing = b.box.center()[short] - a.box.center()[short]
            if spacing_compliant(spacing, params):
                continue
            deviation = spacing_deviation(spacing, params)
            worst = max(worst, deviation)
            violations.append(
                make_violation(
                    CheckId.T3,
                    "Joist spacing deviation",
                    "must stay below",
                    Quantity(params.spacing_tolerance, "m"),
                    Quantity(deviation, "m"),
                    members=(a.name, b.name),
                    quantity="deviation",
                    tag=f"spacing {format_number(spacing)} m",
                )
            )
    return outcome(CheckId.T3, violations, worst)
