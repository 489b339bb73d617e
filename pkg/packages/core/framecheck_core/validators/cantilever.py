import math

from framecheck_core.contact_graph import axis_gap
from framecheck_core.scene_model import Category, Member, Scene, member_span
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    Violation,
    make_violation,
    outcome,
)
from framecheck_core.validators.spacing import spanning_axis


def lateral_distance(a: Member, b: Member) -> float:
    """Shortest XY distance between two boxes; 0 when the projections overlap."""
    return math.hypot(axis_gap(a.box, b.box, 0), axis_gap(a.box, b.box, 1))


def _long_sill(
    sill: Member, supports: list[Member], params: ValidationParams
) -> list[Violation]:
    reach = params.cantilever_max_c
    nearby = [p for p in supports if lateral_distance(sill, p) <= reach]
    if len(nearby) < 2:
        return [
            make_violation(
                CheckId.T8,
                "Supports near elevated sill",
                "number fewer than",
                Quantity(2, "supports"),
                Quantity(len(nearby), "supports"),
                members=(sill.name,),
                quantity="count",
                tag="too few supports",
            )
        ]

    axis = spanning_axis(sill)
    nearby.sort(key=lambda p: (p.box.center()[axis], p.name))
    violations = []
    for left, right in zip(nearby, nearby[1:], strict=False):
        gap = right.box.center()[axis] - left.box.center()[axis]
        if gap > params.cantilever_spacing_c_sp:
            violations.append(
                make_violation(
                    CheckId.T8,
                    f"{left.category.value} gap",
                    "exceeds",
                    Quantity(params.cantilever_spacing_c_sp, "m"),
                    Quantity(gap, "m"),
                    members=(left.name, right.name),
                    quantity="spacing",
                    tag=f"under {sill.name}",
                )
            )
    return violations


def _short_sill(
    sill: Member, supports: list[Member], params: ValidationParams
) -> list[Violation]:
    nearest = min((lateral_distance(sill, p) for p in supports), default=math.inf)
    if nearest <= params.cantilever_max_c:
        return []
    return [
        make_violation(
            CheckId.T8,
            "Nearest support",
            "is farther than",
            Quantity(params.cantilever_max_c, "m"),
            Quantity(nearest, "m"),
            members=(sill.name,),
            quantity="distance",
            tag="unsupported cantilever",
        )
    ]


def t8_cantilever(scene: Scene, params: ValidationParams) -> TestOutcome:
    """
    Elevated sills (bottom above `elevated_sill_z`) need ground supports: long
    sills at least two nearby with no projected gap over `c_sp`, short sills
    one within `c_max`.
    """
    ground = params.contact.ground_height
    supports = [m for m in scene.members if m.box.min_corner[2] < ground]
    violations = []
    for sill in scene.by_category(Category.SILL):
        if sill.box.min_corner[2] <= params.elevated_sill_z:
            continue
        if member_span(sill) > params.cantilever_spacing_c_sp:
            violations.extend(_long_sill(sill, supports, params))
        else:
            violations.extend(_short_sill(sill, supports, params))
    return outcome(CheckId.T8, violations)
