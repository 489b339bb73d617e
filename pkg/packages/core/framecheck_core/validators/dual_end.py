import numpy as np

from framecheck_core.constants import DUAL_END_CATEGORIES
from framecheck_core.contact_graph import box_arrays
from framecheck_core.scene_model import Category, Member, Scene
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    Violation,
    make_violation,
    outcome,
)


_DUAL_END = tuple(Category(c) for c in DUAL_END_CATEGORIES)


def _failure_tag(member: Member, end: str) -> str:
    if member.category is Category.RAFTER and end == "top":
        return "hinge failure"
    if member.category is Category.STUD and end == "bottom":
        return "floating column"
    return "free end"


def end_connections(
    scene: Scene, params: ValidationParams
) -> dict[str, tuple[bool, bool]]:
    """
    (bottom, top) connection flags for every rafter and stud tall enough to
    carry connection zones. A connector is any other member whose XY box
    comes within `zone_tolerance_eps_c` and whose z-interval comes within the
    same tolerance of the zone.
    """
    lo, hi = box_arrays(scene)
    eps = params.zone_tolerance_eps_c
    heights = hi[:, 2] - lo[:, 2] if len(lo) else np.zeros(0)
    candidates = [
        k
        for k, m in enumerate(scene.members)
        if m.category in _DUAL_END and heights[k] >= params.min_dualend_height
    ]
    if not candidates:
        return {}

    idx = np.array(candidates)
    xy_gap = np.maximum(
        0.0,
        np.maximum(lo[idx, None, :2], lo[None, :, :2])
        - np.minimum(hi[idx, None, :2], hi[None, :, :2]),
    )
    near_xy = np.all(xy_gap <= eps, axis=2)
    near_xy[np.arange(len(idx)), idx] = False

    band = params.zone_fraction_alpha * heights[idx]
    zones = {
        "bottom": (lo[idx, 2], lo[idx, 2] + band),
        "top": (hi[idx, 2] - band, hi[idx, 2]),
    }
    connected = {}
    for end, (z0, z1) in zones.items():
        z_gap = np.maximum(z0[:, None], lo[None, :, 2]) - np.minimum(
            z1[:, None], hi[None, :, 2]
        )
        connected[end] = np.any(near_xy & (z_gap <= eps), axis=1)

    return {
        scene.members[k].name: (
            bool(connected["bottom"][r]),
            bool(connected["top"][r]),
        )
        for r, k in enumerate(candidates)
    }


def t10_dual_end(scene: Scene, params: ValidationParams) -> TestOutcome:
    by_name = {m.name: m for m in scene.members}
    violations: list[Violation] = []
    for name, ends in end_connections(scene, params).items():
        member = by_name[name]
        for end, ok in zip(("bottom", "top"), ends, strict=True):
            if ok:
                continue
            violations.append(
                make_violation(
                    CheckId.T10,
                    f"{member.category.value} {end} end",
                    "needs at least",
                    Quantity(1, "connector"),
                    Quantity(0, "connectors"),
                    members=(name,),
                    tag=_failure_tag(member, end),
                )
            )
    return outcome(CheckId.T10, violations)
