"""
Fault injection on fixture scenes. Each mutation kind targets a documented
set of tests and may only drag a documented closure of tests down with it.
"""

import fnmatch

from enum import Enum
from typing import NamedTuple

from framecheck_core.errors import MutationError
from framecheck_core.scene_model import (
    Box3,
    Category,
    Member,
    Scene,
    make_scene,
)
from framecheck_core.validators.report import CheckId
from framecheck_core.validators.spacing import joist_groups, spanning_axis


class MutationKind(Enum):
    REMOVE_MEMBER = "remove_member"
    SHIFT_MEMBER = "shift_member"
    RESIZE_SECTION = "resize_section"
    DELETE_EVERY_OTHER_JOIST = "delete_every_other_joist"
    REMOVE_RIDGE = "remove_ridge"
    FLOAT_MEMBER = "float_member"
    STRETCH_SPAN = "stretch_span"


class Mutation(NamedTuple):
    kind: MutationKind
    target: str
    magnitude: float | None = None


class MutationInfo(NamedTuple):
    default_target: str
    default_magnitude: float | None
    target_tests: frozenset[CheckId]
    closure: frozenset[CheckId]


def _ids(*names: str) -> frozenset[CheckId]:
    return frozenset(CheckId(n) for n in names)


MUTATION_CATALOG = {
    MutationKind.REMOVE_MEMBER: MutationInfo(
        "Post_*", None, _ids("T1", "T9"), _ids("T1", "T9")
    ),
    MutationKind.SHIFT_MEMBER: MutationInfo(
        "Joist_s1_001", 0.15, _ids("T3"), _ids("T3")
    ),
    MutationKind.RESIZE_SECTION: MutationInfo(
        "Stud_s1_front_000", 0.115, _ids("T4"), _ids("T4")
    ),
    MutationKind.DELETE_EVERY_OTHER_JOIST: MutationInfo(
        "Joist_*", None, _ids("T3"), _ids("T3")
    ),
    MutationKind.REMOVE_RIDGE: MutationInfo("Ridge*", None, _ids("T10"), _ids("T10")),
    MutationKind.FLOAT_MEMBER: MutationInfo(
        "Collar_000", 1.0, _ids("T1", "T9"), _ids("T1", "T9")
    ),
    MutationKind.STRETCH_SPAN: MutationInfo(
        "Joist_s1_000", 2.0, _ids("T2", "T5"), _ids("T2", "T5", "T6", "T7")
    ),
}


def make_mutation(
    kind: MutationKind, target: str | None = None, magnitude: float | None = None
) -> Mutation:
    """Fills the target and magnitude from the catalog when omitted."""
    info = MUTATION_CATALOG[kind]
    if magnitude is None:
        magnitude = info.default_magnitude
    if magnitude is not None and magnitude <= 0:
        raise MutationError(
            f"{kind.value}: magnitude must be positive, got {magnitude}"
        )
    return Mutation(kind, target or info.default_target, magnitude)


def parse_mutation(text: str) -> Mutation:
    """Parses `KIND[:TARGET[:MAG]]`, e.g. `shift_member:Joist_s1_004:0.2`."""
    kind_text, _, rest = text.partition(":")
    target, _, magnitude_text = rest.partition(":")
    try:
        kind = MutationKind(kind_text.strip())
    except ValueError as e:
        known = ", ".join(k.value for k in MutationKind)
        raise MutationError(
            f"unknown mutation kind {kind_text!r} (known: {known})"
        ) from e
    magnitude = None
    if magnitude_text:
        try:
            magnitude = float(magnitude_text)
        except ValueError as e:
            raise MutationError(f"magnitude {magnitude_text!r} is not a number") from e
    return make_mutation(kind, target.strip() or None, magnitude)


def _with_box(member: Member, lo: list[float], hi: list[float]) -> Member:
    box = Box3((lo[0], lo[1], lo[2]), (hi[0], hi[1], hi[2]))
    return member._replace(box=box)


def _shift(member: Member, dx: float) -> Member:
    return member._replace(box=member.box.translated((dx, 0.0, 0.0)))


def _resize(member: Member, depth: float) -> Member:
    extents = member.box.extents()
    axis = sorted(range(3), key=lambda k: extents[k])[1]
    lo, hi = list(member.box.min_corner), list(member.box.max_corner)
    hi[axis] = lo[axis] + depth
    resized = _with_box(member, lo, hi)
    if member.section is not None:
        resized = resized._replace(section=(min(member.section), depth))
    return resized


def _lift(member: Member, floor: float) -> Member:
    return member._replace(
        box=member.box.translated((0.0, 0.0, floor - member.box.min_corner[2]))
    )


def _stretch(member: Member, factor: float) -> Member:
    axis = spanning_axis(member)
    lo, hi = list(member.box.min_corner), list(member.box.max_corner)
    hi[axis] = lo[axis] + factor * (hi[axis] - lo[axis])
    return _with_box(member, lo, hi)


def _every_other(joists: list[Member]) -> set[str]:
    """Names on the odd-indexed distinct positions of each joist group."""
    dropped = set()
    for group in joist_groups(joists):
        short = 1 - spanning_axis(group[0])
        positions = sorted({round(m.box.center()[short], 6) for m in group})
        odd = set(positions[1::2])
        dropped |= {m.name for m in group if round(m.box.center()[short], 6) in odd}
    return dropped


def _changed(
    member: Member, kind: MutationKind, magnitude: float, top: float
) -> Member:
    if kind is MutationKind.SHIFT_MEMBER:
        return _shift(member, magnitude)
    if kind is MutationKind.RESIZE_SECTION:
        return _resize(member, magnitude)
    if kind is MutationKind.FLOAT_MEMBER:
        return _lift(member, top + magnitude)
    return _stretch(member, magnitude)


def apply_mutation(scene: Scene, mutation: Mutation) -> Scene:
    """
    Returns a new scene in which only the members matching the target
    pattern changed.

    Raises:
        MutationError: the pattern matches no member.
    """
    matched = {
        m.name
        for m in scene.members
        if fnmatch.fnmatchcase(m.name, mutation.target)
    }
    if not matched:
        raise MutationError(
            f"{mutation.kind.value}: pattern {mutation.target!r} matches no member"
        )
    kind = mutation.kind
    magnitude = mutation.magnitude or 0.0
    top = max(m.box.max_corner[2] for m in scene.members)

    if kind in (MutationKind.REMOVE_MEMBER, MutationKind.REMOVE_RIDGE):
        members = [m for m in scene.members if m.name not in matched]
    elif kind is MutationKind.DELETE_EVERY_OTHER_JOIST:
        joists = [
            m
            for m in scene.members
            if m.name in matched and m.category is Category.JOIST
        ]
        dropped = _every_other(joists)
        members = [m for m in scene.members if m.name not in dropped]
    else:
        members = [
            _changed(m, kind, magnitude, top) if m.name in matched else m
            for m in scene.members
        ]
    return make_scene(members, scene.meta)
