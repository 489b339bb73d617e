"""
Structural data model: boxes, the member taxonomy, members, scenes, and the
JSON scene file format.

All geometry is axis-aligned and in world meters. Scenes are immutable
(NamedTuples over tuples) and safe to share between threads.
"""

import json
import math

from enum import Enum
from pathlib import Path
from typing import Any, NamedTuple

from framecheck_core.constants import PHASE_ORDER, ROOF_TYPES, TAXONOMY
from framecheck_core.errors import SceneParseError, SceneValidationError


Vec3 = tuple[float, float, float]


class Box3(NamedTuple):
    min_corner: Vec3
    max_corner: Vec3

    def extents(self) -> Vec3:
        return (
            self.max_corner[0] - self.min_corner[0],
            self.max_corner[1] - self.min_corner[1],
            self.max_corner[2] - self.min_corner[2],
        )

    def center(self) -> Vec3:
        return (
            (self.min_corner[0] + self.max_corner[0]) / 2,
            (self.min_corner[1] + self.max_corner[1]) / 2,
            (self.min_corner[2] + self.max_corner[2]) / 2,
        )

    def translated(self, offset: Vec3) -> "Box3":
        dx, dy, dz = offset
        (x0, y0, z0), (x1, y1, z1) = self.min_corner, self.max_corner
        return Box3((x0 + dx, y0 + dy, z0 + dz), (x1 + dx, y1 + dy, z1 + dz))


def _vec3(values: Any, owner: str) -> Vec3:
    coords = [float(v) for v in values]
    if len(coords) != 3:
        raise SceneValidationError(f"{owner}: corners must have 3 coordinates")
    return (coords[0], coords[1], coords[2])


def make_box(min_corner: Any, max_corner: Any, owner: str = "box") -> Box3:
    """
    Builds a Box3, checking that every coordinate is finite and that the
    corners are ordered on each axis.
    """
    lo = _vec3(min_corner, owner)
    hi = _vec3(max_corner, owner)
    if not all(math.isfinite(v) for v in (*lo, *hi)):
        raise SceneValidationError(f"{owner}: non-finite coordinate")
    for axis, a, b in zip("xyz", lo, hi, strict=True):
        if a > b:
            raise SceneValidationError(
                f"{owner}: min {a} exceeds max {b} on the {axis} axis"
            )
    return Box3(lo, hi)


class Phase(Enum):
    FOUNDATION = "foundation"
    FLOOR = "floor"
    WALLS = "walls"
    ROOF = "roof"

    @property
    def rank(self) -> int:
        return PHASE_ORDER.index(self.value)


class Category(Enum):
    SILL = "Sill"
    BEAM_POST = "BeamPost"
    POST = "Post"
    RIM = "Rim"
    JOIST = "Joist"
    CENTER_BEAM = "CenterBeam"
    SOLE_PLATE = "SolePlate"
    TOP_PLATE = "TopPlate"
    STUD = "Stud"
    GABLE_STUD = "GableStud"
    HEADER = "Header"
    KING = "King"
    TRIMMER = "Trimmer"
    CRIPPLE = "Cripple"
    RIDGE = "Ridge"
    RAFTER = "Rafter"
    COLLAR = "Collar"
    LOOKOUT = "Lookout"
    PURLIN = "Purlin"

    @property
    def phase(self) -> Phase:
        return _PHASE_BY_PREFIX[self.value]


_PHASE_BY_PREFIX = {
    prefix: Phase(phase) for phase, prefixes in TAXONOMY.items() for prefix in prefixes
}

# Longest prefix wins if two prefixes ever match the same name.
_PREFIXES_LONGEST_FIRST = sorted(_PHASE_BY_PREFIX, key=len, reverse=True)


class RoofType(Enum):
    GABLE = "gable"
    HIP = "hip"
    GAMBREL = "gambrel"
    SHED = "shed"


class Member(NamedTuple):
    name: str
    category: Category
    box: Box3
    section: tuple[float, float] | None = None


class SceneMeta(NamedTuple):
    lot_width: float
    lot_depth: float
    stories: int = 1
    roof_type: RoofType = RoofType.GABLE
    style_tag: str | None = None


class Scene(NamedTuple):
    members: tuple[Member, ...]
    meta: SceneMeta | None = None

    def names(self) -> list[str]:
        return [m.name for m in self.members]

    def by_category(self, *categories: Category) -> list[Member]:
        return [m for m in self.members if m.category in categories]

    def has_category(self, category: Category) -> bool:
        return any(m.category is category for m in self.members)


def classify_member(name: str) -> Category | None:
    """Returns the taxonomy category whose prefix starts `name`, or None."""
    for prefix in _PREFIXES_LONGEST_FIRST:
        if name.startswith(prefix):
            return Category(prefix)
    return None


def make_member(
    name: str,
    box: Box3,
    category: Category | None = None,
    section: tuple[float, float] | None = None,
) -> Member:
    if not name:
        raise SceneValidationError("member name must be non-empty")
    derived = classify_member(name)
    if category is None:
        if derived is None:
            raise SceneValidationError(
                f"member '{name}' matches no taxonomy prefix and has no category"
            )
        category = derived
    elif derived is not None and derived is not category:
        raise SceneValidationError(
            f"member '{name}': stored category {category.value} disagrees "
            f"with name prefix {derived.value}"
        )
    if section is not None:
        w, d = (float(v) for v in section)
        if not (math.isfinite(w) and math.isfinite(d)) or w <= 0 or d <= 0:
            raise SceneValidationError(f"member '{name}': invalid section {section}")
        section = (w, d)
    return Member(name, category, box, section)


def make_scene(
    members: list[Member] | tuple[Member, ...], meta: SceneMeta | None = None
) -> Scene:
    seen: set[str] = set()
    for member in members:
        if member.name in seen:
            raise SceneValidationError(f"duplicate member name '{member.name}'")
        seen.add(member.name)
    return Scene(tuple(members), meta)


def member_span(member: Member) -> float:
    """Clear span approximated by the longest horizontal box extent."""
    dx, dy, _ = member.box.extents()
    return max(dx, dy)


def member_section(member: Member) -> tuple[float, float]:
    """Declared section if present, else the two smallest box extents."""
    if member.section is not None:
        w, d = member.section
        return (min(w, d), max(w, d))
    smallest, median, _ = sorted(member.box.extents())
    return (smallest, median)


# ---------------------------------------------------------------------------
# Scene file format
# ---------------------------------------------------------------------------


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise SceneParseError(f"expected a number, got {value!r}", path=path)
    return float(value)


def _vector(value: Any, path: str) -> list[float]:
    if not isinstance(value, list) or len(value) != 3:
        raise SceneParseError("expected a 3-element array", path=path)
    return [_number(v, f"{path}[{k}]") for k, v in enumerate(value)]


def _parse_meta(raw: Any) -> SceneMeta:
    if not isinstance(raw, dict):
        raise SceneParseError("meta must be an object", path="meta")
    try:
        width = _number(raw["lot_width"], "meta.lot_width")
        depth = _number(raw["lot_depth"], "meta.lot_depth")
    except KeyError as e:
        raise SceneParseError(f"missing field {e.args[0]}", path="meta") from e
    if width <= 0 or depth <= 0:
        raise SceneValidationError("meta: lot_width and lot_depth must be positive")
    stories = raw.get("stories", 1)
    if isinstance(stories, bool) or not isinstance(stories, int) or stories < 1:
        raise SceneValidationError("meta: stories must be a positive integer")
    roof = raw.get("roof_type", "gable")
    if roof not in ROOF_TYPES:
        raise SceneValidationError(f"meta: unknown roof_type {roof!r}")
    style = raw.get("style")
    if style is not None and not isinstance(style, str):
        raise SceneParseError("style must be a string", path="meta.style")
    return SceneMeta(width, depth, stories, RoofType(roof), style)


def _parse_member(raw: Any, index: int) -> Member:
    path = f"members[{index}]"
    if not isinstance(raw, dict):
        raise SceneParseError("member must be an object", path=path)
    name = raw.get("name")
    if not isinstance(name, str) or not name:
        raise SceneParseError("member name must be a non-empty string", path=path)
    for key in ("min", "max"):
        if key not in raw:
            raise SceneParseError(f"missing field {key}", path=path)
    box = make_box(
        _vector(raw["min"], f"{path}.min"),
        _vector(raw["max"], f"{path}.max"),
        owner=f"member '{name}'",
    )
    category = None
    if raw.get("category") is not None:
        try:
            category = Category(raw["category"])
        except ValueError as e:
            raise SceneValidationError(
                f"member '{name}': unknown category {raw['category']!r}"
            ) from e
    section = None
    if raw.get("section") is not None:
        value = raw["section"]
        if not isinstance(value, list) or len(value) != 2:
            raise SceneParseError("section must be [w, d]", path=f"{path}.section")
        section = (
            _number(value[0], f"{path}.section[0]"),
            _number(value[1], f"{path}.section[1]"),
        )
    return make_member(name, box, category, section)


def parse_scene(document: bytes | str) -> Scene:
    """
    Parses a scene document. Member order follows document order.

    Raises:
        SceneParseError: malformed JSON (with line/column/byte) or a field of
            the wrong shape (with its JSON path).
        SceneValidationError: duplicate names, inverted boxes, or category
            disagreements.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SceneParseError(f"not UTF-8: {e.reason}", offset=e.start) from e
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        offset = len(document[: e.pos].encode("utf-8"))
        raise SceneParseError(
            e.msg, line=e.lineno, column=e.colno, offset=offset
        ) from e

    if not isinstance(raw, dict):
        raise SceneParseError("top level must be an object", path="$")
    members_raw = raw.get("members")
    if not isinstance(members_raw, list):
        raise SceneParseError("members must be an array", path="members")

    meta = _parse_meta(raw["meta"]) if raw.get("meta") is not None else None
    members = [_parse_member(m, k) for k, m in enumerate(members_raw)]
    return make_scene(members, meta)


def scene_to_dict(scene: Scene) -> dict[str, Any]:
    doc: dict[str, Any] = {}
    if scene.meta is not None:
        meta: dict[str, Any] = {
            "lot_width": scene.meta.lot_width,
            "lot_depth": scene.meta.lot_depth,
            "stories": scene.meta.stories,
            "roof_type": scene.meta.roof_type.value,
        }
        if scene.meta.style_tag is not None:
            meta["style"] = scene.meta.style_tag
        doc["meta"] = meta
    members = []
    for m in scene.members:
        entry: dict[str, Any] = {
            "name": m.name,
            "category": m.category.value,
            "min": list(m.box.min_corner),
            "max": list(m.box.max_corner),
        }
        if m.section is not None:
            entry["section"] = list(m.section)
        members.append(entry)
    doc["members"] = members
    return doc


def serialize_scene(scene: Scene) -> bytes:
    """Canonical UTF-8 JSON: fixed key order, members in scene order."""
    return (json.dumps(scene_to_dict(scene), indent=2) + "\n").encode("utf-8")


def load_scene(path: Path) -> Scene:
    return parse_scene(Path(path).read_bytes())


def dump_scene(scene: Scene, path: Path) -> None:
    Path(path).write_bytes(serialize_scene(scene))
