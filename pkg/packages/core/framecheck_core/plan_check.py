"""
Construction-plan documents: parsing, consistency checks against the lot
context and the member taxonomy, and dependency ordering of the steps.
"""

import heapq
import json

from collections import deque
from typing import Any, NamedTuple

from framecheck_core.errors import PlanParseError
from framecheck_core.scene_model import Category, Phase, RoofType


# Two-decimal agreement.
DECIMAL_TOLERANCE = 0.005

_TAXONOMY = {c.value for c in Category}


class LotSize(NamedTuple):
    width: float
    depth: float
    area: float


class PlanAnalysis(NamedTuple):
    stories: int
    roof_type: str
    lot_size: LotSize
    sections: tuple[str, ...] = ()
    description: str = ""
    complexity: str = ""


class SectionBounds(NamedTuple):
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    z_base: float = 0.0


class PlanSection(NamedTuple):
    name: str
    bounds: SectionBounds
    stories: int = 1
    systems: tuple[str, ...] = ()
    dependencies: tuple[str, ...] = ()


class MemberCount(NamedTuple):
    type: str
    count: int


class PlanStep(NamedTuple):
    step: int
    section: str
    phase: str
    step_type: str = ""
    members: tuple[MemberCount, ...] = ()
    depends_on: tuple[int, ...] = ()


class PlanDocument(NamedTuple):
    analysis: PlanAnalysis
    sections: tuple[PlanSection, ...]
    construction_order: tuple[PlanStep, ...]
    expected_member_counts: dict[str, int]


class PlanContext(NamedTuple):
    lot_width: float
    lot_depth: float
    stories: int
    roof_type: RoofType


class PlanViolation(NamedTuple):
    kind: str  # lot_size, context, taxonomy, dependency, reference, bounds, phase_order
    message: str


class TopoResult(NamedTuple):
    order: tuple[int, ...] | None
    cycle: tuple[int, ...] | None = None


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _field(raw: dict[str, Any], key: str, path: str) -> Any:
    if not isinstance(raw, dict):
        raise PlanParseError(f"{path} must be an object")
    if key not in raw:
        raise PlanParseError(f"{path}: missing field '{key}'")
    return raw[key]


def _num(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise PlanParseError(f"{path} must be a number, got {value!r}")
    return float(value)


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise PlanParseError(f"{path} must be an integer, got {value!r}")
    return value


def _count(value: Any, path: str) -> int:
    count = _int(value, path)
    if count < 0:
        raise PlanParseError(f"{path} must not be negative")
    return count


def _list(value: Any, path: str) -> list[Any]:
    if not isinstance(value, list):
        raise PlanParseError(f"{path} must be an array")
    return value


def _parse_analysis(raw: Any) -> PlanAnalysis:
    lot = _field(raw, "lot_size", "analysis")
    lot_size = LotSize(
        _num(_field(lot, "width", "analysis.lot_size"), "analysis.lot_size.width"),
        _num(_field(lot, "depth", "analysis.lot_size"), "analysis.lot_size.depth"),
        _num(_field(lot, "area", "analysis.lot_size"), "analysis.lot_size.area"),
    )
    return PlanAnalysis(
        stories=_int(_field(raw, "stories", "analysis"), "analysis.stories"),
        roof_type=str(_field(raw, "roof_type", "analysis")),
        lot_size=lot_size,
        sections=tuple(
            str(s) for s in _list(raw.get("sections", []), "analysis.sections")
        ),
        description=str(raw.get("description", "")),
        complexity=str(raw.get("complexity", "")),
    )


def _parse_section(raw: Any, k: int) -> PlanSection:
    path = f"sections[{k}]"
    b = _field(raw, "bounds", path)
    bounds = SectionBounds(
        *(
            _num(_field(b, key, f"{path}.bounds"), f"{path}.bounds.{key}")
            for key in ("x_min", "x_max", "y_min", "y_max")
        ),
        z_base=_num(b.get("z_base", 0.0), f"{path}.bounds.z_base"),
    )
    return PlanSection(
        name=str(_field(raw, "name", path)),
        bounds=bounds,
        stories=_int(raw.get("stories", 1), f"{path}.stories"),
        systems=tuple(str(s) for s in _list(raw.get("systems", []), f"{path}.systems")),
        dependencies=tuple(
            str(s) for s in _list(raw.get("dependencies", []), f"{path}.dependencies")
        ),
    )


def _parse_step(raw: Any, k: int) -> PlanStep:
    path = f"construction_order[{k}]"
    members = []
    for j, m in enumerate(_list(raw.get("members", []), f"{path}.members")):
        member_path = f"{path}.members[{j}]"
        members.append(
            MemberCount(
                str(_field(m, "type", member_path)),
                _count(_field(m, "count", member_path), f"{member_path}.count"),
            )
        )
    depends = _list(raw.get("depends_on", []), f"{path}.depends_on")
    return PlanStep(
        step=_int(_field(raw, "step", path), f"{path}.step"),
        section=str(_field(raw, "section", path)),
        phase=str(_field(raw, "phase", path)),
        step_type=str(raw.get("step_type", "")),
        members=tuple(members),
        depends_on=tuple(_int(d, f"{path}.depends_on") for d in depends),
    )


def parse_plan(document: str | bytes) -> PlanDocument:
    """
    Raises:
        PlanParseError: malformed JSON, a missing required field, a negative
            count or a repeated step id.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as e:
        raise PlanParseError(
            f"plan is not valid JSON: {e.msg} (line {e.lineno})"
        ) from e
    if not isinstance(raw, dict):
        raise PlanParseError("plan must be an object")

    analysis = _parse_analysis(_field(raw, "analysis", "plan"))
    sections = tuple(
        _parse_section(s, k)
        for k, s in enumerate(_list(_field(raw, "sections", "plan"), "sections"))
    )
    steps = tuple(
        _parse_step(s, k)
        for k, s in enumerate(
            _list(_field(raw, "construction_order", "plan"), "construction_order")
        )
    )
    seen: set[int] = set()
    for step in steps:
        if step.step in seen:
            raise PlanParseError(f"step id {step.step} appears more than once")
        seen.add(step.step)

    counts_raw = raw.get("expected_member_counts", {})
    if not isinstance(counts_raw, dict):
        raise PlanParseError("expected_member_counts must be an object")
    counts = {
        str(k): _count(v, f"expected_member_counts.{k}") for k, v in counts_raw.items()
    }
    return PlanDocument(analysis, sections, steps, counts)


# ---------------------------------------------------------------------------
# Ordering
# ---------------------------------------------------------------------------


def _edges(plan: PlanDocument) -> dict[int, list[int]]:
    """Dependency -> dependents, restricted to known step ids."""
    ids = {s.step for s in plan.construction_order}
    edges: dict[int, list[int]] = {i: [] for i in ids}
    for step in plan.construction_order:
        for dep in step.depends_on:
            if dep in ids:
                edges[dep].append(step.step)
    return edges


def _shortest_cycle(edges: dict[int, list[int]], nodes: set[int]) -> tuple[int, ...]:
    best: tuple[int, ...] | None = None
    for start in sorted(nodes):
        parents: dict[int, int] = {}
        queue = deque([start])
        found = False
        while queue and not found:
            node = queue.popleft()
            for nxt in sorted(edges[node]):
                if nxt not in nodes:
                    continue
                if nxt == start:
                    parents[start] = node
                    found = True
                    break
                if nxt not in parents:
                    parents[nxt] = node
                    queue.append(nxt)
        if not found:
            continue
        path = [start]
        node = parents[start]
        while node != start:
            path.append(node)
            node = parents[node]
        cycle = tuple([start, *reversed(path[1:])])
        if best is None or len(cycle) < len(best):
            best = cycle
    return best or ()


def topo_order(plan: PlanDocument) -> TopoResult:
    """
    Kahn ordering with ascending step id as the tie-break. On a cycle the
    order is None and `cycle` holds a shortest cycle, starting at its
    smallest id.
    """
    edges = _edges(plan)
    indegree = dict.fromkeys(edges, 0)
    for dependents in edges.values():
        for d in dependents:
            indegree[d] += 1
    ready = [i for i, n in indegree.items() if n == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        node = heapq.heappop(ready)
        order.append(node)
        for d in edges[node]:
            indegree[d] -= 1
            if indegree[d] == 0:
                heapq.heappush(ready, d)
    if len(order) == len(edges):
        return TopoResult(tuple(order))
    remaining = set(edges) - set(order)
    return TopoResult(None, _shortest_cycle(edges, remaining))


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _differs(a: float, b: float) -> bool:
    return abs(a - b) >= DECIMAL_TOLERANCE


def _lot_violations(plan: PlanDocument, ctx: PlanContext) -> list[PlanViolation]:
    lot = plan.analysis.lot_size
    out = []
    if _differs(lot.width, ctx.lot_width):
        out.append(
            PlanViolation(
                "lot_size", f"lot width {lot.width} must be {ctx.lot_width:.2f}"
            )
        )
    if _differs(lot.depth, ctx.lot_depth):
        out.append(
            PlanViolation(
                "lot_size", f"lot depth {lot.depth} must be {ctx.lot_depth:.2f}"
            )
        )
    area = ctx.lot_width * ctx.lot_depth
    if _differs(lot.area, area):
        out.append(PlanViolation("lot_size", f"lot area {lot.area} must be {area:.2f}"))
    if plan.analysis.stories != ctx.stories:
        out.append(
            PlanViolation(
                "context", f"stories {plan.analysis.stories} must be {ctx.stories}"
            )
        )
    if plan.analysis.roof_type != ctx.roof_type.value:
        out.append(
            PlanViolation(
                "context",
                f"roof_type '{plan.analysis.roof_type}' "
                f"must be '{ctx.roof_type.value}'",
            )
        )
    return out


def _taxonomy_violations(plan: PlanDocument) -> list[PlanViolation]:
    phases = {p.value for p in Phase}
    out = []
    for step in plan.construction_order:
        if step.phase not in phases:
            out.append(
                PlanViolation(
                    "taxonomy", f"step {step.step}: unknown phase '{step.phase}'"
                )
            )
        for member in step.members:
            if member.type not in _TAXONOMY:
                out.append(
                    PlanViolation(
                        "taxonomy",
                        f"step {step.step}: unknown member type '{member.type}'",
                    )
                )
    for key in plan.expected_member_counts:
        if key not in _TAXONOMY:
            out.append(
                PlanViolation(
                    "taxonomy", f"expected_member_counts: unknown member type '{key}'"
                )
            )
    return out


def _dependency_violations(plan: PlanDocument) -> list[PlanViolation]:
    ids = {s.step for s in plan.construction_order}
    names = {s.name for s in plan.sections}
    out = []
    for step in plan.construction_order:
        for dep in step.depends_on:
            if dep not in ids:
                out.append(
                    PlanViolation(
                        "dependency", f"step {step.step} depends on unknown step {dep}"
                    )
                )
        if step.section not in names:
            out.append(
                PlanViolation(
                    "reference",
                    f"step {step.step} names unknown section '{step.section}'",
                )
            )
    for section in plan.sections:
        for dep in section.dependencies:
            if dep not in names:
                out.append(
                    PlanViolation(
                        "reference",
                        f"section '{section.name}' depends on unknown section '{dep}'",
                    )
                )
    result = topo_order(plan)
    if result.cycle:
        chain = " -> ".join(str(i) for i in (*result.cycle, result.cycle[0]))
        out.append(PlanViolation("dependency", f"depends_on has a cycle: {chain}"))
    return out


def _fits(width: float, depth: float, ctx: PlanContext) -> bool:
    return (
        width < ctx.lot_width + DECIMAL_TOLERANCE
        and depth < ctx.lot_depth + DECIMAL_TOLERANCE
    )


def _bounds_violations(plan: PlanDocument, ctx: PlanContext) -> list[PlanViolation]:
    out = []
    for section in plan.sections:
        b = section.bounds
        width, depth = b.x_max - b.x_min, b.y_max - b.y_min
        if width <= 0 or depth <= 0:
            out.append(
                PlanViolation("bounds", f"section '{section.name}' has empty bounds")
            )
        elif not _fits(width, depth, ctx):
            out.append(
                PlanViolation(
                    "bounds",
                    f"section '{section.name}' spans {width:.2f} x {depth:.2f} m, "
                    f"larger than the {ctx.lot_width:.2f} x {ctx.lot_depth:.2f} m lot",
                )
            )
    if len(plan.sections) > 1:
        bounds = [s.bounds for s in plan.sections]
        width = max(b.x_max for b in bounds) - min(b.x_min for b in bounds)
        depth = max(b.y_max for b in bounds) - min(b.y_min for b in bounds)
        if not _fits(width, depth, ctx):
            out.append(
                PlanViolation(
                    "bounds",
                    f"sections together span {width:.2f} x {depth:.2f} m, "
                    f"larger than the {ctx.lot_width:.2f} x {ctx.lot_depth:.2f} m lot",
                )
            )
    return out


def check_plan(plan: PlanDocument, ctx: PlanContext) -> list[PlanViolation]:
    """Every rejection reason for the plan; empty when it is accepted."""
    return [
        *_lot_violations(plan, ctx),
        *_taxonomy_violations(plan),
        *_dependency_violations(plan),
        *_bounds_violations(plan, ctx),
    ]


def phase_warnings(plan: PlanDocument) -> list[PlanViolation]:
    """
    Advisory: within a section, every step must (transitively) depend on each
    step of an earlier phase, otherwise some valid order builds out of phase.
    Skipped when the dependencies are cyclic.
    """
    result = topo_order(plan)
    if result.order is None:
        return []
    ranks = {p.value: p.rank for p in Phase}
    steps = {s.step: s for s in plan.construction_order}
    ancestors: dict[int, set[int]] = {}
    for step_id in result.order:
        known = {d for d in steps[step_id].depends_on if d in steps}
        ancestors[step_id] = known.union(*(ancestors[d] for d in known))

    out = []
    for later in result.order:
        b = steps[later]
        if b.phase not in ranks:
            continue
        for a in plan.construction_order:
            if a.section != b.section or a.phase not in ranks:
                continue
            if ranks[a.phase] < ranks[b.phase] and a.step not in ancestors[later]:
                out.append(
                    PlanViolation(
                        "phase_order",
                        f"section '{b.section}': {b.phase} step {b.step} does not "
                        f"depend on {a.phase} step {a.step}",
                    )
                )
    return out
