"""
Span limits against the allowable-span tables (T2) and mid-span deflection
under uniform load (T5).
"""

from framecheck_core.scene_model import (
    Category,
    Member,
    Scene,
    member_section,
    member_span,
)
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    Violation,
    make_violation,
    outcome,
)
from framecheck_core.validators.span_table import SpanKind, SpanTable, allowable_span


def effective_span(member: Member, purlin_present: bool) -> float:
    """Rafter spans are halved when the scene carries any purlin."""
    span = member_span(member)
    if member.category is Category.RAFTER and purlin_present:
        return span / 2
    return span


def span_limit(
    table: SpanTable,
    kind: SpanKind,
    section_m: tuple[float, float],
    params: ValidationParams,
    member_name: str = "",
) -> float:
    _, span = allowable_span(
        table, kind, section_m, params.lumber_set_lambda, member_name
    )
    return (1 + params.span_tolerance_tau) * span


def t2_span_limits(
    scene: Scene, table: SpanTable, params: ValidationParams
) -> TestOutcome:
    """
    Raises:
        SpanTableError: a joist or rafter section has no table entry.
    """
    purlin_present = scene.has_category(Category.PURLIN)
    violations = []
    worst = 0.0
    for member in scene.by_category(Category.JOIST, Category.RAFTER):
        kind: SpanKind = "joist" if member.category is Category.JOIST else "rafter"
        limit = span_limit(table, kind, member_section(member), params, member.name)
        span = effective_span(member, purlin_present)
        worst = max(worst, span / limit)
        if span > limit:
            subject = "Joist span" if kind == "joist" else "Rafter effective span"
            violations.append(
                make_violation(
                    CheckId.T2,
                    subject,
                    "exceeds",
                    Quantity(limit, "m"),
                    Quantity(span, "m"),
                    members=(member.name,),
                    quantity="span",
                )
            )
    return outcome(CheckId.T2, violations, worst)


def midspan_deflection(
    b: float, h: float, length: float, params: ValidationParams
) -> float:
    """5wL^4 / 384EI for a simply supported rectangular section b x h."""
    inertia = b * h**3 / 12
    if inertia <= 0:
        return float("inf")
    stiffness = 384 * params.elastic_modulus_e * inertia
    return 5 * params.deflection_load_w * length**4 / stiffness


def deflection_limit(length: float, params: ValidationParams) -> float:
    return (1 + params.deflection_tolerance_tau_delta) * length / 360


def _deflection_violation(member: Member, params: ValidationParams) -> Violation | None:
    dx, dy, dz = member.box.extents()
    b, h = min(dx, dy), dz
    length = member_span(member)
    limit = deflection_limit(length, params)
    if b <= 0 or h <= 0:
        return make_violation(
            CheckId.T5,
            "Joist deflection",
            "exceeds",
            Quantity(limit, "m"),
            Quantity(float("inf"), "m"),
            members=(member.name,),
            quantity="deflection",
            tag="degenerate section",
        )
    delta = midspan_deflection(b, h, length, params)
    if delta <= limit:
        return None
    return make_violation(
        CheckId.T5,
        "Joist deflection",
        "exceeds L/360 limit",
        Quantity(limit, "m"),
        Quantity(delta, "m"),
        members=(member.name,),
        quantity="deflection",
    )


def t5_deflection(scene: Scene, params: ValidationParams) -> TestOutcome:
    violations = []
    for member in scene.by_category(Category.JOIST):
        violation = _deflection_violation(member, params)
        if violation is not None:
            violations.append(violation)
    return outcome(CheckId.T5, violations)
