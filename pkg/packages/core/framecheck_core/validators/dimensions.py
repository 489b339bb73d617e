from framecheck_core.scene_model import Member, Scene
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    Violation,
    format_number,
    make_violation,
    outcome,
)
from framecheck_core.validators.span_table import nearest_standard_section


def matching_standard(
    w_mm: float, d_mm: float, params: ValidationParams
) -> tuple[int, int] | None:
    """First lumber pair within (lumber_tol_w, lumber_tol_d) of the section, if any."""
    for w_std, d_std in params.lumber_set_lambda:
        if (
            abs(w_mm - w_std) < params.lumber_tol_w
            and abs(d_mm - d_std) < params.lumber_tol_d
        ):
            return (w_std, d_std)
    return None


def _off_standard(
    member: Member, w_m: float, d_m: float, params: ValidationParams, tag: str
) -> Violation:
    w_std, d_std = nearest_standard_section((w_m, d_m), params.lumber_set_lambda)
    offset = ((w_m * 1000 - w_std) ** 2 + (d_m * 1000 - d_std) ** 2) ** 0.5
    size = f"{format_number(w_m * 1000)}x{format_number(d_m * 1000)} mm"
    return make_violation(
        CheckId.T4,
        f"Cross-section offset from nearest standard {w_std}x{d_std}",
        "breaks the tolerance of",
        Quantity(params.lumber_tol_w, "mm"),
        Quantity(offset, "mm"),
        members=(member.name,),
        quantity="offset",
        tag=f"{tag} {size}".strip(),
    )


def _member_violations(member: Member, params: ValidationParams) -> list[Violation]:
    smallest, median, _ = sorted(member.box.extents())
    if member.section is None:
        if matching_standard(smallest * 1000, median * 1000, params) is None:
            return [_off_standard(member, smallest, median, params, "")]
        return []

    w, d = sorted(member.section)
    violations = []
    if matching_standard(w * 1000, d * 1000, params) is None:
        violations.append(_off_standard(member, w, d, params, "declared"))
    if abs(smallest - w) * 1000 >= params.lumber_tol_w:
        violations.append(
            make_violation(
                CheckId.T4,
                "Box thickness",
                f"must be within {format_number(params.lumber_tol_w)} mm "
                "of declared width",
                Quantity(w * 1000, "mm"),
                Quantity(smallest * 1000, "mm"),
                members=(member.name,),
                quantity="thickness",
                tag="declared section does not fit",
            )
        )
    depth_floor = d * 1000 - params.lumber_tol_d
    if median * 1000 < depth_floor:
        violations.append(
            make_violation(
                CheckId.T4,
                "Box depth",
                "falls short of declared depth less tolerance",
                Quantity(depth_floor, "mm"),
                Quantity(median * 1000, "mm"),
                members=(member.name,),
                quantity="depth",
                tag="declared section does not fit",
            )
        )
    return violations


def t4_standard_dimensions(scene: Scene, params: ValidationParams) -> TestOutcome:
    violations = []
    for member in scene.members:
        violations.extend(_member_violations(member, params))
    return outcome(CheckId.T4, violations)
