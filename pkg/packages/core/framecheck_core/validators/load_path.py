from framecheck_core.contact_graph import (
    SupportState,
    compute_support,
    unsupported_members,
)
from framecheck_core.scene_model import Scene
from framecheck_core.validators.params import ValidationParams
from framecheck_core.validators.report import (
    CheckId,
    Quantity,
    TestOutcome,
    make_violation,
    outcome,
)


def _support(
    scene: Scene, params: ValidationParams, state: SupportState | None
) -> SupportState:
    return state if state is not None else compute_support(scene, params.contact)


def t1_load_path(
    scene: Scene, params: ValidationParams, state: SupportState | None = None
) -> TestOutcome:
    """Every member must reach the ground through a chain of contacts."""
    state = _support(scene, params, state)
    violations = []
    for name in unsupported_members(scene, state):
        violations.append(
            make_violation(
                CheckId.T1,
                "Member",
                "needs a load path to ground of at least",
                Quantity(1, "path"),
                Quantity(0, "paths"),
                members=(name,),
                tag="floating member",
            )
        )
    return outcome(CheckId.T1, violations, float(state.supported_count))


def t9_stability(
    scene: Scene, params: ValidationParams, state: SupportState | None = None
) -> TestOutcome:
    """
    Topological Stability Index. Passes only when the supported count equals
    the member count, compared as integers.
    """
    state = _support(scene, params, state)
    violations = []
    if state.supported_count != state.member_count:
        names = tuple(unsupported_members(scene, state))
        violations.append(
            make_violation(
                CheckId.T9,
                "Stability index",
                "falls below",
                Quantity(1.0),
                Quantity(state.tsi),
                members=names,
                quantity="index",
            )
        )
    return outcome(CheckId.T9, violations, state.tsi)
