import logging

from framecheck_core.contact_graph import compute_support
from framecheck_core.errors import ConfigError, SpanTableError
from framecheck_core.scene_model import Scene
from framecheck_core.validators.cantilever import t8_cantilever
from framecheck_core.validators.coverage import (
    coverage_grid,
    t6_roof_coverage,
    t7_gap_detection,
)
from framecheck_core.validators.dimensions import t4_standard_dimensions
from framecheck_core.validators.dual_end import t10_dual_end
from framecheck_core.validators.load_path import t1_load_path, t9_stability
from framecheck_core.validators.params import ValidationParams, check_validation_params
from framecheck_core.validators.report import CheckId, SuiteReport, TestOutcome
from framecheck_core.validators.spacing import t3_oc_spacing
from framecheck_core.validators.span_table import SpanTable
from framecheck_core.validators.spans import t2_span_limits, t5_deflection


def run_suite(
    scene: Scene, table: SpanTable, params: ValidationParams | None = None
) -> SuiteReport:
    """
    Runs T1-T10 in id order. A span-table gap makes the report not
    evaluable: T2 is recorded as "error" and the suite does not pass.

    Raises:
        ConfigError: the parameters are out of range.
    """
    params = params or ValidationParams()
    problems = check_validation_params(params)
    if problems:
        raise ConfigError("; ".join(problems))

    state = compute_support(scene, params.contact)
    grid = coverage_grid(scene, params)

    error = None
    try:
        t2 = t2_span_limits(scene, table, params)
    except SpanTableError as e:
        logging.warning(f"Span limits not evaluable: {e}")
        error = str(e)
        t2 = TestOutcome(CheckId.T2, False)

    outcomes = (
        t1_load_path(scene, params, state),
        t2,
        t3_oc_spacing(scene, params),
        t4_standard_dimensions(scene, params),
        t5_deflection(scene, params),
        t6_roof_coverage(scene, params, grid),
        t7_gap_detection(scene, params, grid),
        t8_cantilever(scene, params),
        t9_stability(scene, params, state),
        t10_dual_end(scene, params),
    )

    verdicts = {o.check_id: "pass" if o.passed else "fail" for o in outcomes}
    if error is not None:
        verdicts[CheckId.T2] = "error"
    violations = tuple(v for o in outcomes for v in o.violations)
    overall = error is None and all(o.passed for o in outcomes)
    logging.debug(
        f"Suite: {sum(o.passed for o in outcomes)}/10 passed, "
        f"{len(violations)} violations, tsi {state.tsi:.3f}"
    )
    return SuiteReport(
        verdicts=verdicts,
        violations=violations,
        tsi=state.tsi,
        overall_pass=overall,
        outcomes=outcomes,
        rho=grid.rho,
        gamma=grid.gamma,
        evaluable=error is None,
        error=error,
    )
