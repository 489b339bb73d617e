from typing import NamedTuple

from framecheck_core.constants import DEFAULT_VALIDATION
from framecheck_core.contact_graph import ContactParams


_D = DEFAULT_VALIDATION


class ValidationParams(NamedTuple):
    """Every threshold used by T1-T10. Lengths in meters unless noted."""

    span_tolerance_tau: float = _D["span_tolerance_tau"]
    spacing_standards: tuple[float, ...] = _D["spacing_standards"]
    spacing_tolerance: float = _D["spacing_tolerance"]
    spacing_exempt_below: float = _D["spacing_exempt_below"]
    lumber_set_lambda: tuple[tuple[int, int], ...] = _D["lumber_set_lambda"]
    lumber_tol_w: float = _D["lumber_tol_w"]  # mm
    lumber_tol_d: float = _D["lumber_tol_d"]  # mm
    deflection_load_w: float = _D["deflection_load_w"]  # N/m
    elastic_modulus_e: float = _D["elastic_modulus_e"]  # Pa
    deflection_tolerance_tau_delta: float = _D["deflection_tolerance_tau_delta"]
    grid_cell: float = _D["grid_cell"]
    rafter_margin_mu: float = _D["rafter_margin_mu"]
    coverage_min_rho: float = _D["coverage_min_rho"]
    gap_max_gamma: float = _D["gap_max_gamma"]
    cantilever_max_c: float = _D["cantilever_max_c"]
    cantilever_spacing_c_sp: float = _D["cantilever_spacing_c_sp"]
    elevated_sill_z: float = _D["elevated_sill_z"]
    zone_fraction_alpha: float = _D["zone_fraction_alpha"]
    zone_tolerance_eps_c: float = _D["zone_tolerance_eps_c"]
    min_dualend_height: float = _D["min_dualend_height"]
    contact: ContactParams = ContactParams()


RATIO_FIELDS = (
    "span_tolerance_tau",
    "deflection_tolerance_tau_delta",
    "coverage_min_rho",
    "gap_max_gamma",
    "zone_fraction_alpha",
)


def check_validation_params(params: ValidationParams) -> list[str]:
    """Returns a list of problems; empty when the parameters are usable."""
    problems = []
    for name, value in params._asdict().items():
        if isinstance(value, float | int) and not isinstance(value, bool):
            if value <= 0:
                problems.append(f"{name} must be positive, got {value}")
            elif name in RATIO_FIELDS and value >= 1:
                problems.append(f"{name} must be a ratio in (0, 1), got {value}")
    if not params.spacing_standards or min(params.spacing_standards) <= 0:
        problems.append("spacing_standards must hold positive spacings")
    if not params.lumber_set_lambda:
        problems.append("lumber_set_lambda must not be empty")
    for name, value in params.contact._asdict().items():
        if value <= 0:
            problems.append(f"contact.{name} must be positive, got {value}")
    return problems
