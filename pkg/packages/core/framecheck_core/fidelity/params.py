import math

from typing import Literal, NamedTuple

from framecheck_core.constants import DEFAULT_FIDELITY
from framecheck_core.errors import FidelityConfigError


_D = DEFAULT_FIDELITY

VisualPassRule = Literal["all_views", "mean"]


class FidelityParams(NamedTuple):
    match_tolerance_delta: float = _D["match_tolerance_delta"]
    weights: tuple[float, float, float] = _D["weights"]  # census, match, voxel
    voxel_resolution: float = _D["voxel_resolution"]
    visual_lambda: float = _D["visual_lambda"]
    visual_threshold_tau: float = _D["visual_threshold_tau"]
    alpha_cutoff: float = _D["alpha_cutoff"]
    visual_pass_rule: VisualPassRule = _D["visual_pass_rule"]


def check_fidelity_params(params: FidelityParams) -> None:
    """
    Raises:
        FidelityConfigError: weights do not sum to 1 or a value is out of range.
    """
    if len(params.weights) != 3 or any(w < 0 for w in params.weights):
        raise FidelityConfigError(
            f"weights must be three non-negative values, got {params.weights}"
        )
    if not math.isclose(sum(params.weights), 1.0, abs_tol=1e-9):
        raise FidelityConfigError(f"weights must sum to 1, got {sum(params.weights)}")
    for name in ("match_tolerance_delta", "voxel_resolution", "visual_lambda"):
        if getattr(params, name) <= 0:
            raise FidelityConfigError(f"{name} must be positive")
    if not 0 < params.visual_threshold_tau <= 1:
        raise FidelityConfigError("visual_threshold_tau must lie in (0, 1]")
    if not 0 <= params.alpha_cutoff < 1:
        raise FidelityConfigError("alpha_cutoff must lie in [0, 1)")
    if params.visual_pass_rule not in ("all_views", "mean"):
        raise FidelityConfigError(
            f"unknown visual_pass_rule {params.visual_pass_rule!r}"
        )
