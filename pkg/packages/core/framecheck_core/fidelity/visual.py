"""
Visual fidelity: alpha-masked colour error between a generated render and a
reference render of the same canonical view, and the five-view aggregate.
"""

import logging

from enum import Enum
from pathlib import Path
from typing import NamedTuple

import numpy as np

from PIL import Image, UnidentifiedImageError

from framecheck_core.constants import SCORING_IMAGE_SIZE, VIEW_CONFIGURATIONS
from framecheck_core.errors import ViewError
from framecheck_core.fidelity.params import FidelityParams
from framecheck_core.validators.report import SuiteReport


class ViewId(Enum):
    FRONT = "front"
    BACK = "back"
    LEFT = "left"
    RIGHT = "right"
    FRONT_RIGHT = "front_right"

    @property
    def camera(self) -> dict[str, float]:
        return VIEW_CONFIGURATIONS[self.value]


CANONICAL_VIEWS = tuple(ViewId)


class RasterView(NamedTuple):
    view_id: ViewId
    rgb: np.ndarray  # (h, w, 3) in [0, 1]
    alpha: np.ndarray  # (h, w) in [0, 1]

    @property
    def width(self) -> int:
        return int(self.rgb.shape[1])

    @property
    def height(self) -> int:
        return int(self.rgb.shape[0])


class VisualScores(NamedTuple):
    per_view: dict[ViewId, float]
    mean_s: float
    joint_visual_pass: bool
    all_views_pass: bool
    mean_pass: bool


def make_view(view_id: ViewId, rgb: np.ndarray, alpha: np.ndarray) -> RasterView:
    rgb = np.asarray(rgb, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if rgb.ndim != 3 or rgb.shape[2] != 3 or alpha.shape != rgb.shape[:2]:
        raise ViewError(
            f"view {view_id.value}: rgb {rgb.shape} and alpha {alpha.shape} "
            "do not agree"
        )
    return RasterView(view_id, rgb, alpha)


def load_view(
    path: Path, view_id: ViewId, size: int = SCORING_IMAGE_SIZE
) -> RasterView:
    """
    Reads a PNG and resizes every channel on its own to size x size with box
    (area-averaging) filtering, so alpha edges stay fractional.
    """
    try:
        with Image.open(path) as image:
            channels = image.convert("RGBA").split()
    except (OSError, UnidentifiedImageError) as e:
        raise ViewError(f"cannot read view {view_id.value} from '{path}': {e}") from e
    resized = [
        np.asarray(
            channel.convert("F").resize((size, size), Image.Resampling.BOX),
            dtype=float,
        )
        / 255.0
        for channel in channels
    ]
    return make_view(view_id, np.stack(resized[:3], axis=-1), resized[3])


def load_views(directory: Path, size: int = SCORING_IMAGE_SIZE) -> list[RasterView]:
    """The five canonical views from `<view_id>.png` files."""
    directory = Path(directory)
    views = []
    for view_id in CANONICAL_VIEWS:
        path = directory / f"{view_id.value}.png"
        if not path.is_file():
            raise ViewError(f"missing view {view_id.value}: no file '{path}'")
        views.append(load_view(path, view_id, size))
    logging.debug(f"Loaded {len(views)} views from {directory}")
    return views


def masked_mse(
    generated: RasterView, reference: RasterView, cutoff: float = 0.0
) -> float | None:
    """
    Squared RGB error summed over channels, averaged over the union of both
    foreground masks. None when neither image has foreground.
    """
    if generated.rgb.shape != reference.rgb.shape:
        raise ViewError(
            f"view {generated.view_id.value}: size {generated.rgb.shape[:2]} "
            f"differs from reference {reference.rgb.shape[:2]}"
        )
    mask = (generated.alpha > cutoff) | (reference.alpha > cutoff)
    count = int(mask.sum())
    if count == 0:
        return None
    squared = ((generated.rgb - reference.rgb) ** 2).sum(axis=-1)
    return float(squared[mask].sum() / count)


def view_score(
    generated: RasterView, reference: RasterView, params: FidelityParams | None = None
) -> float:
    params = params or FidelityParams()
    if generated.view_id is not reference.view_id:
        raise ViewError(
            f"cannot compare view {generated.view_id.value} "
            f"with {reference.view_id.value}"
        )
    mse = masked_mse(generated, reference, params.alpha_cutoff)
    if mse is None:
        return 1.0
    return max(0.0, 1.0 - params.visual_lambda * mse)


def _by_view(views: list[RasterView], side: str) -> dict[ViewId, RasterView]:
    found: dict[ViewId, RasterView] = {}
    for view in views:
        if view.view_id in found:
            raise ViewError(f"duplicate {side} view {view.view_id.value}")
        found[view.view_id] = view
    for view_id in CANONICAL_VIEWS:
        if view_id not in found:
            raise ViewError(f"missing {side} view {view_id.value}")
    return found


def aggregate_scores(
    per_view: dict[ViewId, float], params: FidelityParams
) -> VisualScores:
    ordered = {v: per_view[v] for v in CANONICAL_VIEWS}
    mean_s = sum(ordered.values()) / len(ordered)
    tau = params.visual_threshold_tau
    all_views = all(s >= tau for s in ordered.values())
    mean_ok = mean_s >= tau
    joint = all_views if params.visual_pass_rule == "all_views" else mean_ok
    return VisualScores(ordered, mean_s, joint, all_views, mean_ok)


def visual_scores(
    generated: list[RasterView],
    reference: list[RasterView],
    params: FidelityParams | None = None,
) -> VisualScores:
    """
    Raises:
        ViewError: a canonical view is missing or repeated on either side.
    """
    params = params or FidelityParams()
    gen = _by_view(generated, "generated")
    ref = _by_view(reference, "reference")
    per_view = {v: view_score(gen[v], ref[v], params) for v in CANONICAL_VIEWS}
    scores = aggregate_scores(per_view, params)
    logging.info(
        f"Visual scores: mean {scores.mean_s:.3f}, "
        f"joint pass {scores.joint_visual_pass} ({params.visual_pass_rule})"
    )
    return scores


def joint_pass(report: SuiteReport, visual: VisualScores) -> bool:
    return report.overall_pass and visual.joint_visual_pass
