"""
Topological fidelity between a reference scene and a generated one: member
census, Hungarian centroid matching, voxel IoU and their weighted composite.
"""

import logging
import math

from collections import Counter
from typing import NamedTuple

import numpy as np

from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist
from sklearn.metrics import jaccard_score

from framecheck_core.contact_graph import box_arrays
from framecheck_core.fidelity.params import FidelityParams, check_fidelity_params
from framecheck_core.scene_model import Scene


class TopoScores(NamedTuple):
    census_c: float
    match_m: float
    voxel_v: float
    composite_t: float


def census_accuracy(reference: Scene, generated: Scene) -> float:
    ref = Counter(m.category for m in reference.members)
    gen = Counter(m.category for m in generated.members)
    categories = set(ref) | set(gen)
    if not categories:
        return 1.0
    ratios = [min(ref[c], gen[c]) / max(ref[c], gen[c]) for c in categories]
    return sum(ratios) / len(ratios)


def _centroids(scene: Scene) -> np.ndarray:
    lo, hi = box_arrays(scene)
    return (lo + hi) / 2


def _joint_diagonal(reference: Scene, generated: Scene) -> float:
    lo_r, hi_r = box_arrays(reference)
    lo_g, hi_g = box_arrays(generated)
    lo = np.vstack([lo_r, lo_g])
    hi = np.vstack([hi_r, hi_g])
    return float(np.linalg.norm(hi.max(axis=0) - lo.min(axis=0)))


def hungarian_match(
    reference: Scene, generated: Scene, params: FidelityParams | None = None
) -> float:
    """
    Fraction of reference members whose optimally assigned generated partner
    (minimum total centroid distance) lies within `match_tolerance_delta`.
    Unequal counts are padded to a square matrix with dummies that cost more
    than any real pair.
    """
    params = params or FidelityParams()
    n_ref, n_gen = len(reference.members), len(generated.members)
    if n_ref == 0:
        return 1.0
    if n_gen == 0:
        return 0.0

    cost = cdist(_centroids(reference), _centroids(generated))
    size = max(n_ref, n_gen)
    padded = np.full((size, size), _joint_diagonal(reference, generated) + 1.0)
    padded[:n_ref, :n_gen] = cost

    rows, cols = linear_sum_assignment(padded)
    real = (rows < n_ref) & (cols < n_gen)
    within = padded[rows[real], cols[real]] <= params.match_tolerance_delta
    return int(within.sum()) / n_ref


def voxel_grid(
    reference: Scene, generated: Scene, resolution: float
) -> tuple[np.ndarray, tuple[int, int, int]]:
    """Origin and shape of the grid shared by both scenes."""
    lo_r, hi_r = box_arrays(reference)
    lo_g, hi_g = box_arrays(generated)
    lo = np.vstack([lo_r, lo_g]).min(axis=0)
    hi = np.vstack([hi_r, hi_g]).max(axis=0)
    counts = [max(1, math.ceil(float(e) / resolution)) for e in hi - lo]
    return lo, (counts[0], counts[1], counts[2])


def voxelize(
    scene: Scene, origin: np.ndarray, shape: tuple[int, int, int], resolution: float
) -> np.ndarray:
    """Voxel (i, j, k) is filled when its center lies inside any member box."""
    grid = np.zeros(shape, dtype=bool)
    lo, hi = box_arrays(scene)
    first = np.ceil((lo - origin) / resolution - 0.5).astype(int)
    last = np.floor((hi - origin) / resolution - 0.5).astype(int)
    first = np.maximum(first, 0)
    last = np.minimum(last, np.array(shape) - 1)
    for (i0, j0, k0), (i1, j1, k1) in zip(first, last, strict=True):
        if i1 >= i0 and j1 >= j0 and k1 >= k0:
            grid[i0 : i1 + 1, j0 : j1 + 1, k0 : k1 + 1] = True
    return grid


def voxel_iou(
    reference: Scene, generated: Scene, params: FidelityParams | None = None
) -> float:
    params = params or FidelityParams()
    if not reference.members and not generated.members:
        return 1.0
    origin, shape = voxel_grid(reference, generated, params.voxel_resolution)
    ref = voxelize(reference, origin, shape, params.voxel_resolution)
    gen = voxelize(generated, origin, shape, params.voxel_resolution)
    return float(
        jaccard_score(
            ref.ravel().astype(np.uint8),
            gen.ravel().astype(np.uint8),
            zero_division=1.0,
        )
    )


def composite_topo(
    c: float, m: float, v: float, params: FidelityParams | None = None
) -> float:
    params = params or FidelityParams()
    check_fidelity_params(params)
    w_c, w_m, w_v = params.weights
    return w_c * c + w_m * m + w_v * v


def topo_scores(
    reference: Scene, generated: Scene, params: FidelityParams | None = None
) -> TopoScores:
    params = params or FidelityParams()
    check_fidelity_params(params)
    c = census_accuracy(reference, generated)
    m = hungarian_match(reference, generated, params)
    v = voxel_iou(reference, generated, params)
    t = composite_topo(c, m, v, params)
    logging.info(f"Topology scores: C={c:.3f} M={m:.3f} V={v:.3f} T={t:.3f}")
    return TopoScores(c, m, v, t)
