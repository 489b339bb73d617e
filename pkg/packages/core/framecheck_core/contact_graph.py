"""
Member contact graph, ground set, support propagation and the Topological
Stability Index.
"""

import logging

from typing import Literal, NamedTuple

import numpy as np

from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from framecheck_core.constants import DEFAULT_CONTACT
from framecheck_core.scene_model import Box3, Member, Scene


AXES = {"x": 0, "y": 1, "z": 2}

# Slack added to the sweep prefilter; candidates are re-checked exactly.
_SWEEP_SLACK = 1e-9

AdjacencyMethod = Literal["naive", "sweep"]


class ContactParams(NamedTuple):
    contact_tolerance_eps: float = DEFAULT_CONTACT["contact_tolerance_eps"]
    ground_height: float = DEFAULT_CONTACT["ground_height"]


class SupportState(NamedTuple):
    pairs: tuple[tuple[int, int], ...]
    grounded: np.ndarray
    supported: np.ndarray
    tsi: float

    @property
    def member_count(self) -> int:
        return len(self.supported)

    @property
    def supported_count(self) -> int:
        return int(self.supported.sum())

    def neighbors(self, index: int) -> list[int]:
        out = [j for i, j in self.pairs if i == index]
        out += [i for i, j in self.pairs if j == index]
        return sorted(out)


def axis_gap(a: Box3, b: Box3, axis: int | str) -> float:
    """Separation of two boxes along one axis; 0 when they overlap or touch."""
    k = AXES[axis] if isinstance(axis, str) else axis
    return max(
        0.0,
        max(a.min_corner[k], b.min_corner[k]) - min(a.max_corner[k], b.max_corner[k]),
    )


def are_adjacent(a: Member, b: Member, params: ContactParams) -> bool:
    eps = params.contact_tolerance_eps
    return all(axis_gap(a.box, b.box, k) <= eps for k in range(3))


def box_arrays(scene: Scene) -> tuple[np.ndarray, np.ndarray]:
    """Member boxes as (n, 3) arrays of min and max corners."""
    if not scene.members:
        return np.zeros((0, 3)), np.zeros((0, 3))
    lo = np.array([m.box.min_corner for m in scene.members], dtype=float)
    hi = np.array([m.box.max_corner for m in scene.members], dtype=float)
    return lo, hi


def _gaps(
    lo_a: np.ndarray, hi_a: np.ndarray, lo_b: np.ndarray, hi_b: np.ndarray
) -> np.ndarray:
    return np.maximum(0.0, np.maximum(lo_a, lo_b) - np.minimum(hi_a, hi_b))


def _naive_pairs(lo: np.ndarray, hi: np.ndarray, eps: float) -> list[tuple[int, int]]:
    gaps = _gaps(lo[:, None, :], hi[:, None, :], lo[None, :, :], hi[None, :, :])
    close = np.all(gaps <= eps, axis=2)
    i, j = np.nonzero(np.triu(close, k=1))
    return list(zip(i.tolist(), j.tolist(), strict=True))


def _sweep_pairs(lo: np.ndarray, hi: np.ndarray, eps: float) -> list[tuple[int, int]]:
    order = np.argsort(lo[:, 0], kind="stable")
    lo_x_sorted = lo[order, 0]
    pairs: list[tuple[int, int]] = []
    for rank, i in enumerate(order):
        end = int(
            np.searchsorted(lo_x_sorted, hi[i, 0] + eps + _SWEEP_SLACK, side="right")
        )
        if end <= rank + 1:
            continue
        candidates = order[rank + 1 : end]
        gaps = _gaps(lo[i], hi[i], lo[candidates], hi[candidates])
        for j in candidates[np.all(gaps <= eps, axis=1)].tolist():
            pairs.append((min(int(i), j), max(int(i), j)))
    pairs.sort()
    return pairs


def adjacency_pairs(
    lo: np.ndarray,
    hi: np.ndarray,
    eps: float,
    method: AdjacencyMethod = "sweep",
) -> list[tuple[int, int]]:
    """
    All index pairs (i < j) whose boxes are within `eps` on every axis,
    sorted. `naive` checks every pair; `sweep` prunes on the x axis first and
    returns the same list.
    """
    if len(lo) < 2:
        return []
    if method == "naive":
        return _naive_pairs(lo, hi, eps)
    return _sweep_pairs(lo, hi, eps)


def compute_support(
    scene: Scene,
    params: ContactParams | None = None,
    method: AdjacencyMethod = "sweep",
) -> SupportState:
    """
    Grounded members have z_min below the ground height; a member is
    supported when a chain of contacts links it to a grounded member. This is
    the least fixed point of the propagation rule, so the result does not
    depend on member order.
    """
    params = params or ContactParams()
    n = len(scene.members)
    if n == 0:
        empty = np.zeros(0, dtype=bool)
        return SupportState((), empty, empty, 1.0)

    lo, hi = box_arrays(scene)
    pairs = adjacency_pairs(lo, hi, params.contact_tolerance_eps, method)
    grounded = lo[:, 2] < params.ground_height

    if pairs:
        rows, cols = zip(*pairs, strict=True)
        graph = coo_matrix((np.ones(len(pairs)), (rows, cols)), shape=(n, n))
        _, labels = connected_components(graph, directed=False)
    else:
        labels = np.arange(n)
    supported = np.isin(labels, labels[grounded])

    grounded.setflags(write=False)
    supported.setflags(write=False)
    tsi = float(supported.sum()) / n
    logging.debug(
        f"Support: {len(pairs)} contacts, {int(grounded.sum())} grounded, "
        f"{int(supported.sum())}/{n} supported"
    )
    return SupportState(tuple(pairs), grounded, supported, tsi)


def supported_members(scene: Scene, state: SupportState) -> list[str]:
    return [m.name for m, ok in zip(scene.members, state.supported, strict=True) if ok]


def unsupported_members(scene: Scene, state: SupportState) -> list[str]:
    return [
        m.name
        for m, ok in zip(scene.members, state.supported, strict=True)
        if not ok
    ]
