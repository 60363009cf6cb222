"""Prompt generation: one InstanceMask in, one Prompt out, per strategy.

Nine strategies cover the full experiment grid: single representative point,
single point + negative point, skeleton multi-points, random multi-points,
random + single, random + negative, bounding box, box + single point, and
box + multi-points. Generation is deterministic: the effective RNG seed is
derived from (strategy seed, image id, instance id), so worker scheduling
cannot change sampled points.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from promptseg import raster
from promptseg.errors import EmptyCandidateRegion
from promptseg.types import BinaryMask, BoundingBox, InstanceMask, Point


class StrategyKind(str, Enum):
    SINGLE_POINT = "single_point"
    SINGLE_POINT_PLUS_NEGATIVE = "single_point_plus_negative"
    SKELETON_MULTI_POINT = "skeleton_multi_point"
    RANDOM_MULTI_POINT = "random_multi_point"
    RANDOM_MULTI_PLUS_SINGLE = "random_multi_plus_single"
    RANDOM_MULTI_PLUS_NEGATIVE = "random_multi_plus_negative"
    BBOX = "bbox"
    BBOX_PLUS_SINGLE = "bbox_plus_single"
    BBOX_PLUS_MULTI = "bbox_plus_multi"


class NegativeMode(str, Enum):
    BACKGROUND = "background"
    INSIDE_BOX = "inside_box"


# Experiment-grid row labels, in published row order.
STRATEGY_LABELS: dict[StrategyKind, str] = {
    StrategyKind.SINGLE_POINT: "Single-point",
    StrategyKind.SINGLE_POINT_PLUS_NEGATIVE: "Single-point + Negative-point",
    StrategyKind.SKELETON_MULTI_POINT: "Skeleton Multiple-points",
    StrategyKind.RANDOM_MULTI_POINT: "Random Multiple-points",
    StrategyKind.RANDOM_MULTI_PLUS_SINGLE: "Random Multiple-points + Single-point",
    StrategyKind.RANDOM_MULTI_PLUS_NEGATIVE: "Random Multiple-points + Negative-point",
    StrategyKind.BBOX: "Bounding-box",
    StrategyKind.BBOX_PLUS_SINGLE: "Bounding-box + Single-point",
    StrategyKind.BBOX_PLUS_MULTI: "Bounding-box + Multiple-points",
}
LABEL_TO_KIND = {label: kind for kind, label in STRATEGY_LABELS.items()}
BASELINE_LABEL = "baseline U-Net-based CNN"

_BOX_KINDS = frozenset(
    {StrategyKind.BBOX, StrategyKind.BBOX_PLUS_SINGLE, StrategyKind.BBOX_PLUS_MULTI}
)
_NEGATIVE_KINDS = frozenset(
    {StrategyKind.SINGLE_POINT_PLUS_NEGATIVE, StrategyKind.RANDOM_MULTI_PLUS_NEGATIVE}
)


@dataclass(frozen=True)
class StrategySpec:
    """One experiment-grid row: a strategy kind plus its knobs."""

    kind: StrategyKind
    k_points: int = 5
    n_negative: int = 1
    negative_mode: NegativeMode | None = None  # None: inside-box when a box is present, else background
    seed: int = 0

    @property
    def label(self) -> str:
        return STRATEGY_LABELS[self.kind]

    @property
    def wants_negatives(self) -> bool:
        return self.kind in _NEGATIVE_KINDS and self.n_negative > 0

    def resolved_negative_mode(self) -> NegativeMode:
        if self.negative_mode is not None:
            return self.negative_mode
        return NegativeMode.INSIDE_BOX if self.kind in _BOX_KINDS else NegativeMode.BACKGROUND


@dataclass
class Prompt:
    """The conditioning input handed to a segmenter."""

    positive_points: list[Point] = field(default_factory=list)
    negative_points: list[Point] = field(default_factory=list)
    box: BoundingBox | None = None

    def __post_init__(self) -> None:
        if not self.positive_points and self.box is None:
            raise ValueError("a prompt needs positive points or a box")


def default_grid(seed: int = 0, k_points: int = 5, n_negative: int = 1) -> list[StrategySpec]:
    """All nine strategies in published row order."""
    return [
        StrategySpec(kind, k_points=k_points, n_negative=n_negative, seed=seed)
        for kind in STRATEGY_LABELS
    ]


def rng_for_instance(seed: int, image_id: str, instance_id: int) -> np.random.Generator:
    """Stable per-instance generator: immune to hash salting and run order."""
    digest = hashlib.blake2b(
        f"{seed}|{image_id}|{instance_id}".encode(), digest_size=8
    ).digest()
    return np.random.default_rng(int.from_bytes(digest, "big"))


def gen_single_point(inst: InstanceMask) -> Prompt:
    """One representative point, guaranteed inside the mask."""
    return Prompt(positive_points=[raster.representative_point(inst)])


def gen_negative_points(
    inst: InstanceMask,
    scene_mask: BinaryMask,
    mode: NegativeMode,
    n: int,
    rng: np.random.Generator,
) -> list[Point]:
    """Sample points off the instance: scene background, or inside its box.

    Raises EmptyCandidateRegion when no candidate pixel exists (an instance
    that fills its own box, or a scene with no background). Fewer than n
    candidates yield all of them.
    """
    if mode is NegativeMode.BACKGROUND:
        rows, cols = np.nonzero(~np.asarray(scene_mask, dtype=bool))
    else:
        rows, cols = np.nonzero(~inst.crop)
        rows = rows + inst.bbox.y_min
        cols = cols + inst.bbox.x_min
    if rows.size == 0:
        raise EmptyCandidateRegion(
            f"no candidate pixels for negative points (mode={mode.value}, instance={inst.instance_id})"
        )
    take = min(n, rows.size)
    picks = rng.choice(rows.size, size=take, replace=False)
    return [Point(int(cols[i]), int(rows[i])) for i in picks]


def gen_random_points(inst: InstanceMask, k: int, rng: np.random.Generator) -> Prompt:
    """min(k, |pixels|) distinct in-mask points, uniform without replacement."""
    coords = inst.coords
    take = min(k, coords.shape[0])
    picks = rng.choice(coords.shape[0], size=take, replace=False)
    return Prompt(
        positive_points=[Point(int(coords[i, 1]), int(coords[i, 0])) for i in picks]
    )


def gen_skeleton_points(inst: InstanceMask, k: int) -> Prompt:
    """Centroid first, then farthest-point sampling over the skeleton.

    Each subsequent point is the skeleton pixel maximizing the minimum
    distance to the points already chosen (ties: smallest row, then column),
    which pushes the picks toward the extremities the way the published
    visualizations show. Duplicates are dropped, so small skeletons can
    yield fewer than k points.
    """
    points = [raster.centroid(inst)]
    if k <= 1:
        return Prompt(positive_points=points)
    skel = raster.skeletonize(inst)
    cand = np.array([(p.y, p.x) for p in skel if p not in points], dtype=np.int64)
    if cand.size:
        first = points[0]
        min_d2 = (cand[:, 0] - first.y) ** 2 + (cand[:, 1] - first.x) ** 2
        alive = np.ones(cand.shape[0], dtype=bool)
        while len(points) < k and alive.any():
            masked = np.where(alive, min_d2, -1)
            best = int(np.argmax(masked))  # first max: raster order breaks ties
            chosen = Point(int(cand[best, 1]), int(cand[best, 0]))
            points.append(chosen)
            alive[best] = False
            d2 = (cand[:, 0] - chosen.y) ** 2 + (cand[:, 1] - chosen.x) ** 2
            np.minimum(min_d2, d2, out=min_d2)
    return Prompt(positive_points=points)


def gen_bbox(inst: InstanceMask) -> Prompt:
    """The tight bounding box alone: no points."""
    return Prompt(box=raster.bounding_box(inst))


def generate(
    inst: InstanceMask,
    scene_mask: BinaryMask,
    spec: StrategySpec,
    image_id: str = "",
) -> Prompt:
    """Compose the primitive generators according to the strategy kind.

    An EmptyCandidateRegion from negative sampling is absorbed: the prompt is
    emitted without negatives. Callers spot the fallback by comparing
    spec.wants_negatives against the emitted prompt.
    """
    kind = spec.kind
    rng = rng_for_instance(spec.seed, image_id, inst.instance_id)

    if kind is StrategyKind.SINGLE_POINT:
        prompt = gen_single_point(inst)
    elif kind is StrategyKind.SINGLE_POINT_PLUS_NEGATIVE:
        prompt = gen_single_point(inst)
    elif kind is StrategyKind.SKELETON_MULTI_POINT:
        prompt = gen_skeleton_points(inst, spec.k_points)
    elif kind is StrategyKind.RANDOM_MULTI_POINT:
        prompt = gen_random_points(inst, spec.k_points, rng)
    elif kind is StrategyKind.RANDOM_MULTI_PLUS_SINGLE:
        prompt = gen_random_points(inst, spec.k_points, rng)
        prompt.positive_points.append(raster.representative_point(inst))
    elif kind is StrategyKind.RANDOM_MULTI_PLUS_NEGATIVE:
        prompt = gen_random_points(inst, spec.k_points, rng)
    elif kind is StrategyKind.BBOX:
        prompt = gen_bbox(inst)
    elif kind is StrategyKind.BBOX_PLUS_SINGLE:
        prompt = gen_bbox(inst)
        prompt.positive_points = [raster.representative_point(inst)]
    elif kind is StrategyKind.BBOX_PLUS_MULTI:
        prompt = gen_random_points(inst, spec.k_points, rng)
        prompt.box = raster.bounding_box(inst)
    else:  # pragma: no cover - exhaustive enum
        raise ValueError(f"unhandled strategy kind {kind}")

    if spec.wants_negatives:
        try:
            prompt.negative_points = gen_negative_points(
                inst, scene_mask, spec.resolved_negative_mode(), spec.n_negative, rng
            )
        except EmptyCandidateRegion:
            prompt.negative_points = []
    return prompt
