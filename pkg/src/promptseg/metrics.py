"""Pixelwise dataset metrics and true-positive-restricted instance metrics.

Pixel scores (precision, recall, IoU, F1) are micro-averaged: confusion
counts are pooled over the dataset before taking ratios. TP-IoU / TP-F1 are
the mean pair Jaccard / Dice over matched instance pairs, pooled across
images, isolating mask quality from detection misses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from promptseg.errors import DimensionMismatch
from promptseg.types import BinaryMask, InstanceMask


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.fn + other.fn, self.tn + other.tn
        )


@dataclass(frozen=True)
class MatchResult:
    """One-to-one instance matching above an IoU threshold."""

    pairs: list[tuple[int, int, float]]  # (pred_id, gt_id, pair_iou)
    unmatched_pred: list[int]
    unmatched_gt: list[int]


@dataclass
class MetricsReport:
    """The six experiment-grid scores, as percentages, plus the raw evidence."""

    precision: float
    recall: float
    iou: float
    f1: float
    tp_iou: float
    tp_f1: float
    counts: ConfusionCounts
    matches: dict[str, MatchResult] = field(default_factory=dict)
    has_matches: bool = True  # False: no matched pair existed, TP scores reported as 0


@dataclass(frozen=True)
class SceneScore:
    """Per-image scoring unit fed to aggregate()."""

    image_id: str
    counts: ConfusionCounts
    matches: MatchResult


def merge_instance_outputs(
    masks: list[BinaryMask], shape: tuple[int, int] | None = None
) -> BinaryMask:
    """Pixelwise OR of per-instance segmenter outputs into one scene mask."""
    if not masks:
        if shape is None:
            raise DimensionMismatch("empty mask list needs an explicit shape")
        return np.zeros(shape, dtype=bool)
    first = np.asarray(masks[0], dtype=bool)
    if shape is not None and first.shape != tuple(shape):
        raise DimensionMismatch(f"mask shape {first.shape} != declared {tuple(shape)}")
    out = first.copy()
    for m in masks[1:]:
        m = np.asarray(m, dtype=bool)
        if m.shape != out.shape:
            raise DimensionMismatch(f"mask shape {m.shape} != {out.shape}")
        out |= m
    return out


def pixel_confusion(pred: BinaryMask, gt: BinaryMask) -> ConfusionCounts:
    pred = np.asarray(pred, dtype=bool)
    gt = np.asarray(gt, dtype=bool)
    if pred.shape != gt.shape:
        raise DimensionMismatch(f"pred {pred.shape} vs gt {gt.shape}")
    tp = int(np.count_nonzero(pred & gt))
    fp = int(np.count_nonzero(pred & ~gt))
    fn = int(np.count_nonzero(~pred & gt))
    tn = pred.size - tp - fp - fn
    return ConfusionCounts(tp, fp, fn, tn)


def scores(c: ConfusionCounts) -> tuple[float, float, float, float]:
    """(precision, recall, iou, f1) as percentages.

    0/0 ratios are 100% when tp=fp=fn=0 (empty scene, empty prediction) and
    0% otherwise.
    """
    empty_agreement = c.tp == 0 and c.fp == 0 and c.fn == 0

    def ratio(num: int, den: int) -> float:
        if den == 0:
            return 100.0 if empty_agreement else 0.0
        return 100.0 * num / den

    return (
        ratio(c.tp, c.tp + c.fp),
        ratio(c.tp, c.tp + c.fn),
        ratio(c.tp, c.tp + c.fp + c.fn),
        ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn),
    )


def pair_intersection(a: InstanceMask, b: InstanceMask) -> int:
    box = a.bbox.intersect(b.bbox)
    if box is None:
        return 0
    sub_a = a.crop[box.y_min - a.bbox.y_min:box.y_max - a.bbox.y_min,
                   box.x_min - a.bbox.x_min:box.x_max - a.bbox.x_min]
    sub_b = b.crop[box.y_min - b.bbox.y_min:box.y_max - b.bbox.y_min,
                   box.x_min - b.bbox.x_min:box.x_max - b.bbox.x_min]
    return int(np.count_nonzero(sub_a & sub_b))


def pair_iou(a: InstanceMask, b: InstanceMask) -> float:
    inter = pair_intersection(a, b)
    if inter == 0:
        return 0.0
    return inter / (a.pixel_count + b.pixel_count - inter)


def match_instances(
    pred: list[InstanceMask], gt: list[InstanceMask], threshold: float = 0.5
) -> MatchResult:
    """Greedy one-to-one matching in descending pair-IoU order.

    Ties break on smaller pred id, then smaller gt id; pairs with IoU below
    the threshold are rejected.
    """
    if not (0.0 < threshold <= 1.0):
        raise ValueError(f"threshold must be in (0, 1], got {threshold}")
    candidates = []
    for p in pred:
        for g in gt:
            iou = pair_iou(p, g)
            if iou >= threshold:
                candidates.append((-iou, p.instance_id, g.instance_id, iou))
    candidates.sort()
    used_p: set[int] = set()
    used_g: set[int] = set()
    pairs: list[tuple[int, int, float]] = []
    for _, pid, gid, iou in candidates:
        if pid in used_p or gid in used_g:
            continue
        used_p.add(pid)
        used_g.add(gid)
        pairs.append((pid, gid, iou))
    return MatchResult(
        pairs=pairs,
        unmatched_pred=sorted(p.instance_id for p in pred if p.instance_id not in used_p),
        unmatched_gt=sorted(g.instance_id for g in gt if g.instance_id not in used_g),
    )


def tp_metrics(matches: MatchResult) -> tuple[float, float]:
    """(TP-IoU, TP-F1): mean pair Jaccard / Dice, percentages; (0, 0) if no pairs."""
    if not matches.pairs:
        return 0.0, 0.0
    ious = [iou for _, _, iou in matches.pairs]
    dices = [2.0 * iou / (1.0 + iou) for iou in ious]
    return 100.0 * float(np.mean(ious)), 100.0 * float(np.mean(dices))


def build_report(scene_scores: list[SceneScore]) -> MetricsReport:
    """Aggregate per-image scores into one dataset report.

    Pixel metrics micro-average the pooled confusion counts; TP metrics pool
    matched pairs across every image before taking the mean.
    """
    if not scene_scores:
        raise ValueError("nothing to aggregate")
    total = ConfusionCounts()
    pooled_pairs: list[tuple[int, int, float]] = []
    matches: dict[str, MatchResult] = {}
    for s in scene_scores:
        total = total + s.counts
        pooled_pairs.extend(s.matches.pairs)
        matches[s.image_id] = s.matches
    precision, recall, iou, f1 = scores(total)
    pooled = MatchResult(pairs=pooled_pairs, unmatched_pred=[], unmatched_gt=[])
    tp_iou, tp_f1 = tp_metrics(pooled)
    return MetricsReport(
        precision=precision,
        recall=recall,
        iou=iou,
        f1=f1,
        tp_iou=tp_iou,
        tp_f1=tp_f1,
        counts=total,
        matches=matches,
        has_matches=bool(pooled_pairs),
    )


aggregate = build_report
