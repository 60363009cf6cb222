"""The promptable-segmenter contract and its deterministic mock backends.

A segmenter maps (image, prompt) to a single binary mask. The mocks resolve
prompts against a fixed instance list, which makes them exact test oracles:
prompting an instance of the list returns that instance's mask (optionally
dilated), so a pipeline fed with perfect predictions must score 100%.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import numpy as np

from promptseg.types import BinaryMask, ImageRaster, InstanceMask, Point
from promptseg.prompts import Prompt


@dataclass
class SegmenterRequest:
    image: ImageRaster
    prompt: Prompt
    image_id: str = ""


@dataclass
class SegmenterResponse:
    mask: BinaryMask
    score: float


class Segmenter(Protocol):
    def segment(self, req: SegmenterRequest) -> SegmenterResponse: ...


def _resolve(prompt: Prompt, instances: list[InstanceMask]) -> InstanceMask | None:
    """Point resolution first (the more specific signal), then box overlap.

    Box ties break on smaller instance id.
    """
    if prompt.positive_points:
        first = prompt.positive_points[0]
        for inst in instances:
            if inst.contains(first):
                return inst
        return None
    if prompt.box is not None:
        best: InstanceMask | None = None
        best_overlap = 0
        for inst in instances:
            box = prompt.box.intersect(inst.bbox)
            if box is None:
                continue
            sub = inst.crop[box.y_min - inst.bbox.y_min:box.y_max - inst.bbox.y_min,
                            box.x_min - inst.bbox.x_min:box.x_max - inst.bbox.x_min]
            overlap = int(np.count_nonzero(sub))
            if overlap > best_overlap:
                best, best_overlap = inst, overlap
        return best
    return None


def dilate_disc(mask: BinaryMask, radius: int) -> BinaryMask:
    """Binary dilation with a Euclidean disc (offsets with dr^2+dc^2 <= r^2)."""
    mask = np.asarray(mask, dtype=bool)
    if radius <= 0:
        return mask.copy()
    h, w = mask.shape
    out = mask.copy()
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            if dr * dr + dc * dc > radius * radius or (dr == 0 and dc == 0):
                continue
            src = mask[max(0, -dr):h - max(0, dr), max(0, -dc):w - max(0, dc)]
            out[max(0, dr):h - max(0, -dr), max(0, dc):w - max(0, -dc)] |= src
    return out


class OracleSegmenter:
    """Resolves each prompt to one instance of a fixed list and returns it.

    Returns an empty mask when nothing resolves, or when the resolved
    instance contains a negative point (a contradictory prompt).
    """

    def __init__(self, instances: list[InstanceMask]):
        self.instances = instances

    def segment(self, req: SegmenterRequest) -> SegmenterResponse:
        shape = req.image.shape[:2]
        inst = _resolve(req.prompt, self.instances)
        if inst is None or any(inst.contains(p) for p in req.prompt.negative_points):
            return SegmenterResponse(mask=np.zeros(shape, dtype=bool), score=0.0)
        return SegmenterResponse(mask=self._emit(inst, shape), score=1.0)

    def _emit(self, inst: InstanceMask, shape: tuple[int, int]) -> BinaryMask:
        return inst.to_mask(shape)


class DilatingMockSegmenter(OracleSegmenter):
    """Oracle that fattens every resolved mask by a disc: a controllable
    imperfect segmenter for degradation tests. Radius 0 is the oracle."""

    def __init__(self, instances: list[InstanceMask], radius: int = 1):
        super().__init__(instances)
        self.radius = radius

    def _emit(self, inst: InstanceMask, shape: tuple[int, int]) -> BinaryMask:
        return dilate_disc(inst.to_mask(shape), self.radius)


class PassthroughSegmenter(OracleSegmenter):
    """Returns the prompted CNN instance unchanged: the baseline-row backend
    (scores the CNN masks directly)."""
