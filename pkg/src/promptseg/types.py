"""Core raster domain types.

Images are numpy arrays throughout: an RGB scene is uint8 of shape (H, W, 3),
a binary mask is bool of shape (H, W). Coordinates follow image convention:
x = column, y = row, origin at the top-left corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

# Scene-sized rasters; kept as plain arrays, validated at the boundaries.
ImageRaster = np.ndarray  # uint8, shape (H, W, 3)
BinaryMask = np.ndarray   # bool, shape (H, W)


class Point(NamedTuple):
    """A pixel location (x = column, y = row)."""

    x: int
    y: int


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box, half-open: x_min <= x < x_max, y_min <= y < y_max."""

    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError(f"degenerate box {self.to_list()}")

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    @property
    def area(self) -> int:
        return self.width * self.height

    def contains(self, point: Point) -> bool:
        return self.x_min <= point.x < self.x_max and self.y_min <= point.y < self.y_max

    def intersect(self, other: "BoundingBox") -> "BoundingBox | None":
        x0 = max(self.x_min, other.x_min)
        y0 = max(self.y_min, other.y_min)
        x1 = min(self.x_max, other.x_max)
        y1 = min(self.y_max, other.y_max)
        if x0 >= x1 or y0 >= y1:
            return None
        return BoundingBox(x0, y0, x1, y1)

    def to_list(self) -> list[int]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(eq=False)
class InstanceMask:
    """One connected building instance.

    Stores only the tight bounding box and the boolean crop inside it, so the
    instance is independent of the scene raster size. `crop[i, j]` covers
    scene pixel (row = bbox.y_min + i, col = bbox.x_min + j).
    """

    instance_id: int
    bbox: BoundingBox
    crop: np.ndarray
    _coords: np.ndarray | None = field(default=None, init=False, repr=False)
    _rep_point: Point | None = field(default=None, init=False, repr=False)
    _skeleton: "list[Point] | None" = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self.crop = np.ascontiguousarray(self.crop, dtype=bool)
        if self.crop.shape != (self.bbox.height, self.bbox.width):
            raise ValueError("crop shape does not match bbox")
        if not self.crop.any():
            raise ValueError("instance has no pixels")

    @property
    def pixel_count(self) -> int:
        return int(np.count_nonzero(self.crop))

    @property
    def coords(self) -> np.ndarray:
        """Absolute (row, col) pixel coordinates, raster-scan order, shape (N, 2)."""
        if self._coords is None:
            rows, cols = np.nonzero(self.crop)
            self._coords = np.stack(
                [rows + self.bbox.y_min, cols + self.bbox.x_min], axis=1
            ).astype(np.int64)
        return self._coords

    def contains_rc(self, row: int, col: int) -> bool:
        if not (self.bbox.y_min <= row < self.bbox.y_max and self.bbox.x_min <= col < self.bbox.x_max):
            return False
        return bool(self.crop[row - self.bbox.y_min, col - self.bbox.x_min])

    def contains(self, point: Point) -> bool:
        return self.contains_rc(point.y, point.x)

    def to_mask(self, shape: tuple[int, int]) -> BinaryMask:
        """Paint the instance into a scene-sized mask."""
        out = np.zeros(shape, dtype=bool)
        out[self.bbox.y_min:self.bbox.y_max, self.bbox.x_min:self.bbox.x_max] = self.crop
        return out

    @classmethod
    def from_mask(cls, mask: BinaryMask, instance_id: int = 1) -> "InstanceMask":
        """Build from a scene-sized mask (the caller vouches for connectivity)."""
        mask = np.asarray(mask, dtype=bool)
        rows, cols = np.nonzero(mask)
        if rows.size == 0:
            raise ValueError("instance has no pixels")
        box = BoundingBox(int(cols.min()), int(rows.min()), int(cols.max()) + 1, int(rows.max()) + 1)
        return cls(instance_id, box, mask[box.y_min:box.y_max, box.x_min:box.x_max])

    @classmethod
    def from_coords(cls, coords, instance_id: int = 1) -> "InstanceMask":
        """Build from an iterable of (row, col) pairs."""
        arr = np.asarray(list(coords), dtype=np.int64).reshape(-1, 2)
        if arr.shape[0] == 0:
            raise ValueError("instance has no pixels")
        y0, x0 = arr.min(axis=0)
        y1, x1 = arr.max(axis=0) + 1
        crop = np.zeros((int(y1 - y0), int(x1 - x0)), dtype=bool)
        crop[arr[:, 0] - y0, arr[:, 1] - x0] = True
        return cls(instance_id, BoundingBox(int(x0), int(y0), int(x1), int(y1)), crop)


def as_binary_mask(arr: np.ndarray) -> BinaryMask:
    """Binarize an 8-bit grayscale mask at >127, pass booleans through."""
    arr = np.asarray(arr)
    if arr.dtype == bool:
        return arr
    return arr > 127


def instances_to_mask(instances: list[InstanceMask], shape: tuple[int, int]) -> BinaryMask:
    out = np.zeros(shape, dtype=bool)
    for inst in instances:
        out[inst.bbox.y_min:inst.bbox.y_max, inst.bbox.x_min:inst.bbox.x_max] |= inst.crop
    return out
