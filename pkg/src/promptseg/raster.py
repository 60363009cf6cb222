"""Binary-mask raster operations at the instance level.

Everything here is a pure, deterministic function of its inputs; ties are
always broken by smallest row, then smallest column.
"""

from __future__ import annotations

import numpy as np

from promptseg import kernels
from promptseg.types import BinaryMask, BoundingBox, InstanceMask, Point


def label_components(mask: BinaryMask) -> list[InstanceMask]:
    """Split a binary mask into 8-connected instances.

    Instance ids are 1..N in raster-scan order of each component's first
    pixel. An all-false mask yields an empty list.
    """
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ValueError("mask must be a 2-D array")
    labels, n = kernels.label_8(np.ascontiguousarray(arr, dtype=np.uint8))
    if n == 0:
        return []
    rows, cols = np.nonzero(labels)
    ids = labels[rows, cols]
    order = np.argsort(ids, kind="stable")
    rows, cols, ids = rows[order], cols[order], ids[order]
    starts = np.searchsorted(ids, np.arange(1, n + 1))
    ends = np.append(starts[1:], ids.size)

    instances = []
    for i in range(n):
        r = rows[starts[i]:ends[i]]
        c = cols[starts[i]:ends[i]]
        box = BoundingBox(int(c.min()), int(r.min()), int(c.max()) + 1, int(r.max()) + 1)
        crop = labels[box.y_min:box.y_max, box.x_min:box.x_max] == i + 1
        instances.append(InstanceMask(i + 1, box, crop))
    return instances


def distance_transform(inst: InstanceMask) -> np.ndarray:
    """Exact Euclidean distance to the nearest pixel not in the instance.

    Pixels outside the raster count as not-in-instance, so the result only
    depends on the crop. Returned as float64 of crop shape; entries off the
    instance are 0.
    """
    sq = kernels.edt_sq(np.ascontiguousarray(inst.crop, dtype=np.uint8))
    return np.sqrt(sq.astype(np.float64))


def representative_point(inst: InstanceMask) -> Point:
    """The distance-transform argmax: a point always inside the mask.

    Ties by smallest row, then column (argmax scans in raster order).
    """
    if inst._rep_point is None:
        sq = kernels.edt_sq(np.ascontiguousarray(inst.crop, dtype=np.uint8))
        flat = int(np.argmax(sq))
        row, col = divmod(flat, inst.bbox.width)
        inst._rep_point = Point(inst.bbox.x_min + col, inst.bbox.y_min + row)
    return inst._rep_point


def centroid(inst: InstanceMask) -> Point:
    """Pixel-coordinate mean, rounded half-up per axis, snapped onto the mask.

    If the rounded mean misses the mask (L-shapes and the like), the nearest
    mask pixel by Euclidean distance is returned instead.
    """
    coords = inst.coords
    n = coords.shape[0]
    sums = coords.sum(axis=0)
    row = int((2 * int(sums[0]) + n) // (2 * n))
    col = int((2 * int(sums[1]) + n) // (2 * n))
    if inst.contains_rc(row, col):
        return Point(col, row)
    d2 = (coords[:, 0] - row) ** 2 + (coords[:, 1] - col) ** 2
    best = int(np.argmin(d2))  # first minimum: raster order = (row, col) ties
    return Point(int(coords[best, 1]), int(coords[best, 0]))


def skeletonize(inst: InstanceMask) -> list[Point]:
    """Morphological thinning (Zhang-Suen), as points in raster-scan order.

    Thinning can annihilate some tiny blobs (a 2x2 block dies in one pass);
    an empty result falls back to the representative point so the skeleton
    is never empty.
    """
    if inst._skeleton is None:
        thin = kernels.thin_zs(np.ascontiguousarray(inst.crop, dtype=np.uint8))
        rows, cols = np.nonzero(thin)
        if rows.size == 0:
            inst._skeleton = [representative_point(inst)]
        else:
            inst._skeleton = [
                Point(inst.bbox.x_min + int(c), inst.bbox.y_min + int(r))
                for r, c in zip(rows, cols)
            ]
    return inst._skeleton


def bounding_box(inst: InstanceMask) -> BoundingBox:
    """Tight half-open bounds of the instance."""
    return inst.bbox
