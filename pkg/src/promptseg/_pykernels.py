"""Pure NumPy/Python raster kernels.

Fallback lane for promptseg._rasterops (the Cython build); the two produce
bit-identical outputs. Selected automatically when the extension is missing,
or forced with PROMPTSEG_PURE_PYTHON=1.

All three kernels treat the world outside the array as background:
out-of-bounds pixels never join a component, count as distance-0 targets for
the EDT, and read as 0 for thinning neighborhoods.
"""

from __future__ import annotations

import numpy as np


def label_8(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected component labeling.

    Two-pass union-find with union-by-minimum, so the root of every class is
    the provisional label created at the component's first raster-scan pixel;
    renumbering roots in ascending order therefore assigns final ids
    1..N in first-encounter order.

    Returns (labels int32 array of mask's shape, component count).
    """
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    # Two horizontally adjacent foreground pixels never both mint a label,
    # so ceil(w/2) per row bounds the provisional count.
    parent = np.arange(h * ((w + 1) // 2) + 2, dtype=np.int64)
    nxt = 1

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, int(parent[x])
        return root

    for r in range(h):
        row = mask[r]
        lab = labels[r]
        above = labels[r - 1] if r > 0 else None
        for c in range(w):
            if not row[c]:
                continue
            best = 0
            if above is not None:
                if c > 0 and above[c - 1]:
                    best = find(int(above[c - 1]))
                if above[c]:
                    n = find(int(above[c]))
                    best = n if best == 0 or n < best else best
                if c + 1 < w and above[c + 1]:
                    n = find(int(above[c + 1]))
                    best = n if best == 0 or n < best else best
            if c > 0 and lab[c - 1]:
                n = find(int(lab[c - 1]))
                best = n if best == 0 or n < best else best
            if best == 0:
                lab[c] = nxt
                nxt += 1
            else:
                lab[c] = best
                # Re-point every touched neighbor class at the minimum root.
                if above is not None:
                    for nc in (c - 1, c, c + 1):
                        if 0 <= nc < w and above[nc]:
                            root = find(int(above[nc]))
                            if root != best:
                                parent[root] = best
                if c > 0 and lab[c - 1]:
                    root = find(int(lab[c - 1]))
                    if root != best:
                        parent[root] = best

    if nxt == 1:
        return labels, 0

    roots = np.array([find(i) for i in range(nxt)], dtype=np.int64)
    uniq = np.unique(roots[1:])  # ascending == first-encounter order
    remap = np.zeros(nxt, dtype=np.int32)
    remap[uniq] = np.arange(1, uniq.size + 1, dtype=np.int32)
    return remap[roots[labels]], int(uniq.size)


def edt_sq(mask: np.ndarray) -> np.ndarray:
    """Exact squared Euclidean distance to the nearest background pixel.

    Background is any zero pixel or anything beyond the array bounds.
    Two-stage algorithm: per-column nearest-zero row distance, then a
    per-row lower envelope of parabolas. Envelope breakpoints are compared
    as integer fractions, so results are exact for any raster size.
    """
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = mask.shape
    fg = mask.astype(bool)

    g = np.empty((h, w), dtype=np.int64)
    prev = np.zeros(w, dtype=np.int64)  # virtual background row above
    for r in range(h):
        prev = np.where(fg[r], prev + 1, 0)
        g[r] = prev
    prev = np.zeros(w, dtype=np.int64)  # virtual background row below
    for r in range(h - 1, -1, -1):
        prev = np.where(fg[r], prev + 1, 0)
        np.minimum(g[r], prev, out=g[r])

    out = np.zeros((h, w), dtype=np.int64)
    v = np.empty(w + 2, dtype=np.int64)
    z_num = np.empty(w + 2, dtype=np.int64)
    z_den = np.empty(w + 2, dtype=np.int64)
    for r in range(h):
        f = g[r] * g[r]
        # Sites are columns 0..w-1 plus virtual background columns -1 and w.
        k = 0
        v[0] = -1
        for q in range(w + 1):
            fq = int(f[q]) if q < w else 0
            while True:
                p = int(v[k])
                fp = int(f[p]) if 0 <= p < w else 0
                num = fq + q * q - fp - p * p
                den = 2 * (q - p)
                if k > 0 and num * z_den[k] <= z_num[k] * den:
                    k -= 1
                else:
                    break
            k += 1
            v[k] = q
            z_num[k] = num
            z_den[k] = den
        j = 0
        row_out = out[r]
        for c in range(w):
            while j < k and z_num[j + 1] <= c * z_den[j + 1]:
                j += 1
            p = int(v[j])
            fp = int(f[p]) if 0 <= p < w else 0
            row_out[c] = (c - p) * (c - p) + fp
    return out


_ZS_DELETE_MASKS = (
    # (first diagonal product indices, second) per sub-iteration:
    # step 0 removes south-east boundary, step 1 north-west.
    ((0, 2, 4), (2, 4, 6)),
    ((0, 2, 6), (0, 4, 6)),
)


def thin_zs(mask: np.ndarray) -> np.ndarray:
    """Zhang-Suen thinning. Returns a uint8 array of the same shape."""
    mask = np.ascontiguousarray(mask, dtype=np.uint8)
    h, w = mask.shape
    pad = np.zeros((h + 2, w + 2), dtype=np.uint8)
    pad[1:-1, 1:-1] = mask

    changed = True
    while changed:
        changed = False
        for step in (0, 1):
            # P2..P9 clockwise from north.
            n = (
                pad[:-2, 1:-1], pad[:-2, 2:], pad[1:-1, 2:], pad[2:, 2:],
                pad[2:, 1:-1], pad[2:, :-2], pad[1:-1, :-2], pad[:-2, :-2],
            )
            center = pad[1:-1, 1:-1]
            b = np.zeros((h, w), dtype=np.int16)
            for ni in n:
                b += ni
            a = np.zeros((h, w), dtype=np.int16)
            for i in range(8):
                a += (n[i] == 0) & (n[(i + 1) % 8] == 1)
            (i1, j1, k1), (i2, j2, k2) = _ZS_DELETE_MASKS[step]
            cond3 = (n[i1] & n[j1] & n[k1]) == 0
            cond4 = (n[i2] & n[j2] & n[k2]) == 0
            kill = (center == 1) & (b >= 2) & (b <= 6) & (a == 1) & cond3 & cond4
            if kill.any():
                center[kill] = 0
                changed = True
    return pad[1:-1, 1:-1]
