"""Independent reference implementations used only to check the product code.

Everything here favors obviousness over speed: BFS flood fill for labeling,
all-pairs brute force for distances, per-pixel loops for thinning, exhaustive
assignment search for matching. None of it shares code with promptseg.
"""

from __future__ import annotations

from collections import deque

import numpy as np


def flood_fill_label(mask: np.ndarray) -> tuple[np.ndarray, int]:
    """8-connected labeling by BFS, ids in raster-scan order of first pixel."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    labels = np.zeros((h, w), dtype=np.int32)
    next_id = 0
    for r0 in range(h):
        for c0 in range(w):
            if not mask[r0, c0] or labels[r0, c0]:
                continue
            next_id += 1
            labels[r0, c0] = next_id
            queue = deque([(r0, c0)])
            while queue:
                r, c = queue.popleft()
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        nr, nc = r + dr, c + dc
                        if 0 <= nr < h and 0 <= nc < w and mask[nr, nc] and not labels[nr, nc]:
                            labels[nr, nc] = next_id
                            queue.append((nr, nc))
    return labels, next_id


def brute_edt_sq(mask: np.ndarray) -> np.ndarray:
    """Min squared distance from each foreground pixel to any background pixel,
    including a virtual background ring just outside the array."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    fg = np.argwhere(mask)
    bg = [np.argwhere(~mask)] if (~mask).any() else []
    ring = []
    for c in range(-1, w + 1):
        ring.append((-1, c))
        ring.append((h, c))
    for r in range(0, h):
        ring.append((r, -1))
        ring.append((r, w))
    bg.append(np.array(ring, dtype=np.int64))
    bg_all = np.concatenate(bg, axis=0)
    out = np.zeros((h, w), dtype=np.int64)
    if fg.size:
        d2 = (
            (fg[:, None, 0] - bg_all[None, :, 0]) ** 2
            + (fg[:, None, 1] - bg_all[None, :, 1]) ** 2
        )
        out[fg[:, 0], fg[:, 1]] = d2.min(axis=1)
    return out


def brute_representative_point(mask: np.ndarray) -> tuple[int, int]:
    """(row, col) of the brute-force EDT argmax, raster-order tie rule."""
    sq = brute_edt_sq(mask)
    flat = int(np.argmax(sq))
    return flat // mask.shape[1], flat % mask.shape[1]


def _neighbours(img: np.ndarray, r: int, c: int) -> list[int]:
    """P2..P9 clockwise from north; out-of-bounds reads as 0."""
    h, w = img.shape

    def at(rr, cc):
        return int(img[rr, cc]) if 0 <= rr < h and 0 <= cc < w else 0

    return [
        at(r - 1, c), at(r - 1, c + 1), at(r, c + 1), at(r + 1, c + 1),
        at(r + 1, c), at(r + 1, c - 1), at(r, c - 1), at(r - 1, c - 1),
    ]


def zhang_suen_reference(mask: np.ndarray) -> np.ndarray:
    """Textbook Zhang-Suen thinning, per-pixel loops."""
    img = np.asarray(mask, dtype=np.uint8).copy()
    h, w = img.shape
    while True:
        any_change = False
        for step in (0, 1):
            marked = []
            for r in range(h):
                for c in range(w):
                    if not img[r, c]:
                        continue
                    p = _neighbours(img, r, c)
                    b = sum(p)
                    if not (2 <= b <= 6):
                        continue
                    ring = p + p[:1]
                    a = sum(1 for i in range(8) if ring[i] == 0 and ring[i + 1] == 1)
                    if a != 1:
                        continue
                    if step == 0:
                        if p[0] * p[2] * p[4] == 0 and p[2] * p[4] * p[6] == 0:
                            marked.append((r, c))
                    else:
                        if p[0] * p[2] * p[6] == 0 and p[0] * p[4] * p[6] == 0:
                            marked.append((r, c))
            for r, c in marked:
                img[r, c] = 0
            if marked:
                any_change = True
        if not any_change:
            return img


def exhaustive_match(
    ious: dict[tuple[int, int], float],
    pred_ids: list[int],
    gt_ids: list[int],
    threshold: float,
) -> list[tuple[int, int]]:
    """Best one-to-one assignment over pairs with IoU >= threshold.

    Optimal means: most pairs, then largest IoU sum, then lexicographically
    smallest sorted pair list. Pure recursion over every assignment.
    """
    eligible = {
        pid: sorted(g for g in gt_ids if ious.get((pid, g), 0.0) >= threshold)
        for pid in pred_ids
    }

    def key(pairs: list[tuple[int, int]]) -> tuple:
        spairs = sorted(pairs)
        # negated pairs: maximizing the key prefers the lex-smallest pair list
        return (len(spairs), sum(ious[p] for p in spairs), tuple((-p, -g) for p, g in spairs))

    best_pairs: list[tuple[int, int]] = []
    best_key = key([])

    def recurse(i: int, used_gt: set[int], chosen: list[tuple[int, int]]) -> None:
        nonlocal best_pairs, best_key
        if i == len(pred_ids):
            k = key(chosen)
            if k > best_key:
                best_key, best_pairs = k, sorted(chosen)
            return
        pid = pred_ids[i]
        recurse(i + 1, used_gt, chosen)
        for gid in eligible[pid]:
            if gid not in used_gt:
                chosen.append((pid, gid))
                used_gt.add(gid)
                recurse(i + 1, used_gt, chosen)
                used_gt.remove(gid)
                chosen.pop()

    recurse(0, set(), [])
    return best_pairs


def random_blob(rng: np.random.Generator, size: int, h: int, w: int) -> np.ndarray:
    """A random 8-connected blob of exactly `size` pixels (or fewer only if
    the raster is too small), grown from a random seed pixel."""
    size = min(size, h * w)
    mask = np.zeros((h, w), dtype=bool)
    r, c = int(rng.integers(h)), int(rng.integers(w))
    mask[r, c] = True
    frontier = {(r, c)}
    count = 1
    while count < size:
        # candidate boundary pixels adjacent to the blob
        cand = set()
        for (fr, fc) in frontier:
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    nr, nc = fr + dr, fc + dc
                    if 0 <= nr < h and 0 <= nc < w and not mask[nr, nc]:
                        cand.add((nr, nc))
        if not cand:
            break
        ordered = sorted(cand)
        take = min(len(ordered), max(1, size - count))
        picks = rng.choice(len(ordered), size=min(take, len(ordered)), replace=False)
        new_frontier = set()
        for i in picks:
            if count >= size:
                break
            nr, nc = ordered[int(i)]
            mask[nr, nc] = True
            new_frontier.add((nr, nc))
            count += 1
        frontier = new_frontier or frontier
    return mask
