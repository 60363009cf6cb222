"""Synthetic fixture scenes: random rectilinear buildings on a flat backdrop.

Real building datasets cannot ship with the toolkit, so tests and demos run
on generated scenes instead. Buildings are rectangles, L-, U- and T-shapes
placed on a coarse grid with margins, chunky enough that a radius-2 dilation
still overlaps each footprint by more than half (keeps instance matching
meaningful in degradation tests). Prediction masks default to exact copies
of ground truth: the fixed point the oracle backend must score at 100%.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

from promptseg.types import BinaryMask, ImageRaster

_SHAPES = ("rect", "l", "u", "t")


def _carve_shape(rng: np.random.Generator, h: int, w: int, shape: str) -> np.ndarray:
    """One rectilinear footprint as an (h, w) block with a notch carved out."""
    block = np.ones((h, w), dtype=bool)
    arm = 6  # minimum remaining wall thickness
    if shape == "l":
        nh = int(rng.integers(arm, max(arm + 1, h - arm)))
        nw = int(rng.integers(arm, max(arm + 1, w - arm)))
        block[h - nh:, w - nw:] = False
    elif shape == "u":
        nh = int(rng.integers(arm, max(arm + 1, h - arm)))
        nw = max(1, w - 2 * arm)
        block[:nh, arm:arm + nw] = False
    elif shape == "t":
        nh = int(rng.integers(arm, max(arm + 1, h - arm)))
        nw = max(1, (w - arm) // 2)
        block[h - nh:, :nw] = False
        block[h - nh:, w - nw:] = False
    return block


def make_scene(
    rng: np.random.Generator, size: int = 96, cell: int = 32
) -> tuple[ImageRaster, BinaryMask]:
    """One scene: RGB image plus its building mask."""
    margin = 4
    grid = size // cell
    gt = np.zeros((size, size), dtype=bool)
    image = np.full((size, size, 3), 190, dtype=np.uint8)
    noise = rng.integers(-12, 13, size=(size, size, 1))
    image = np.clip(image.astype(np.int16) + noise, 0, 255).astype(np.uint8)

    cells = [(r, c) for r in range(grid) for c in range(grid)]
    rng.shuffle(cells)
    n_sheds = 4
    n_buildings = int(rng.integers(3, min(6, len(cells) - n_sheds) + 1))

    def paint(r0, c0, block):
        gt[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] |= block
        color = np.array([60 + int(rng.integers(0, 80)) for _ in range(3)], dtype=np.uint8)
        image[r0:r0 + block.shape[0], c0:c0 + block.shape[1]][block] = color

    for i, (gr, gc) in enumerate(cells[:n_buildings]):
        inner = cell - 2 * margin
        h = int(rng.integers(18, inner + 1))
        w = int(rng.integers(18, inner + 1))
        # Cycle shapes so every scene holds non-convex footprints.
        block = _carve_shape(rng, h, w, _SHAPES[i % len(_SHAPES)])
        r0 = gr * cell + margin + int(rng.integers(0, inner - h + 1))
        c0 = gc * cell + margin + int(rng.integers(0, inner - w + 1))
        paint(r0, c0, block)
    # Small sheds: real datasets hold sub-threshold structures whose noisy
    # masks no longer match their instance, the pattern behind TP-IoU > IoU.
    for gr, gc in cells[n_buildings:n_buildings + n_sheds]:
        inner = cell - 2 * margin
        r0 = gr * cell + margin + int(rng.integers(0, inner - 3 + 1))
        c0 = gc * cell + margin + int(rng.integers(0, inner - 3 + 1))
        paint(r0, c0, np.ones((3, 3), dtype=bool))
    return image, gt


def build_fixture_set(
    root: str | Path,
    n_scenes: int = 20,
    size: int = 96,
    seed: int = 7,
    perturb_pred: bool = False,
) -> list[str]:
    """Write a fixture dataset (images/, gt/, pred/) and return scene ids.

    With perturb_pred the prediction masks are shifted copies of ground
    truth, for tests that need pred != gt.
    """
    root = Path(root)
    for sub in ("images", "gt", "pred"):
        (root / sub).mkdir(parents=True, exist_ok=True)
    ids = []
    for i in range(n_scenes):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        image, gt = make_scene(rng, size=size)
        pred = gt.copy()
        if perturb_pred:
            pred = np.roll(gt, shift=(1, 1), axis=(0, 1))
            pred[0, :] = False
            pred[:, 0] = False
        stem = f"scene_{i:03d}"
        Image.fromarray(image, mode="RGB").save(root / "images" / f"{stem}.png")
        Image.fromarray(gt.astype(np.uint8) * 255, mode="L").save(root / "gt" / f"{stem}.png")
        Image.fromarray(pred.astype(np.uint8) * 255, mode="L").save(root / "pred" / f"{stem}.png")
        ids.append(stem)
    return ids
