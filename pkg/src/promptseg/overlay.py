"""Overlay rendering in the style of the published qualitative figures.

The refined mask boundary is traced in yellow, positive prompt points are
green discs (radius 3 px), negative points red discs, and box prompts 1-px
blue outlines drawn inclusive of the x_max-1 column / y_max-1 row.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from promptseg.errors import DimensionMismatch
from promptseg.ingest import SceneRecord
from promptseg.prompts import Prompt
from promptseg.types import BinaryMask

POSITIVE_COLOR = (0, 200, 0)
NEGATIVE_COLOR = (220, 0, 0)
BOX_COLOR = (40, 110, 255)
BOUNDARY_COLOR = (255, 220, 0)
DISC_RADIUS = 3


def strategy_slug(label: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", label.lower()).strip("-")


def overlay_path(out_dir: Path, image_id: str, strategy_label: str) -> Path:
    return Path(out_dir) / "overlays" / f"{image_id}_{strategy_slug(strategy_label)}.png"


def _mask_boundary(mask: BinaryMask) -> np.ndarray:
    """Mask pixels with a non-mask 4-neighbor (array edges count as outside)."""
    mask = np.asarray(mask, dtype=bool)
    interior = np.zeros_like(mask)
    interior[1:-1, 1:-1] = (
        mask[1:-1, 1:-1]
        & mask[:-2, 1:-1] & mask[2:, 1:-1] & mask[1:-1, :-2] & mask[1:-1, 2:]
    )
    return mask & ~interior


def render_overlay(
    scene: SceneRecord,
    scene_prompts: list[Prompt],
    output_mask: BinaryMask,
    path: str | Path,
) -> Path:
    """Draw prompts and the refined mask over the scene image; write a PNG."""
    output_mask = np.asarray(output_mask, dtype=bool)
    if output_mask.shape != scene.image.shape[:2]:
        raise DimensionMismatch(
            f"mask {output_mask.shape} vs image {scene.image.shape[:2]}"
        )
    canvas = scene.image.copy()
    canvas[_mask_boundary(output_mask)] = BOUNDARY_COLOR

    img = Image.fromarray(canvas, mode="RGB")
    draw = ImageDraw.Draw(img)
    for prompt in scene_prompts:
        if prompt.box is not None:
            draw.rectangle(
                [prompt.box.x_min, prompt.box.y_min, prompt.box.x_max - 1, prompt.box.y_max - 1],
                outline=BOX_COLOR,
                width=1,
            )
    for prompt in scene_prompts:
        for p in prompt.positive_points:
            draw.ellipse(
                [p.x - DISC_RADIUS, p.y - DISC_RADIUS, p.x + DISC_RADIUS, p.y + DISC_RADIUS],
                fill=POSITIVE_COLOR,
            )
        for p in prompt.negative_points:
            draw.ellipse(
                [p.x - DISC_RADIUS, p.y - DISC_RADIUS, p.x + DISC_RADIUS, p.y + DISC_RADIUS],
                fill=NEGATIVE_COLOR,
            )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        img.save(path)
    except OSError as exc:
        raise OSError(f"cannot write overlay {path}: {exc}") from exc
    return path
