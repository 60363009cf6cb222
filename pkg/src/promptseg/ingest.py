"""Dataset ingestion.

Layout: data_root/{images,gt,pred}/<stem>.png. Images are 8-bit RGB; masks
are 8-bit grayscale, binarized at >127. Scenes are matched by filename stem
and returned in lexicographic order; incomplete or inconsistent scenes are
skipped with a warning record, never silently.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from promptseg.errors import EmptyDataset
from promptseg.types import BinaryMask, ImageRaster

LOGGER = logging.getLogger("promptseg.ingest")


@dataclass
class SceneRecord:
    image_id: str
    image: ImageRaster
    gt_mask: BinaryMask | None
    pred_mask: BinaryMask


@dataclass(frozen=True)
class SkipRecord:
    image_id: str
    stage: str
    reason: str

    def to_json(self) -> dict:
        return {"image_id": self.image_id, "stage": self.stage, "reason": self.reason}


def _load_mask(path: Path) -> BinaryMask:
    return np.asarray(Image.open(path).convert("L")) > 127


def ingest(
    data_root: str | Path, prompt_only: bool = False
) -> tuple[list[SceneRecord], list[SkipRecord]]:
    """Load every complete scene under data_root.

    prompt_only drops the ground-truth requirement (gt_mask=None), which is
    enough to generate prompts and overlays: ground truth only ever feeds
    metrics and the oracle backends.

    Raises EmptyDataset when no scene survives.
    """
    root = Path(data_root)
    images_dir, gt_dir, pred_dir = root / "images", root / "gt", root / "pred"
    if not images_dir.is_dir() or not pred_dir.is_dir():
        raise EmptyDataset(f"{root} does not contain images/ and pred/ directories")

    required = [("images", images_dir), ("pred", pred_dir)]
    if not prompt_only:
        required.append(("gt", gt_dir))

    stems = sorted(p.stem for p in images_dir.glob("*.png"))
    scenes: list[SceneRecord] = []
    skips: list[SkipRecord] = []
    for stem in stems:
        missing = [name for name, d in required if not (d / f"{stem}.png").is_file()]
        if missing:
            reason = f"missing {', '.join(missing)} file(s)"
            LOGGER.warning("scene %s skipped: %s", stem, reason)
            skips.append(SkipRecord(stem, "ingest", reason))
            continue
        image = np.asarray(Image.open(images_dir / f"{stem}.png").convert("RGB"), dtype=np.uint8)
        pred = _load_mask(pred_dir / f"{stem}.png")
        gt = None if prompt_only else _load_mask(gt_dir / f"{stem}.png")
        shapes = {image.shape[:2], pred.shape} | ({gt.shape} if gt is not None else set())
        if len(shapes) > 1:
            reason = f"dimension mismatch across rasters: {sorted(shapes)}"
            LOGGER.warning("scene %s skipped: %s", stem, reason)
            skips.append(SkipRecord(stem, "ingest", reason))
            continue
        scenes.append(SceneRecord(stem, image, gt, pred))

    if not scenes:
        raise EmptyDataset(f"no usable scenes under {root}")
    return scenes, skips
