"""Wire-format codec for the segmenter HTTP protocol.

Bodies are JSON (UTF-8); rasters travel as base64 PNG. Images are 8-bit RGB,
masks 8-bit grayscale holding 0 or 255 (binarized at >127 on decode, so the
round trip is bit-exact). Point labels: 1 positive, 0 negative. Boxes are
half-open [x_min, y_min, x_max, y_max].
"""

from __future__ import annotations

import base64
import io

import numpy as np
from PIL import Image

from promptseg.errors import ProtocolError
from promptseg.prompts import Prompt
from promptseg.types import BinaryMask, BoundingBox, ImageRaster, Point


def encode_image_b64(image: ImageRaster) -> str:
    image = np.asarray(image, dtype=np.uint8)
    if image.ndim != 3 or image.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) RGB image, got {image.shape}")
    buf = io.BytesIO()
    Image.fromarray(image, mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def decode_image_b64(data: str) -> ImageRaster:
    try:
        img = Image.open(io.BytesIO(base64.b64decode(data, validate=True)))
        return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise ProtocolError(f"undecodable image payload: {exc}") from exc


def encode_mask_b64(mask: BinaryMask) -> str:
    mask = np.asarray(mask, dtype=bool)
    buf = io.BytesIO()
    Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def decode_mask_b64(data: str) -> BinaryMask:
    try:
        img = Image.open(io.BytesIO(base64.b64decode(data, validate=True)))
        return np.asarray(img.convert("L")) > 127
    except Exception as exc:
        raise ProtocolError(f"undecodable mask payload: {exc}") from exc


def points_payload(prompt: Prompt) -> list[dict]:
    pos = [{"x": int(p.x), "y": int(p.y), "label": 1} for p in prompt.positive_points]
    neg = [{"x": int(p.x), "y": int(p.y), "label": 0} for p in prompt.negative_points]
    return pos + neg


def build_request(image_id: str, image: ImageRaster, prompt: Prompt) -> dict:
    return {
        "image_id": image_id,
        "image_png_b64": encode_image_b64(image),
        "points": points_payload(prompt),
        "box": prompt.box.to_list() if prompt.box is not None else None,
        "multimask": False,
    }


def parse_request(payload: dict) -> tuple[str, ImageRaster, Prompt]:
    """Validate and decode a /segment request body. Raises ProtocolError."""
    if not isinstance(payload, dict):
        raise ProtocolError("request body must be a JSON object")
    for key in ("image_id", "image_png_b64", "points", "box", "multimask"):
        if key not in payload:
            raise ProtocolError(f"missing field {key!r}")
    if not isinstance(payload["image_id"], str):
        raise ProtocolError("image_id must be a string")
    if not isinstance(payload["points"], list):
        raise ProtocolError("points must be a list")
    image = decode_image_b64(payload["image_png_b64"])
    positives: list[Point] = []
    negatives: list[Point] = []
    for entry in payload["points"]:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("x"), int)
            or not isinstance(entry.get("y"), int)
            or entry.get("label") not in (0, 1)
        ):
            raise ProtocolError(f"bad point entry {entry!r}")
        (positives if entry["label"] == 1 else negatives).append(Point(entry["x"], entry["y"]))
    box = None
    if payload["box"] is not None:
        raw = payload["box"]
        if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(v, int) for v in raw)):
            raise ProtocolError(f"bad box {raw!r}")
        try:
            box = BoundingBox(*raw)
        except ValueError as exc:
            raise ProtocolError(str(exc)) from exc
    if not positives and box is None:
        raise ProtocolError("request needs positive points or a box")
    prompt = Prompt(positive_points=positives, negative_points=negatives, box=box)
    return payload["image_id"], image, prompt


def parse_response(payload: dict, expected_shape: tuple[int, int]) -> tuple[BinaryMask, float]:
    """Validate and decode a 200 /segment response body. Raises ProtocolError."""
    if not isinstance(payload, dict):
        raise ProtocolError("response body must be a JSON object")
    if "mask_png_b64" not in payload or "score" not in payload:
        raise ProtocolError("response missing mask_png_b64 or score")
    if not isinstance(payload["mask_png_b64"], str):
        raise ProtocolError("mask_png_b64 must be a string")
    if not isinstance(payload["score"], (int, float)) or isinstance(payload["score"], bool):
        raise ProtocolError("score must be a number")
    mask = decode_mask_b64(payload["mask_png_b64"])
    if mask.shape != tuple(expected_shape):
        raise ProtocolError(f"mask shape {mask.shape} != image shape {tuple(expected_shape)}")
    return mask, float(payload["score"])
