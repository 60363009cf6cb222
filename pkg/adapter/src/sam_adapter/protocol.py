"""Request parsing and raster codec for the wire protocol.

JSON bodies, UTF-8; rasters as base64 PNG (images 8-bit RGB, masks 8-bit
grayscale 0/255). Schema violations raise SchemaError (HTTP 400); coordinates
that fall outside the image raise BoundsError (HTTP 422). Boxes arrive
half-open [x_min, y_min, x_max, y_max].
"""

from __future__ import annotations

import base64
import io
from dataclasses import dataclass, field

import numpy as np
from PIL import Image


class SchemaError(ValueError):
    """Malformed request body: maps to HTTP 400."""


class BoundsError(ValueError):
    """Coordinates outside the image: maps to HTTP 422."""


@dataclass
class ParsedRequest:
    image_id: str
    image: np.ndarray  # uint8 (H, W, 3)
    points: list[tuple[int, int]] = field(default_factory=list)
    labels: list[int] = field(default_factory=list)
    box: tuple[int, int, int, int] | None = None  # half-open


def decode_image_b64(data: str) -> np.ndarray:
    try:
        img = Image.open(io.BytesIO(base64.b64decode(data, validate=True)))
        return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except Exception as exc:
        raise SchemaError(f"undecodable image payload: {exc}") from exc


def encode_mask_b64(mask: np.ndarray) -> str:
    mask = np.asarray(mask, dtype=bool)
    buf = io.BytesIO()
    Image.fromarray(mask.astype(np.uint8) * 255, mode="L").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def parse_request(payload) -> ParsedRequest:
    """Validate a /segment body. SchemaError on shape problems only;
    bounds are checked separately so they can map to 422."""
    if not isinstance(payload, dict):
        raise SchemaError("request body must be a JSON object")
    for key in ("image_id", "image_png_b64", "points", "box", "multimask"):
        if key not in payload:
            raise SchemaError(f"missing field {key!r}")
    if not isinstance(payload["image_id"], str):
        raise SchemaError("image_id must be a string")
    if not isinstance(payload["points"], list):
        raise SchemaError("points must be a list")
    image = decode_image_b64(payload["image_png_b64"])

    points: list[tuple[int, int]] = []
    labels: list[int] = []
    for entry in payload["points"]:
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("x"), int)
            or not isinstance(entry.get("y"), int)
            or entry.get("label") not in (0, 1)
        ):
            raise SchemaError(f"bad point entry {entry!r}")
        points.append((entry["x"], entry["y"]))
        labels.append(entry["label"])

    box = None
    if payload["box"] is not None:
        raw = payload["box"]
        if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(v, int) for v in raw)):
            raise SchemaError(f"bad box {raw!r}")
        if not (raw[0] < raw[2] and raw[1] < raw[3]):
            raise SchemaError(f"degenerate box {raw!r}")
        box = (raw[0], raw[1], raw[2], raw[3])

    if not any(lab == 1 for lab in labels) and box is None:
        raise SchemaError("request needs positive points or a box")
    return ParsedRequest(payload["image_id"], image, points, labels, box)


def check_bounds(req: ParsedRequest) -> None:
    h, w = req.image.shape[:2]
    for x, y in req.points:
        if not (0 <= x < w and 0 <= y < h):
            raise BoundsError(f"point ({x}, {y}) outside {w}x{h} image")
    if req.box is not None:
        x0, y0, x1, y1 = req.box
        if not (0 <= x0 and 0 <= y0 and x1 <= w and y1 <= h):
            raise BoundsError(f"box {list(req.box)} outside {w}x{h} image")


def box_to_inclusive_xyxy(box: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    """Half-open wire box to the model's inclusive corner convention."""
    x0, y0, x1, y1 = box
    return (x0, y0, x1 - 1, y1 - 1)
