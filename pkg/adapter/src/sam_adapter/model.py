"""Model backends: real Segment Anything, or a box-rasterizing stub.

A backend exposes two steps so the service can cache the expensive one:
embed(image) -> opaque embedding, and predict(embedding, ...) -> (mask, score).
Boxes reach predict in the model convention: inclusive XYXY corners.
"""

from __future__ import annotations

import threading
from typing import Any, Protocol

import numpy as np

SAM_VARIANTS = ("vit_b", "vit_l", "vit_h")


class ModelBackend(Protocol):
    name: str

    def embed(self, image: np.ndarray) -> Any: ...

    def predict(
        self,
        embedding: Any,
        image_shape: tuple[int, int],
        points: list[tuple[int, int]],
        labels: list[int],
        box_xyxy: tuple[int, int, int, int] | None,
    ) -> tuple[np.ndarray, float]: ...


class StubBoxModel:
    """Test double: 'embeds' by remembering the shape, predicts by filling
    the box (inclusive corners) or, without one, stamping positive points."""

    name = "stub-box"

    def __init__(self, embed_delay_s: float = 0.0):
        self.embed_calls = 0
        self.predict_calls = 0
        self.embed_delay_s = embed_delay_s
        self._lock = threading.Lock()

    def embed(self, image: np.ndarray) -> Any:
        with self._lock:
            self.embed_calls += 1
        if self.embed_delay_s:
            import time

            time.sleep(self.embed_delay_s)
        return {"shape": image.shape[:2]}

    def predict(self, embedding, image_shape, points, labels, box_xyxy):
        with self._lock:
            self.predict_calls += 1
        h, w = image_shape
        mask = np.zeros((h, w), dtype=bool)
        if box_xyxy is not None:
            x0, y0, x1, y1 = box_xyxy
            mask[y0:y1 + 1, x0:x1 + 1] = True
        else:
            for (x, y), label in zip(points, labels):
                if label == 1:
                    mask[y, x] = True
        return mask, 0.5


class SamModel:
    """Real Segment Anything backend (needs torch + segment-anything).

    The predictor is shared, so prediction restores the cached embedding
    tensors under a lock; multimask output is requested and the
    highest-scoring mask returned.
    """

    def __init__(self, variant: str, checkpoint: str, device: str = "cuda"):
        if variant not in SAM_VARIANTS:
            raise ValueError(f"unknown variant {variant!r}; expected one of {SAM_VARIANTS}")
        try:
            from segment_anything import SamPredictor, sam_model_registry
        except ImportError as exc:
            raise RuntimeError(
                "segment-anything is not installed; pip install 'sam-adapter[sam]'"
            ) from exc
        self.name = variant
        sam = sam_model_registry[variant](checkpoint=checkpoint)
        sam.to(device)
        self._predictor = SamPredictor(sam)
        self._lock = threading.Lock()

    def embed(self, image: np.ndarray):
        with self._lock:
            self._predictor.set_image(image)
            return {
                "features": self._predictor.features,
                "original_size": self._predictor.original_size,
                "input_size": self._predictor.input_size,
            }

    def predict(self, embedding, image_shape, points, labels, box_xyxy):
        import numpy as _np

        coords = _np.array(points, dtype=_np.float32) if points else None
        labs = _np.array(labels, dtype=_np.int32) if points else None
        box = _np.array(box_xyxy, dtype=_np.float32) if box_xyxy is not None else None
        with self._lock:
            self._predictor.features = embedding["features"]
            self._predictor.original_size = embedding["original_size"]
            self._predictor.input_size = embedding["input_size"]
            self._predictor.is_image_set = True
            masks, scores, _ = self._predictor.predict(
                point_coords=coords, point_labels=labs, box=box, multimask_output=True
            )
        best = int(scores.argmax())
        return masks[best].astype(bool), float(scores[best])
