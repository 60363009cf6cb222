"""promptseg: prompt a segmentation model with CNN building masks, score the result.

Pipeline: ingest scenes (image + ground-truth mask + CNN prediction mask),
split the prediction into instances, turn every instance into a prompt under
one of nine strategies, run a promptable segmenter backend, merge the refined
masks and score them against ground truth with pixelwise and
true-positive-restricted instance metrics.
"""

from promptseg.errors import (
    BackendUnavailable,
    ConfigError,
    DimensionMismatch,
    EmptyCandidateRegion,
    EmptyDataset,
    PromptsegError,
    ProtocolError,
)
from promptseg.types import BinaryMask, BoundingBox, ImageRaster, InstanceMask, Point

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailable",
    "BinaryMask",
    "BoundingBox",
    "ConfigError",
    "DimensionMismatch",
    "EmptyCandidateRegion",
    "EmptyDataset",
    "ImageRaster",
    "InstanceMask",
    "Point",
    "PromptsegError",
    "ProtocolError",
    "__version__",
]
