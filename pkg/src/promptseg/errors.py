"""Exception types shared across the toolkit."""


class PromptsegError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(PromptsegError):
    """Rasters that must share dimensions do not."""


class EmptyCandidateRegion(PromptsegError):
    """No pixel is available to sample a negative point from."""


class EmptyDataset(PromptsegError):
    """Ingestion found no usable scene."""


class ConfigError(PromptsegError):
    """Invalid experiment configuration."""


class BackendUnavailable(PromptsegError):
    """The remote segmenter cannot be reached (after retries)."""


class ProtocolError(PromptsegError):
    """The remote segmenter violated the wire protocol."""
