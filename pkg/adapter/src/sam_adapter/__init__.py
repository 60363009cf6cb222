"""HTTP sidecar wrapping Segment Anything behind the promptseg wire protocol.

Deliberately self-contained: the evaluation toolkit and this server share
nothing but the protocol, so the sidecar can live alone on a GPU box.
"""

__version__ = "0.1.0"
