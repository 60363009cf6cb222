"""Kernel backend selection.

The compiled extension (promptseg._rasterops) is preferred when it imported
cleanly; otherwise the pure NumPy lane is used. Both lanes expose the same
three functions and produce bit-identical arrays. Set PROMPTSEG_PURE_PYTHON=1
to force the fallback (used by the benchmark and the parity tests).
"""

from __future__ import annotations

import os

from promptseg import _pykernels

try:
    from promptseg import _rasterops as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

_FORCE_PURE = os.environ.get("PROMPTSEG_PURE_PYTHON", "0") not in ("", "0")
_active = _pykernels if (_compiled is None or _FORCE_PURE) else _compiled

label_8 = _active.label_8
edt_sq = _active.edt_sq
thin_zs = _active.thin_zs


def backend_name() -> str:
    return "pure-python" if _active is _pykernels else "compiled"


def compiled_available() -> bool:
    return _compiled is not None


def get_backend(name: str):
    """Return a kernel module by name ('compiled' or 'pure-python')."""
    if name == "pure-python":
        return _pykernels
    if name == "compiled":
        if _compiled is None:
            raise ValueError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown kernel backend {name!r}")
