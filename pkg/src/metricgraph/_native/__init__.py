"""Backend selection: compiled kernels when the extension built, pure numpy
otherwise. Set METRICGRAPH_PURE=1 to force the fallback."""

from __future__ import annotations

import os

if os.environ.get("METRICGRAPH_PURE"):
    from . import _pure as _impl
    BACKEND = "pure"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        from . import _pure as _impl
        BACKEND = "pure"

four_point_delta = _impl.four_point_delta
relation_distortion = _impl.relation_distortion

__all__ = ["BACKEND", "four_point_delta", "relation_distortion"]
