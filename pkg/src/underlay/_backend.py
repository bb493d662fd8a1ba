"""Pick the compiled MAC kernels when available, else the numpy fallback.

Set ``UNDERLAY_PURE_PYTHON=1`` to force the fallback even when the
extension is built.
"""

from __future__ import annotations

import os

from . import _kernels_py

kernels = _kernels_py
if not os.environ.get("UNDERLAY_PURE_PYTHON"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND: str = kernels.BACKEND


def available() -> dict:
    """All importable kernel backends, keyed by name."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
