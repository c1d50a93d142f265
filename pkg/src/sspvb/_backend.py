"""Picks the compiled dispatch kernel when available, else the pure-Python loop.

Set ``SSPVB_PURE_PYTHON=1`` to force the fallback (used by the cross-backend
tests and the benchmark).
"""

import os

from . import _dispatch_py

FORCE_PURE = os.environ.get("SSPVB_PURE_PYTHON", "").strip() not in ("", "0")

compiled = None
if not FORCE_PURE:
    try:
        from . import _dispatch as compiled
    except ImportError:
        compiled = None

kernel = compiled if compiled is not None else _dispatch_py
BACKEND = "cython" if compiled is not None else "python"


def get_kernel(name: str | None = None):
    """Return a kernel module by name ("cython" or "python"); default is the active one."""
    if name is None:
        return kernel
    if name == "python":
        return _dispatch_py
    if name == "cython":
        if compiled is None:
            raise RuntimeError("compiled dispatch kernel is not built")
        return compiled
    raise ValueError(f"unknown backend {name!r}")
