"""Select the compiled kernel when available, else the numpy fallback.

Set ``SKEWSERIES_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py as fallback

compiled = None
if os.environ.get("SKEWSERIES_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as compiled  # type: ignore[attr-defined,no-redef]
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else fallback
IMPLEMENTATION = active.IMPLEMENTATION

# Largest modulus the int64 path supports (128-bit products in the compiled
# kernel, object arithmetic in the fallback).
INT64_LIMIT = 1 << 62


def backend(pure: bool = False):
    return fallback if pure or compiled is None else compiled
