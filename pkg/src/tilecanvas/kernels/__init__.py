"""Hot loops of the window merge, with a compiled backend when available.

The Cython extension is used if it was built; otherwise the numpy fallback is
imported. Set ``TILECANVAS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("TILECANVAS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels
    else:
        BACKEND = "cython"
else:
    _impl = _pykernels

accumulate_window = _impl.accumulate_window
normalize = _impl.normalize

__all__ = ["BACKEND", "accumulate_window", "normalize"]
