"""Pick the compiled kernels when available, else the numpy fallback.

Set ``CURVSEL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from curvsel import _fallback

if os.environ.get("CURVSEL_PURE_PYTHON", "") not in ("", "0"):
    kernels = _fallback
    BACKEND = "python"
else:
    try:
        from curvsel import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _fallback
        BACKEND = "python"
