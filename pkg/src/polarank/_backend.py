"""Select compiled kernels when available, pure Python otherwise.

Set ``POLARANK_PURE=1`` to force the fallback.
"""

import os

from . import _pure

if os.environ.get("POLARANK_PURE"):
    kernels = _pure
    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        kernels = _pure
        COMPILED = False

NAME = "cython" if COMPILED else "python"
