"""Kernel backend selection.

The compiled extension is preferred when present; setting SSDE_PURE_PYTHON
to a nonempty value forces the NumPy fallback. Import `kernels` from here
rather than touching ssde._kernels / ssde._kernels_py directly.
"""

import os

if os.environ.get("SSDE_PURE_PYTHON"):
    from . import _kernels_py as kernels

    COMPILED = False
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        COMPILED = False


def backend_name():
    """Name of the kernel implementation in use: 'compiled' or 'python'."""
    return "compiled" if COMPILED else "python"
