"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``SWKB_PURE_PYTHON=1`` to force the numpy kernels.
"""
import os

from . import _kernels_py as python_kernels

compiled_kernels = None
if os.environ.get("SWKB_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError:
        compiled_kernels = None

kernels = compiled_kernels or python_kernels
BACKEND = "compiled" if compiled_kernels is not None else "python"

__all__ = ["kernels", "python_kernels", "compiled_kernels", "BACKEND"]
