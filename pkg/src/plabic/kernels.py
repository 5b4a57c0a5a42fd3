"""Kernel backend selection: the compiled extension if importable, else pure Python.

Setting PLABIC_PURE_PYTHON=1 forces the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("PLABIC_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    else:
        BACKEND = "compiled"
else:
    _compiled = None

neumann_series = _compiled.neumann_series if _compiled is not None else _kernels_py.neumann_series
python_neumann_series = _kernels_py.neumann_series
compiled_neumann_series = _compiled.neumann_series if _compiled is not None else None
