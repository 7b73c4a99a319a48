"""Selects the stack-machine implementation at import time.

Prefers the compiled Cython core; falls back to the pure-Python loop when the
extension was not built. MEDCALC_PURE_PYTHON=1 forces the fallback (used by
the benchmark and for debugging).
"""

from __future__ import annotations

import os

from . import _stackvm_py

if os.environ.get("MEDCALC_PURE_PYTHON"):
    _impl = _stackvm_py
else:
    try:
        from . import _stackvm as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _stackvm_py

run_program = _impl.run_program
COMPILED: bool = bool(getattr(_impl, "COMPILED", False))
BACKEND_NAME: str = "cython" if COMPILED else "python"
