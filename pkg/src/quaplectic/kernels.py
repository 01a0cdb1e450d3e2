"""Kernel selection: compiled Jacobi scan if available, pure Python otherwise.

The compiled extension is optional; both backends implement the same
``scan_jacobi`` contract and are exercised against each other in the test
suite.  Set the environment variable ``QUAPLECTIC_PURE`` to any non-empty
value before import to force the pure-Python backend.
"""

from __future__ import annotations

import os

if os.environ.get("QUAPLECTIC_PURE"):
    from . import _scan_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _scan as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _scan_py as _impl

        BACKEND = "python"

scan_jacobi = _impl.scan_jacobi

__all__ = ["scan_jacobi", "BACKEND"]
