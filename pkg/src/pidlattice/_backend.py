"""Select the lattice kernel implementation at import time.

The compiled extension is used when it was built; set
``PIDLATTICE_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

if os.environ.get("PIDLATTICE_PURE_PYTHON", "") not in ("", "0"):
    from ._lattice_py import cover_pairs, order_matrix

    BACKEND = "python"
else:
    try:
        from ._lattice_core import cover_pairs, order_matrix

        BACKEND = "compiled"
    except ImportError:
        from ._lattice_py import cover_pairs, order_matrix

        BACKEND = "python"

__all__ = ["BACKEND", "cover_pairs", "order_matrix"]
