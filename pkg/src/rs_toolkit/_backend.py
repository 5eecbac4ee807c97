"""Kernel backend selection.

The compiled core is preferred when built; the numpy fallback is always
available. Set ``RS_TOOLKIT_BACKEND=python`` or ``=compiled`` to force one.
"""

from __future__ import annotations

import os

_requested = os.environ.get("RS_TOOLKIT_BACKEND", "auto").strip().lower()

if _requested in ("python", "py", "numpy"):
    from . import _kernels_py as kernels
elif _requested in ("compiled", "cython", "c"):
    from . import _ckernels as kernels  # noqa: F401  (ImportError is the signal)
elif _requested in ("auto", ""):
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]
else:
    raise RuntimeError(f"RS_TOOLKIT_BACKEND={_requested!r} not recognised")

BACKEND = kernels.BACKEND_NAME

theta_sum = kernels.theta_sum
qpoch_prod = kernels.qpoch_prod
rs_poly_table = kernels.rs_poly_table
