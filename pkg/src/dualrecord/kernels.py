"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the pure-Python
twin is used.  ``DUALRECORD_BACKEND=python`` forces the fallback.
"""

import os

from . import _kernels_py

python_backend = _kernels_py

# Integer codes shared by both backends.
OK, ERR_UNDERFLOW, ERR_INFEASIBLE = 0, 1, 2
JEFFREYS, POISSON = 0, 1
C_OVER_PHI, LLOYD = 0, 1

try:
    from . import _kernels as compiled_backend
except ImportError:  # extension not built
    compiled_backend = None

if os.environ.get("DUALRECORD_BACKEND", "").lower() == "python" or compiled_backend is None:
    active = python_backend
else:
    active = compiled_backend

BACKEND = active.NAME


def get_backend(name=None):
    """Return the kernel module called ``name`` ("compiled" or "python"), or the active one."""
    if name is None:
        return active
    if name == "python":
        return python_backend
    if name == "compiled":
        if compiled_backend is None:
            raise ImportError("the compiled kernel extension is not built")
        return compiled_backend
    raise ValueError(f"unknown kernel backend {name!r}")
