"""Build the compiled kernel extension.

The extension links numpy's static random library so the compiled and
pure-Python kernels share one set of variate generators.  Set
``DUALRECORD_NO_EXT=1`` to skip the extension; the package then falls back to
the pure-Python kernels at import time.
"""

import os
from pathlib import Path

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DUALRECORD_NO_EXT"):
    import numpy as np
    from Cython.Build import cythonize

    np_root = Path(np.get_include()).parent.parent
    ext = Extension(
        "dualrecord._kernels",
        ["src/dualrecord/_kernels.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[str(np_root / "random" / "lib"), str(np_root / "_core" / "lib")],
        libraries=["npyrandom", "npymath"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O2", "-ffp-contract=off"],
    )
    ext_modules = cythonize([ext], language_level=3)

setup(ext_modules=ext_modules)
