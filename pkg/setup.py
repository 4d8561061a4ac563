"""Build script: compiles the optional Cython time-stepper kernel.

If Cython or a C compiler is unavailable the build falls back to the pure
numpy implementation (nnlstep._stepper_py); the package works either way.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "nnlstep._stepper",
                ["src/nnlstep/_stepper.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError as exc:  # pragma: no cover - exercised only without Cython
    print(f"warning: building without the compiled stepper ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
