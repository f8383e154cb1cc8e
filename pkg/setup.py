"""Build the optional compiled census kernel.

The package works without the extension (a pure-Python/numpy twin is
selected at import time), so a failed compile only costs speed.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "planecount.kernels._fast",
                ["src/planecount/kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"warning: compiled kernel skipped ({exc})\n")

setup(ext_modules=ext_modules)
