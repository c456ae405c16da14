"""Build script.

The compiled finite-difference kernel is optional: if Cython or a C
compiler is unavailable the package installs anyway and falls back to the
numpy kernel at import time.  Set GRAFTLAB_NO_EXT=1 to skip the extension
on purpose.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("GRAFTLAB_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "graftlab._kernels",
                    ["src/graftlab/_kernels.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)
