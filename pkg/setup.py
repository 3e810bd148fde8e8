"""Build script. The compiled kernel module is optional: if Cython or a C
compiler is unavailable the package installs anyway and falls back to the
numpy kernels at import time."""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "cutlab._core",
                ["src/cutlab/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    sys.stderr.write(f"cutlab: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
