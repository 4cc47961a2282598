"""Build hook for the optional compiled kernels.

The package is pure Python except for fuzzyat._kernels._fast, a Cython
module providing the hot loops (pairwise Zadeh combination and the
exhaustive metric enumeration).  The extension is marked optional: if it
fails to build, installation proceeds and the package falls back to the
pure-Python kernels at import time.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fuzzyat._kernels._fast",
                ["src/fuzzyat/_kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
