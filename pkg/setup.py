"""Build script: compiles the optional C extension for the label kernels.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile only costs speed, not functionality.
"""

import sys

from setuptools import Extension, setup


def make_extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("scenagg: Cython not available, building pure-Python package",
              file=sys.stderr)
        return []
    ext = Extension(
        "scenagg._labelops",
        sources=["src/scenagg/_labelops.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=make_extensions())
