"""Builds the optional compiled kernel extension.

The package is fully functional without it; if Cython or a C compiler is
unavailable the build falls back to the pure-Python kernels selected at
import time by cadkit._kernel.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/cadkit/_kernel_cy.pyx"], language_level=3
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
