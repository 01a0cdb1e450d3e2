"""Build script.

The compiled extension accelerates the exact Jacobi scans; the package
falls back to a pure-Python implementation of the same kernel when the
extension is absent, so a failed compile is downgraded to a warning.
"""

import warnings

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/quaplectic/_scan.pyx"],
        language_level=3,
    )
except Exception as exc:  # cython missing or compile environment broken
    warnings.warn(f"building without compiled scan kernel: {exc}")
    ext_modules = []

setup(ext_modules=ext_modules)
