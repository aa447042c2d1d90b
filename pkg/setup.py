"""Build script: compiles the optional pivot kernel when Cython is available.

The package is fully functional without the extension; `process_duality._kernel`
falls back to the pure-Python twin at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/process_duality/_kernel/_pivot_c.pyx"],
        language_level=3,
    )
except Exception:
    # No Cython or no compiler: ship pure Python.
    ext_modules = []

setup(ext_modules=ext_modules)
