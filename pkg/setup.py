"""Build script: compiles the optional sweep kernel when Cython is present.

The package works without the extension; `reebsplit.kernels` falls back to
the pure-Python sweep at import time.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("reebsplit._sweepc", ["src/reebsplit/_sweepc.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
