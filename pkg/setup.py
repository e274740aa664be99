"""Builds the optional compiled reachability kernel.

The package works without it: refnets.statespace falls back to the
pure-Python kernel when the extension is missing or fails to build.
"""
from setuptools import Extension, setup

extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [Extension("refnets._kernel", ["src/refnets/_kernel.pyx"])],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=extensions)
