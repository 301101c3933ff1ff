"""Build hook for the optional compiled search kernels.

The package is fully functional without the extension: shadelab._kernels
falls back to the pure-Python implementation when the compiled module is
missing (or when SHADELAB_KERNEL=py is set).
"""

import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and os.path.exists("src/shadelab/_kernels/_ckern.pyx"):
    ext_modules = cythonize(
        [
            Extension(
                "shadelab._kernels._ckern",
                ["src/shadelab/_kernels/_ckern.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
