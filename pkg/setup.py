import os
import sys

from setuptools import Extension, setup

# The compiled ray-enumeration kernel is optional: the package falls back to
# the pure-Python implementation in spunnormal._ddpure when the extension is
# absent (or when SPUNNORMAL_PURE=1 at import time).
ext_modules = []
if os.environ.get("SPUNNORMAL_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "spunnormal._ddcore",
                    sources=["src/spunnormal/_ddcore.pyx"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        print("Cython not available; building without the compiled kernel",
              file=sys.stderr)

setup(ext_modules=ext_modules)
