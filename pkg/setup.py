"""Build script: compiles the optional fast core.

The extension is a speedup only. If Cython or a C compiler is missing the
build degrades to the pure-numpy backend, which the package selects at
import time. Set SHIFTBF_SKIP_EXT=1 to skip the extension on purpose.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing / broken toolchain
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"WARNING: building the fast core failed ({exc}); "
              "falling back to the pure-python backend")


def extensions():
    if os.environ.get("SHIFTBF_SKIP_EXT") == "1":
        return []
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError as exc:
        optional_build_ext._skip(exc)
        return []
    ext = Extension(
        "shiftbf._core._fastcore",
        sources=["src/shiftbf/_core/_fastcore.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
