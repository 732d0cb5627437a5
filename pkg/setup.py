"""Build script: compiles the optional C kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a missing compiler or Cython only costs speed. Build
failures therefore degrade to a warning instead of aborting the install.
"""

import sys
import warnings

from setuptools import setup

ext_modules = []
cmdclass = {}

try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = [
        Extension(
            "surrograph._kernels._ckernels",
            sources=["src/surrograph/_kernels/_ckernels.pyx"],
            language="c++",
            extra_compile_args=["-O3", "-std=c++11"],
        )
    ]
    ext_modules = cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    warnings.warn(
        "Cython not available; installing with the pure-Python kernels only.",
        stacklevel=1,
    )


class _OptionalBuildExt:
    """Mixin that downgrades extension build failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"C kernel build failed ({exc}); using pure-Python fallback.")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"C kernel build failed ({exc}); using pure-Python fallback.")


if ext_modules:
    from setuptools.command.build_ext import build_ext

    class optional_build_ext(_OptionalBuildExt, build_ext):
        pass

    cmdclass["build_ext"] = optional_build_ext

setup(ext_modules=ext_modules, cmdclass=cmdclass)
