"""Builds the optional Cython kernels; installation still succeeds without them."""
import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as e:  # no compiler, no Cython, ...
            self._skip(e)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as e:
            self._skip(e)

    @staticmethod
    def _skip(e):
        print(f"warning: compiled kernels not built ({e}); using the pure-Python fallback", file=sys.stderr)


def extensions():
    if os.environ.get("QUASIWHITTAKER_PURE_PYTHON") == "1":
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension("quasiwhittaker._kernels._ckernels",
                    [os.path.join("src", "quasiwhittaker", "_kernels", "_ckernels.pyx")])
    return cythonize([ext], compiler_directives={"language_level": "3"}, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
