import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the compiled kernels if possible, fall back to pure Python.

    The package is fully functional without the extension (the NumPy
    backend in eqdrift.kernels is selected at import time), so a missing
    compiler must not fail the install.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    def _skip(self, exc):
        print(
            f"warning: building {self.extensions[0].name} failed ({exc!r}); "
            "installing with pure-Python kernels only",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print(
            "warning: Cython not available; installing with pure-Python kernels only",
            file=sys.stderr,
        )
        return []
    return cythonize(
        [
            Extension(
                "eqdrift.kernels._fast",
                ["src/eqdrift/kernels/_fast.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
