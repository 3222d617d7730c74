"""Build the optional compiled successor kernel.

The package is fully functional without it: adiclab.kernels falls back to
the pure-Python implementation when the extension is missing.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, cythonize failure, ...
            print(f"warning: skipping compiled kernel build: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: failed to build {ext.name}: {exc}", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython unavailable, pure-Python kernels only", file=sys.stderr)
        return []
    return cythonize(
        [Extension("adiclab._ckernels", ["src/adiclab/_ckernels.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
