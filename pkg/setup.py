"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: ssde._backend falls
back to the NumPy kernels in ssde._kernels_py when the compiled module is
missing, so a failed extension build only costs speed.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Try to build the accelerator; warn and continue on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn(f"compiled kernels skipped ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"building {ext.name} failed ({exc}); using pure-Python fallback")


try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "ssde._kernels",
                ["src/ssde/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
