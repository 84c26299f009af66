"""Build the optional compiled kernels.

The extension must not use FMA contraction or fast-math: its results are
required to match the pure-Python kernels bit for bit.  If Cython or a C
compiler is missing the package still installs and uses the Python kernels.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

FLAGS = ["-O2", "-ffp-contract=off", "-fno-fast-math"]
if sys.platform == "win32":
    FLAGS = ["/O2", "/fp:strict"]


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print("warning: compiled kernels not built (%s)" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print("warning: %s not built (%s)" % (ext.name, exc))


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension
    ext = Extension("compqd._ccore", ["src/compqd/_ccore.pyx"],
                    extra_compile_args=FLAGS)
    return cythonize([ext], language_level=3, quiet=True)


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
