"""Build script: compiles the optional C kernel when Cython is available.

The package is pure Python; supercech._kernel._ckernel is a drop-in
accelerator for the hot term-merge loops.  If Cython or a C compiler is
missing, installation proceeds with the pure-Python kernel.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler: fall back to pure python
            print(f"supercech: skipping C kernel build ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"supercech: skipping {ext.name} ({exc})")


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/supercech/_kernel/_ckernel.pyx"], language_level=3
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
