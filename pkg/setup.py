"""Build script: compiles the optional Cython counting core.

The package works without the extension (a pure numpy fallback is selected
at import time), so any build failure here downgrades to a warning instead
of aborting the install.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, etc.
            print(f"warning: compiled core skipped ({exc}); "
                  "pure-python fallback will be used", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "pure-python fallback will be used", file=sys.stderr)


ext_modules = []
try:
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("circlesum._fastcount",
                   ["src/circlesum/_fastcount.pyx"],
                   extra_compile_args=["-O3"])],
        language_level=3,
    )
except Exception as exc:
    print(f"warning: cython unavailable ({exc}); "
          "pure-python fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
