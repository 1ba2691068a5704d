"""Build script for the optional compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compile degrades to a pure-Python install
instead of aborting.
"""

import logging

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

log = logging.getLogger("scenetext.setup")


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing compiler toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            log.warning("skipping compiled kernels (%s); NumPy fallback will be used", exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            log.warning("failed to build %s (%s); NumPy fallback will be used", ext.name, exc)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        log.warning("Cython not available; compiled kernels will not be built")
        return []
    return cythonize(
        [
            Extension(
                "scenetext._kernels._core",
                ["src/scenetext/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
