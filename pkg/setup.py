"""Build hooks: compile the optional GMP-backed pairing accelerator.

The package works without the extension (a pure-Python fallback with the
same byte-level API is selected at import time), but the accelerator is
roughly 6x faster and is what makes the large randomized suites quick.
Requires libgmp headers; on Debian/Ubuntu: `apt install libgmp-dev`.
"""

from setuptools import setup, Extension
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the accelerator instead of failing the install when GMP is absent."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure downgrades
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        import warnings

        warnings.warn(
            f"building the _fastcore accelerator failed ({exc}); "
            "falling back to the pure-Python group arithmetic, which is slow",
            stacklevel=2,
        )


setup(
    ext_modules=[
        Extension(
            "proxyvote._fastcore",
            sources=["src/proxyvote/_fastcore.c"],
            libraries=["gmp"],
            optional=True,
        )
    ],
    cmdclass={"build_ext": OptionalBuildExt},
)
