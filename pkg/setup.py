"""Build the optional C edit-distance kernel; pure-Python fallback is used when it is absent."""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "sciwrite_lint._strkernel",
                ["src/sciwrite_lint/_strkernel.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
