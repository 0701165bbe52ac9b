"""Build script for the compiled replay kernel.

The extension is optional at runtime: if it is missing (or fails to build on
an exotic platform), the package falls back to the pure-Python kernel in
``coalhash._core_py`` with identical semantics.
"""

from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "coalhash._core",
        ["src/coalhash/_core.pyx"],
        extra_compile_args=["-O3"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
)
