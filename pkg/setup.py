"""Build script for the optional compiled eigensolver kernels.

The package works without the extension (a pure NumPy fallback is selected
at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "nhchain._schur_cy",
                ["src/nhchain/_schur_cy.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
