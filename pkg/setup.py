"""Build hook for the optional compiled kernels.

The extension is marked optional: a failed compile leaves the pure-Python
fallback in charge (see katoforms.kernels), the package stays functional.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "katoforms._speedups",
                ["src/katoforms/_speedups.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
