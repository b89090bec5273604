"""Build hook for the optional Cython kernels.

Without Cython or a C compiler the package still installs and runs on the
pure-Python fallback in ``weyl1d._kernels._pencil_py``.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("WEYL1D_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "weyl1d._kernels._pencil",
                    ["src/weyl1d/_kernels/_pencil.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
