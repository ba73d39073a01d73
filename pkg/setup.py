"""Build the optional compiled SVM kernel.

If Cython or a C compiler is missing the package still installs; the
pure-Python kernel is selected at import time instead.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("CNLREDUCE_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension(
                "cnlreduce.classifier._kernel",
                ["src/cnlreduce/classifier/_kernel.pyx"],
                include_dirs=[np.get_include()],
                # no FMA contraction: the compiled and Python kernels must agree bitwise
                extra_compile_args=["-O2", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
