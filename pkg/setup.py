from setuptools import Extension, setup

import numpy as np
from Cython.Build import cythonize

ext_modules = cythonize(
    [
        Extension(
            "exchange_competition.mc._kernels_c",
            ["src/exchange_competition/mc/_kernels_c.pyx"],
            include_dirs=[np.get_include()],
            # bitwise parity with the pure-Python kernels: no fused
            # multiply-adds, and no combining of adjacent sin/cos calls into
            # glibc sincos (which rounds differently by 1 ulp)
            extra_compile_args=[
                "-ffp-contract=off",
                "-fno-builtin-sin",
                "-fno-builtin-cos",
            ],
        )
    ],
    language_level=3,
)

setup(ext_modules=ext_modules)
