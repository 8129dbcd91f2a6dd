"""Build script: compiles the optional solver kernels.

The package works without the extension (a pure-Python fallback is selected
at import time); the compiled kernels only make the annealing/tabu inner
loops fast.  -ffp-contract=off keeps the compiled arithmetic bit-identical
to the numpy fallback.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "detforge.solvers._kernels",
                ["src/detforge/solvers/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception:
    extensions = []

setup(ext_modules=extensions)
