"""Build script for the optional compiled kernels.

    pip install -e . --no-build-isolation      # builds nqdelta._ckernels
    python setup.py build_ext --inplace        # rebuild in place

If Cython or a compiler is missing the package installs without the
extension and falls back to the pure-Python kernels.
"""
from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "nqdelta._ckernels",
                ["src/nqdelta/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
