import os

from setuptools import setup

extensions = []
if not os.environ.get("HOLOMED_SKIP_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        extensions = cythonize(
            [
                Extension(
                    "holomed.depth_gesture._kernels_cy",
                    sources=["src/holomed/depth_gesture/_kernels_cy.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": "3",
            },
        )
    except ImportError:
        # No Cython/numpy at build time: install pure-Python only, the
        # kernel selector falls back at import.
        extensions = []

setup(ext_modules=extensions)
