import os

from setuptools import Extension, setup

# The compiled convolution core is optional: seizcast.net.kernels falls back
# to the numpy implementation when the extension is absent. Set
# SEIZCAST_NO_EXT=1 to skip compilation entirely.
extensions = []
if not os.environ.get("SEIZCAST_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [
                Extension(
                    "seizcast.net.kernels._conv3d_cy",
                    ["src/seizcast/net/kernels/_conv3d_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": 3,
            },
        )

setup(ext_modules=extensions)
