import os

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize
except ImportError:
    extensions = []
else:
    extensions = cythonize(
        [
            Extension(
                "underlay._kernels",
                ["src/underlay/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3", "embedsignature": True},
    )

if os.environ.get("UNDERLAY_NO_EXT"):
    extensions = []

setup(ext_modules=extensions)
