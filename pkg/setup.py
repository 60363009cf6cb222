"""Build script for the optional compiled raster kernels.

The package works without the extension (a pure NumPy fallback is selected at
import time); building it just makes the hot kernels fast. Run
`python setup.py build_ext --inplace` for a development build.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "promptseg._rasterops",
                sources=["src/promptseg/_rasterops.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
