from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("gitgauge._kernels", ["src/gitgauge/_kernels.pyx"])],
        language_level=3,
    ),
)
