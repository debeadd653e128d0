import os

from setuptools import setup

ext_modules = []
if os.environ.get("SKEWSERIES_NO_EXT", "") != "1":
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("skewseries._kernel", ["src/skewseries/_kernel.pyx"],
                       include_dirs=[numpy.get_include()],
                       define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": 3},
        )
    except ImportError:
        # no Cython or numpy at build time: the numpy fallback is used
        ext_modules = []

setup(ext_modules=ext_modules)
