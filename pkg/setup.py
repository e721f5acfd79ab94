import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("TILECANVAS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "tilecanvas.kernels._ckernels",
                    ["src/tilecanvas/kernels/_ckernels.pyx"],
                    # no FMA contraction: keeps results bitwise equal to the numpy fallback
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
