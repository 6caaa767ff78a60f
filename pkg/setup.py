from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [
            Extension(
                "pnodal._kernel._phase_cy",
                ["src/pnodal/_kernel/_phase_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
