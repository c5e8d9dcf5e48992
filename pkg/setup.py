import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

PYX = "src/biaswalk/_kernels/_fast.pyx"
CPP = "src/biaswalk/_kernels/_fast.cpp"


def _extension(source: str) -> Extension:
    return Extension(
        "biaswalk._kernels._fast",
        [source],
        language="c++",
        # -ffp-contract=off keeps the FP operation sequence identical to the
        # pure-Python backend (no fused multiply-add), so fixed-seed outputs
        # match across backends.
        extra_compile_args=["-O3", "-ffp-contract=off"],
        optional=True,
    )


if cythonize is not None:
    ext_modules = cythonize([_extension(PYX)],
                            compiler_directives={"language_level": "3"})
elif os.path.exists(CPP):
    # no Cython, but the checked-in generated C++ still compiles
    ext_modules = [_extension(CPP)]
else:
    ext_modules = []

setup(ext_modules=ext_modules)
