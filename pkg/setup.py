"""Build script: compiles the optional Cython kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure here is non-fatal by design: build with
``pip install -e . --no-build-isolation`` and check the active backend via
``python -c "from gaugefactor._backend import BACKEND; print(BACKEND)"``.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/gaugefactor/_backend/_core.pyx",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
    for mod in ext_modules:
        mod.include_dirs.append(numpy.get_include())
        # -ffp-contract=off keeps the compiled arithmetic bit-identical to
        # the NumPy fallback (no FMA contraction of a - f*b).
        mod.extra_compile_args.extend(["-O3", "-ffp-contract=off"])
except Exception as exc:  # pragma: no cover - build environment dependent
    import sys

    print(f"gaugefactor: skipping Cython kernel build ({exc}); "
          "pure NumPy backend will be used", file=sys.stderr)

setup(ext_modules=ext_modules)
