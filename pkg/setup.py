"""Build hook: compile the optional order-evaluation extension.

The package is fully functional without the extension; planwright.kernels
falls back to the pure-Python evaluator when the compiled module is absent.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/planwright/_fastcost.pyx"],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"planwright: skipping compiled kernel ({exc})")

setup(ext_modules=ext_modules)
