"""Optional compiled kernels; the package falls back to numpy when the build is skipped."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ELLWK_PURE_PYTHON"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("ellwk._kernels._core", ["src/ellwk/_kernels/_core.pyx"],
                       include_dirs=[np.get_include()])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)
