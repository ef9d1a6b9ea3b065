"""Build hook: compile the enumeration kernel as a C extension when possible.

The pure-Python kernel `welwitt/floor/_engine.py` is copied to
`_engine_cy.py` and compiled with Cython; `welwitt.floor.engine` prefers the
compiled module at import time and falls back to the interpreted one.  The
build degrades silently to pure Python if Cython or a C compiler is missing.
"""

import shutil

from setuptools import setup

SRC = "src/welwitt/floor/_engine.py"
TWIN = "src/welwitt/floor/_engine_cy.py"


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    shutil.copyfile(SRC, TWIN)
    return cythonize(
        [TWIN],
        compiler_directives={"language_level": "3"},
        quiet=True,
    )


setup(ext_modules=_extensions())
