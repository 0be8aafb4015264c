from setuptools import Extension, setup

# The compiled scan kernel is optional: the package falls back to the pure
# Python kernel when the extension is absent (see classpair.scan).
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("classpair._scan_core", ["src/classpair/_scan_core.pyx"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
