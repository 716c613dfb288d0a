from setuptools import Extension, setup

# The compiled scanner is an optional speedup; the package falls back to the
# pure-Python scanner when the extension is unavailable.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("factline._scan_c", ["src/factline/_scan_c.pyx"])],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
