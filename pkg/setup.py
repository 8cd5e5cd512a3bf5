from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback only
    ext_modules = []
else:
    ext_modules = cythonize(
        "src/gptentropy/_kernels.pyx",
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
