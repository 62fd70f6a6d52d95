"""Builds the _hmcore extension through the project's CMake configuration.

The CMake tree is the single definition of how the C++ core and the pybind11
module compile; this file only drives `cmake --build` and copies the result
into the package.
"""

import shutil
import subprocess
import sys
from pathlib import Path

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class CMakeExtension(Extension):
    def __init__(self, name):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext):
        import pybind11

        source = Path(__file__).resolve().parent
        build = Path(self.build_temp).resolve()
        build.mkdir(parents=True, exist_ok=True)

        subprocess.run(
            [
                "cmake",
                "-S", str(source),
                "-B", str(build),
                "-DCMAKE_BUILD_TYPE=Release",
                "-DHM_BUILD_PYTHON=ON",
                "-DHM_BUILD_TESTS=OFF",
                "-DHM_BUILD_CLI=OFF",
                f"-Dpybind11_DIR={pybind11.get_cmake_dir()}",
                f"-DPython_EXECUTABLE={sys.executable}",
            ],
            check=True,
        )
        subprocess.run(["cmake", "--build", str(build), "--target", "_hmcore"], check=True)

        built = sorted(build.glob("_hmcore*.so")) or sorted(build.glob("_hmcore*.pyd"))
        if not built:
            raise RuntimeError(f"no _hmcore extension produced under {build}")
        dest = Path(self.get_ext_fullpath(ext.name)).resolve()
        dest.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy2(built[-1], dest)


setup(
    ext_modules=[CMakeExtension("hmcore._hmcore")],
    cmdclass={"build_ext": CMakeBuild},
)
