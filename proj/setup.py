from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "artipark._core",
    sources=[
        "src/model.cpp",
        "src/controller.cpp",
        "src/positioning.cpp",
        "src/simulation.cpp",
        "src/scenario.cpp",
        "src/trajectory_io.cpp",
        "python/bindings.cpp",
    ],
    include_dirs=["include", "vendor"],
    cxx_std=20,
    extra_compile_args=["-pthread"],
    extra_link_args=["-pthread"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
