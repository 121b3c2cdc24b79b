from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

core_sources = [
    "src/randomness.cpp",
    "src/finite_plane.cpp",
    "src/explicit_system.cpp",
    "src/layered_sampler.cpp",
    "src/graphs.cpp",
    "src/partitioner.cpp",
    "src/analysis.cpp",
    "src/json_io.cpp",
]

setup(
    ext_modules=[
        Pybind11Extension(
            "bisp._core",
            sources=["bindings/module.cpp"] + core_sources,
            include_dirs=["include", "vendor"],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
