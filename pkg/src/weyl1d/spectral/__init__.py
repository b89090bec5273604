"""Weighted Neumann Laplacian on one-dimensional model spaces."""

from .assembly import ElementArrays, assemble, assemble_elements, sparse_pencil
from .mesh import Discretization
from .solver import Spectrum, eigen_solve, resolution_cut
from .trace import counting_function, heat_trace, weyl_tail

__all__ = [
    "Discretization",
    "ElementArrays",
    "Spectrum",
    "assemble",
    "assemble_elements",
    "counting_function",
    "eigen_solve",
    "heat_trace",
    "resolution_cut",
    "sparse_pencil",
    "weyl_tail",
]
