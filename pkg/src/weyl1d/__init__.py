"""Spectral experiments on one-dimensional spaces with Ricci lower bounds.

Model spaces are intervals or circles carrying ``h dx`` with ``h = exp(-f)``;
the package computes their weighted Neumann spectra, counting functions, heat
traces and ball-measure ratios.
"""

from .errors import Weyl1DError
from .geometry import (Circle, CurvatureDimension, DensitySpec, Interval, ModelSpace,
                       distance, eval_density, make_space)

__version__ = "0.1.0"

__all__ = [
    "Circle",
    "CurvatureDimension",
    "DensitySpec",
    "Interval",
    "ModelSpace",
    "Weyl1DError",
    "distance",
    "eval_density",
    "make_space",
]
