"""P1 meshes on intervals and circles."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidParameter
from ..geometry import ModelSpace

MIN_NODES = 8


@dataclass(frozen=True, eq=False)
class Discretization:
    """Mesh nodes plus element settings.

    On an interval ``mesh`` runs from ``0`` to ``l`` inclusive.  On a circle it
    lies in ``[0, 2 pi r)`` and the last element closes the loop back to the
    first node.
    """

    mesh: np.ndarray
    element_type: str = "P1"
    quadrature_order: int = 8
    grading: str = "uniform"
    grading_strength: float = 1.0

    def __post_init__(self):
        m = np.array(self.mesh, dtype=float)
        if m.ndim != 1 or m.size < MIN_NODES:
            raise InvalidParameter(f"a mesh needs at least {MIN_NODES} nodes")
        if np.any(np.diff(m) <= 0):
            raise InvalidParameter("mesh nodes must be strictly increasing")
        if self.element_type != "P1":
            raise InvalidParameter("only piecewise-linear elements are available")
        if self.quadrature_order < 2:
            raise InvalidParameter("quadrature_order must be at least 2")
        m.setflags(write=False)
        object.__setattr__(self, "mesh", m)

    @classmethod
    def uniform(cls, space: ModelSpace, n_elements: int, quadrature_order: int = 8):
        L = space.period
        if space.is_circle:
            nodes = np.arange(n_elements) * (L / n_elements)
        else:
            nodes = np.linspace(0.0, L, n_elements + 1)
        return cls(nodes, quadrature_order=quadrature_order)

    @classmethod
    def graded(cls, space: ModelSpace, n_elements: int, strength: float = 1.5,
               quadrature_order: int = 8, sides: Optional[tuple[bool, bool]] = None):
        """Power-graded mesh ``x ~ s**strength`` toward vanishing endpoints."""
        if space.is_circle:
            return cls.uniform(space, n_elements, quadrature_order)
        if not strength >= 1.0:
            raise InvalidParameter("grading strength must be at least 1")
        L = space.period
        left, right = space.vanishing_endpoints if sides is None else sides
        s = np.linspace(0.0, 1.0, n_elements + 1)
        if left and right:
            half = np.where(s <= 0.5, s, 1.0 - s)
            g = 0.5 * (2.0 * half) ** strength
            x = np.where(s <= 0.5, g, 1.0 - g) * L
        elif left:
            x = s ** strength * L
        elif right:
            x = (1.0 - (1.0 - s) ** strength) * L
        else:
            x = s * L
        x[0], x[-1] = 0.0, L
        return cls(x, quadrature_order=quadrature_order, grading="boundary-graded",
                   grading_strength=float(strength))

    @classmethod
    def auto(cls, space: ModelSpace, n_elements: int, strength: float = 1.5,
             quadrature_order: int = 8):
        """Graded when an endpoint density vanishes, uniform otherwise."""
        if any(space.vanishing_endpoints):
            return cls.graded(space, n_elements, strength, quadrature_order)
        return cls.uniform(space, n_elements, quadrature_order)

    def element_lengths(self, period: float, periodic: bool) -> np.ndarray:
        if periodic:
            return np.diff(np.append(self.mesh, self.mesh[0] + period))
        return np.diff(self.mesh)

    def mesh_size(self, period: float, periodic: bool) -> float:
        return float(self.element_lengths(period, periodic).max())

    def key(self) -> str:
        h = hashlib.sha256(self.mesh.tobytes())
        h.update(f"{self.element_type}|{self.quadrature_order}|{self.grading}|"
                 f"{self.grading_strength!r}".encode())
        return h.hexdigest()

    def check_space(self, space: ModelSpace) -> None:
        L = space.period
        tol = 1e-12 * max(1.0, L)
        if abs(self.mesh[0]) > tol:
            raise InvalidParameter("mesh must start at coordinate 0")
        if space.is_circle:
            if self.mesh[-1] >= L - tol:
                raise InvalidParameter("circle mesh nodes must lie in [0, 2 pi r)")
        elif abs(self.mesh[-1] - L) > tol:
            raise InvalidParameter("interval mesh must end at the interval length")
