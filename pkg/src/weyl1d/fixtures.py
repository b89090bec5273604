"""Built-in model spaces with known reference quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .geometry import Circle, DensitySpec, Interval, ModelSpace, make_space

NEAR_DEGENERATE_EPS = 1e-3
NEAR_DEGENERATE_POINTS = 400


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    build: Callable[[], ModelSpace]
    hausdorff_length: float
    diameter: float
    eigen_law: Optional[str]
    law: Optional[Callable[[np.ndarray], np.ndarray]]
    provenance: str

    @property
    def weyl_constant(self) -> float:
        return self.hausdorff_length / math.pi

    @property
    def ratio_limit(self) -> float:
        return self.hausdorff_length / 2.0

    @property
    def heat_bound(self) -> float:
        return self.hausdorff_length / math.sqrt(4.0 * math.pi)

    def exact_eigenvalues(self, count: int) -> Optional[np.ndarray]:
        """First ``count`` eigenvalues with multiplicity, when a closed form exists."""
        if self.law is None:
            return None
        return self.law(np.arange(count))


def _circle_law(i):
    # 0, 1, 1, 4, 4, ...
    k = (np.asarray(i) + 1) // 2
    return (k * k).astype(float)


def _sinpow_law(N):
    return lambda k: (k * (k + N - 1.0)).astype(float)


def near_degenerate_density(eps: float = NEAR_DEGENERATE_EPS,
                            points: int = NEAR_DEGENERATE_POINTS) -> DensitySpec:
    """Samples of ``eps + sin x`` on ``[0, pi]``.

    Log-linear pieces ``exp(a + b x)`` are (K, 1)-convex only for ``K <= -b^2``,
    so ``K`` is set just below ``-max b^2``.
    """
    g = np.linspace(0.0, math.pi, points)
    v = eps + np.sin(g)
    v[-1] = eps
    slopes = np.diff(np.log(v)) / np.diff(g)
    K = -1.1 * float(np.max(slopes ** 2))
    return DensitySpec.sampled(g, v, K=K, N=2.0)


def _sinpow(N):
    return Fixture(
        name=f"sinpow_N{N}",
        description=f"[0, pi] with h = sin^{N - 1}, K = {-(N - 1)}, N = {N}",
        build=lambda: make_space(Interval(math.pi), DensitySpec.sinpower(float(N))),
        hausdorff_length=math.pi, diameter=math.pi,
        eigen_law=f"k(k+{N - 1})", law=_sinpow_law(N),
        provenance="ultraspherical (Gegenbauer) operator, exact")


FIXTURES: dict[str, Fixture] = {f.name: f for f in [
    Fixture("flat_pi", "[0, pi] with h = 1, K = 0, N = 2",
            lambda: make_space(Interval(math.pi), DensitySpec.constant(1.0, K=0.0, N=2.0)),
            math.pi, math.pi, "k^2", lambda k: (np.asarray(k) ** 2).astype(float),
            "Neumann cosine modes, exact"),
    Fixture("circle_r1", "circle of radius 1 with h = 1, K = 0, N = 2",
            lambda: make_space(Circle(1.0), DensitySpec.constant(1.0, K=0.0, N=2.0)),
            2.0 * math.pi, math.pi, "k^2 (multiplicity 2 for k >= 1)", _circle_law,
            "Fourier modes, exact"),
    _sinpow(2),
    _sinpow(3),
    _sinpow(4),
    Fixture("sampled_near_degenerate",
            f"[0, pi] with h = {NEAR_DEGENERATE_EPS:g} + sin x sampled on "
            f"{NEAR_DEGENERATE_POINTS} points, log-linear, N = 2",
            lambda: make_space(Interval(math.pi), near_degenerate_density()),
            math.pi, math.pi, None, None, "no closed form; Weyl constant exact"),
]}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None


def list_fixtures() -> list[dict]:
    rows = []
    for f in FIXTURES.values():
        rows.append({
            "name": f.name,
            "description": f.description,
            "hausdorff_length": f.hausdorff_length,
            "weyl_constant": f.weyl_constant,
            "ratio_limit": f.ratio_limit,
            "heat_trace_bound": f.heat_bound,
            "eigenvalue_law": f.eigen_law or "-",
            "provenance": f.provenance,
        })
    return rows
