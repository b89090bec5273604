"""Ball measures, the ratio integral ``int r / m(B_r(x)) dm`` and its r -> 0 limit."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DomainMismatch, InvalidParameter, OutOfDomain
from .geometry import ModelSpace
from .quadrature import integrate_intervals


def _coords(space: ModelSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    L = space.period
    tol = 1e-12 * max(1.0, L)
    if np.any(~np.isfinite(x)) or np.any(x < -tol) or np.any(x > L + tol):
        raise OutOfDomain(f"coordinate outside [0, {L}]")
    return np.clip(x, 0.0, L)


def ball_measure(space: ModelSpace, x, r, rtol: float = 1e-13):
    """``m(B_r(x))``; broadcasts over ``x`` and ``r``.

    On intervals the ball is truncated at the endpoints.  On circles ``2 r`` must
    stay below the circumference.
    """
    x = _coords(space, x)
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise InvalidParameter("radius must be positive")
    x, r = np.broadcast_arrays(x, r)
    L = space.period
    if space.is_circle:
        if np.any(2.0 * r >= L):
            raise InvalidParameter("on a circle the radius must satisfy 2r < circumference")
        lo = x - r
        hi = x + r
        # split arcs that cross the coordinate seam
        wrap_lo = lo < 0.0
        wrap_hi = hi > L
        a1 = np.where(wrap_lo, 0.0, lo)
        b1 = np.where(wrap_hi, L, hi)
        a2 = np.where(wrap_lo, lo + L, 0.0)
        b2 = np.where(wrap_lo, L, np.where(wrap_hi, hi - L, 0.0))
        out = space.mass_between(a1, b1, rtol) + space.mass_between(a2, b2, rtol)
    else:
        out = space.mass_between(np.maximum(x - r, 0.0), np.minimum(x + r, L), rtol)
    return float(out) if np.ndim(out) == 0 else out


def ratio_integrand(space: ModelSpace, x, r):
    """``r / m(B_r(x))``."""
    m = ball_measure(space, x, r)
    with np.errstate(divide="ignore"):
        return r / m


def _weighted_integrand(space: ModelSpace, r: float):
    """``x -> r h(x) / m(B_r(x))``; integrating it dx gives the ratio integral."""

    def g(x):
        h = space.h(x)
        m = np.asarray(ball_measure(space, x, r))
        return np.where(h == 0.0, 0.0, r * h / np.where(m > 0, m, 1.0))

    return g


def _outer_panels(space: ModelSpace, r: float, panels: int) -> tuple[np.ndarray, np.ndarray]:
    L = space.period
    if space.is_circle:
        cuts = np.linspace(0.0, L, panels + 1)
    else:
        # the integrand has kinks where the ball starts or stops touching an end
        kinks = np.unique(np.clip([0.0, r, L - r, L], 0.0, L))
        cuts = [kinks[0]]
        for lo, hi in zip(kinks[:-1], kinks[1:]):
            cuts.extend(np.linspace(lo, hi, panels + 1)[1:])
        cuts = np.asarray(cuts)
        # geometric panels toward the ends resolve algebraic endpoint behaviour
        left = np.geomspace(min(r, L) * 1e-6, min(r, L), 12)[:-1] if r < L else np.empty(0)
        cuts = np.unique(np.concatenate([cuts, left, L - left]))
    extra = space.breakpoints()
    cuts = np.unique(np.concatenate([cuts, extra]))
    return cuts[:-1], cuts[1:]


def ratio_integral(space: ModelSpace, r: float, quadrature_points: int = 16,
                   rtol: float = 1e-11) -> float:
    """``int_X r / m(B_r(x)) dm(x)``, integrated as ``int r h(x) / m(B_r(x)) dx``.

    Parameters
    ----------
    quadrature_points : int
        Initial panels per smooth piece of the outer integral; refinement is adaptive.
    """
    if not r > 0:
        raise InvalidParameter("radius must be positive")
    if quadrature_points < 1:
        raise InvalidParameter("quadrature_points must be positive")
    a, b = _outer_panels(space, float(r), int(quadrature_points))
    g = _weighted_integrand(space, float(r))
    parts = integrate_intervals(g, a, b, rtol=rtol, atol=rtol * space.hausdorff_length / a.size)
    return float(math.fsum(parts))


def flat_ratio_integral(length: float, r: float) -> float:
    """Closed form for a constant density on ``[0, length]`` with ``r <= length / 2``.

    ``L/2 - r + 2 r log 2`` after dividing out the constant.
    """
    return 0.5 * length - r + 2.0 * r * math.log(2.0)


@dataclass(frozen=True)
class RatioProfile:
    radii: np.ndarray
    integrals: np.ndarray
    extrapolated_limit: float
    extrapolation_error: float
    richardson: np.ndarray


def richardson_first_order(radii: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Eliminate the linear term between neighbouring radii."""
    q = radii[1:] / radii[:-1]
    return (values[1:] - q * values[:-1]) / (1.0 - q)


def default_radii(space: ModelSpace, steps: int = 11) -> np.ndarray:
    d = space.diameter
    return np.geomspace(0.1 * d, 1e-4 * d, steps)


def ratio_profile(space: ModelSpace, r_max: Optional[float] = None,
                  r_min: Optional[float] = None, steps: int = 11, *,
                  rtol: float = 1e-11, threads: int = 1) -> RatioProfile:
    """Ratio integrals on a geometric radius grid and their r -> 0 extrapolation.

    The limit comes from first-order Richardson extrapolation of neighbouring
    radii; the error is the gap between the last two extrapolants.
    """
    d = space.diameter
    r_max = 0.1 * d if r_max is None else float(r_max)
    r_min = 1e-4 * d if r_min is None else float(r_min)
    if steps < 3:
        raise InvalidParameter("ratio_profile needs at least 3 radii")
    if not (0 < r_min < r_max):
        raise InvalidParameter("need 0 < r_min < r_max")
    radii = np.geomspace(r_max, r_min, int(steps))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(lambda r: ratio_integral(space, r, rtol=rtol), radii))
    else:
        vals = [ratio_integral(space, r, rtol=rtol) for r in radii]
    values = np.asarray(vals)
    rich = richardson_first_order(radii, values)
    return RatioProfile(radii=radii, integrals=values, extrapolated_limit=float(rich[-1]),
                        extrapolation_error=float(abs(rich[-1] - rich[-2])), richardson=rich)


class DominationResult(NamedTuple):
    sup_observed: float
    bound: float
    ok: bool
    argmax: tuple[float, float]


def default_domination_grid(space: ModelSpace, nx: int = 200, nr: int = 20):
    """``nx`` points clustered geometrically toward both ends and ``nr`` radii."""
    L = space.period
    half = nx // 2
    left = np.concatenate([[0.0], np.geomspace(1e-6 * L, 0.499 * L, half - 1)])
    right = L - left[::-1]
    xs = np.concatenate([left, right])
    if xs.size < nx:
        xs = np.append(xs, 0.5 * L)
    rs = np.geomspace(1e-6 * L, L, nr)
    return np.sort(xs), rs


def domination_bound_check(space: ModelSpace, N: Optional[float] = None,
                           r_grid: Optional[Sequence[float]] = None,
                           x_grid: Optional[Sequence[float]] = None) -> DominationResult:
    """Compare ``sup r h(x) / m(B_r(x))`` over a grid with ``N 8^(N-1)``."""
    if space.is_circle:
        raise DomainMismatch("the domination bound concerns interval spaces")
    N = space.cd.N if N is None else float(N)
    dx, dr = default_domination_grid(space)
    xs = np.asarray(dx if x_grid is None else x_grid, dtype=float)
    rs = np.asarray(dr if r_grid is None else r_grid, dtype=float)
    X, R = np.meshgrid(xs, rs, indexing="ij")
    h = space.h(_coords(space, X))
    m = np.asarray(ball_measure(space, X, R))
    vals = np.where(h == 0.0, 0.0, R * h / m)
    k = np.unravel_index(int(np.argmax(vals)), vals.shape)
    sup = float(vals[k])
    bound = N * 8.0 ** (N - 1.0)
    return DominationResult(sup, bound, bool(sup <= bound), (float(X[k]), float(R[k])))
