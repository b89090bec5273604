"""Distortion coefficients, the (K, N)-convexity test and sinh-ratio bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Union

import numpy as np

from .errors import ConvexityViolation, EvaluationFailure, InvalidParameter
from .geometry import Circle, Interval, ModelSpace, compile_expression

_PAIR_TS = np.arange(1, 8) / 8.0


def sigma(t, K: float, N: float, theta):
    """Distortion coefficient ``sigma^{(t)}_{K,N}(theta)``.

    Returns ``inf`` where ``K theta^2 >= N pi^2``.  Vectorised in ``t`` and
    ``theta``; a scalar is returned for scalar input.
    """
    if not N > 0:
        raise InvalidParameter(f"N must be positive, got {N}")
    t_arr = np.asarray(t, dtype=float)
    th = np.asarray(theta, dtype=float)
    if np.any(~((t_arr >= 0) & (t_arr <= 1))):
        raise InvalidParameter("t must lie in [0, 1]")
    if np.any(~(th >= 0)):
        raise InvalidParameter("theta must be nonnegative")
    t_arr, th = np.broadcast_arrays(t_arr, th)
    out = np.empty(t_arr.shape)
    kt2 = K * th * th
    with np.errstate(all="ignore"):
        if K > 0:
            s = math.sqrt(K / N)
            out = np.sin(t_arr * th * s) / np.sin(th * s)
            out = np.where(kt2 >= N * math.pi ** 2, np.inf, out)
        elif K < 0:
            s = math.sqrt(-K / N)
            z = th * s
            # sinh(tz)/sinh(z) without overflow
            big = z > 20.0
            ratio_small = np.sinh(t_arr * z) / np.sinh(z)
            ratio_big = np.exp((t_arr - 1.0) * z) * -np.expm1(-2.0 * t_arr * z) / -np.expm1(-2.0 * z)
            out = np.where(big, ratio_big, ratio_small)
        else:
            out = t_arr.astype(float).copy()
    # near-flat: series in z^2 = |K| theta^2 / N avoids 0/0 when sqrt(K/N) underflows
    z2 = np.abs(kt2) / N
    series = t_arr * (1.0 + np.sign(K) * (1.0 - t_arr * t_arr) * z2 / 6.0)
    out = np.where(z2 < 1e-8, series, out)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    worst_margin: float
    witness: Optional[tuple[float, float, float]]
    tolerance: float
    triples_tested: int

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "witness": list(self.witness) if self.witness is not None else None,
            "tolerance": self.tolerance,
            "triples_tested": self.triples_tested,
        }


def _weighted(sig, val):
    # sigma = inf against a zero value contributes nothing
    with np.errstate(invalid="ignore"):
        return np.where(val == 0.0, 0.0, sig * val)


def _check_u(u_at: Callable[[np.ndarray], np.ndarray], K: float, N: float, length: float,
             periodic: bool, grid_resolution: int, tolerance: Optional[float],
             random_triples: int, seed: Optional[int]) -> ConvexityReport:
    """Convexity test on ``u = exp(-f/N)`` given as a function of coordinates."""
    if grid_resolution < 3:
        raise InvalidParameter("grid_resolution must be at least 3")
    res = int(grid_resolution)
    if periodic:
        base = np.arange(res) * (length / res)
    else:
        base = np.linspace(0.0, length, res)
    step = length / res if periodic else length / (res - 1)
    u_base = np.asarray(u_at(base), dtype=float)
    if np.any(np.isnan(u_base)) or np.any(u_base < 0):
        raise EvaluationFailure("exp(-f/N) is NaN or negative on the grid")

    max_gap = res // 2
    ii, gg = np.meshgrid(np.arange(res), np.arange(1, max_gap + 1), indexing="ij")
    ii, gg = ii.ravel(), gg.ravel()
    if periodic:
        jj = (ii + gg) % res
    else:
        keep = ii + gg < res
        ii, gg = ii[keep], gg[keep]
        jj = ii + gg
    d = gg * step

    def along(y0, gap, t, direction):
        pts = base[y0] + direction * t * gap * step
        return np.mod(pts, length) if periodic else pts

    worst = math.inf
    witness = None
    tested = 0
    for t in _PAIR_TS:
        u0, u1 = u_base[ii], u_base[jj]
        rhs = _weighted(sigma(1.0 - t, K, N, d), u0) + _weighted(sigma(t, K, N, d), u1)
        lhs = u_at(along(ii, gg, t, 1.0))
        if periodic:
            # antipodal pairs: either minor arc is a geodesic
            anti = 2 * gg == res
            if anti.any():
                other = u_at(along(ii, gg, t, -1.0))
                lhs = np.where(anti, np.maximum(lhs, other), lhs)
        with np.errstate(invalid="ignore"):
            margin = lhs - rhs
        margin = np.where(np.isnan(margin), -np.inf, margin)
        tested += margin.size
        k = int(np.argmin(margin))
        if margin[k] < worst:
            worst = float(margin[k])
            witness = (float(base[ii[k]]), float(base[jj[k]]), float(t))

    if random_triples > 0:
        rng = np.random.default_rng(seed)
        y0 = rng.uniform(0.0, length, random_triples)
        y1 = rng.uniform(0.0, length, random_triples)
        t = rng.uniform(0.0, 1.0, random_triples)
        if periodic:
            delta = np.mod(y1 - y0, length)
            fwd = delta <= length / 2
            dist = np.where(fwd, delta, length - delta)
            sgn = np.where(fwd, 1.0, -1.0)
            mid = np.mod(y0 + sgn * t * dist, length)
        else:
            dist = np.abs(y1 - y0)
            mid = (1.0 - t) * y0 + t * y1
        rhs = _weighted(sigma(1.0 - t, K, N, dist), u_at(y0)) + _weighted(sigma(t, K, N, dist), u_at(y1))
        with np.errstate(invalid="ignore"):
            margin = u_at(mid) - rhs
        margin = np.where(np.isnan(margin), -np.inf, margin)
        tested += margin.size
        k = int(np.argmin(margin))
        if margin[k] < worst:
            worst = float(margin[k])
            witness = (float(y0[k]), float(y1[k]), float(t[k]))

    if tolerance is None:
        finite = u_base[np.isfinite(u_base)]
        tolerance = 1e-9 * (1.0 + (float(finite.max()) if finite.size else 0.0))
    return ConvexityReport(passed=bool(worst >= -tolerance), worst_margin=worst,
                           witness=witness, tolerance=float(tolerance),
                           triples_tested=int(tested))


FunctionSpec = Union[Callable[[np.ndarray], np.ndarray], str]


def _domain(kind) -> tuple[float, bool]:
    if isinstance(kind, Circle):
        return kind.period, True
    if isinstance(kind, Interval):
        return kind.length, False
    if isinstance(kind, ModelSpace):
        return kind.period, kind.is_circle
    raise InvalidParameter("domain must be an Interval, Circle or ModelSpace")


def check_kn_convex(f: FunctionSpec, K: float, N: float, grid_resolution: int = 200, *,
                    domain=None, tolerance: Optional[float] = None,
                    random_triples: int = 0, seed: Optional[int] = None) -> ConvexityReport:
    """Sample the (K, N)-convexity inequality for ``f`` along coordinate geodesics.

    Parameters
    ----------
    f : callable or str
        Vectorised function of the coordinate; may return ``+inf`` (``exp(-f/N) = 0``).
    domain : Interval, Circle or ModelSpace
        Defaults to ``Interval(pi)``.
    random_triples : int
        Extra uniformly drawn ``(y0, y1, t)`` triples, reproducible through ``seed``.
    """
    if not N > 0:
        raise InvalidParameter("N must be positive")
    fn = compile_expression(f) if isinstance(f, str) else f
    length, periodic = _domain(domain if domain is not None else Interval(math.pi))

    def u_at(x):
        x = np.asarray(x, dtype=float)
        try:
            with np.errstate(all="ignore"):
                fx = np.asarray(fn(x), dtype=float)
        except Exception as exc:  # user callable
            raise EvaluationFailure(f"f could not be evaluated: {exc}") from exc
        if np.any(np.isnan(fx)):
            raise EvaluationFailure("f returned NaN")
        with np.errstate(over="ignore"):
            return np.broadcast_to(np.exp(-fx / N), x.shape)

    return _check_u(u_at, K, N, length, periodic, grid_resolution, tolerance,
                    random_triples, seed)


def check_space(space: ModelSpace, grid_resolution: int = 200, K: Optional[float] = None, *,
                tolerance: Optional[float] = None, random_triples: int = 0,
                seed: Optional[int] = None) -> ConvexityReport:
    """(K, N-1)-convexity of ``-log h`` for a model space.

    ``exp(log h / (N-1)) = h**(1/(N-1))`` is evaluated directly, so vanishing
    endpoints need no logarithm.
    """
    cd = space.cd
    K = cd.K if K is None else K
    p = 1.0 / (cd.N - 1.0)

    def u_at(x):
        return space.h(x) ** p

    return _check_u(u_at, K, cd.N - 1.0, space.period, space.is_circle, grid_resolution,
                    tolerance, random_triples, seed)


def validate_space(space: ModelSpace, grid_resolution: int = 200) -> ConvexityReport:
    report = check_space(space, grid_resolution)
    if not report.passed:
        raise ConvexityViolation(
            f"-log h is not ({space.cd.K}, {space.cd.N - 1})-convex: margin "
            f"{report.worst_margin:.3e} at (y0, y1, t) = {report.witness}",
            witness=report.witness, margin=report.worst_margin)
    return report


class SinhBounds(NamedTuple):
    lower: float
    value: float
    upper: float
    ok: bool


def _logsinh(z):
    z = np.asarray(z, dtype=float)
    return z + np.log(-np.expm1(-2.0 * z)) - math.log(2.0)


def sinh_ratio_bounds(h, K: float, N: float, x0: float, x1: float,
                      a: float = 0.0, b: float = math.pi, rtol: float = 1e-10) -> SinhBounds:
    """Two-sided bound on ``h(x1)/h(x0)`` for a (K, N-1)-convex ``-log h`` on ``(a, b)``.

    ``lower = (sinh((b-x1)c)/sinh((b-x0)c))**(N-1)`` and
    ``upper = (sinh((x1-a)c)/sinh((x0-a)c))**(N-1)`` with ``c = sqrt(-K/(N-1))``.
    ``h`` is a vectorised callable or a ModelSpace (then ``a, b`` default to its ends).

    Raises
    ------
    InvalidParameter
        ``K >= 0``, ``N <= 1`` or the points are not ordered ``a < x0 < x1 < b``.
    ZeroDivisionError
        ``h(x0) = 0``.
    """
    if isinstance(h, ModelSpace):
        space = h
        h = space.h
    if not K < 0:
        raise InvalidParameter("sinh-ratio bounds need K < 0")
    if not N > 1:
        raise InvalidParameter("N must exceed 1")
    if not (a < x0 < x1 < b):
        raise InvalidParameter(f"need a < x0 < x1 < b, got {a}, {x0}, {x1}, {b}")
    h0 = float(h(np.array([x0]))[0])
    h1 = float(h(np.array([x1]))[0])
    if h0 == 0.0:
        raise ZeroDivisionError("h(x0) = 0")
    c = math.sqrt(-K / (N - 1.0))
    p = N - 1.0
    if math.isinf(b):
        log_lower = -p * c * (x1 - x0)
    else:
        log_lower = p * float(_logsinh((b - x1) * c) - _logsinh((b - x0) * c))
    log_upper = p * float(_logsinh((x1 - a) * c) - _logsinh((x0 - a) * c))
    value = h1 / h0
    with np.errstate(over="ignore"):
        lower = float(np.exp(log_lower))
        upper = float(np.exp(log_upper))
    # compare logarithms: steep densities push the bounds past double range
    log_value = math.log(value) if value > 0 else -math.inf
    ok = log_lower - rtol <= log_value <= log_upper + rtol
    return SinhBounds(lower, value, upper, bool(ok))
