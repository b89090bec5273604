"""Weyl-law experiments on computed or synthetic spectra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
from scipy.special import exp1, lambertw

from .errors import HypothesisNotMet, InsufficientSpectrum, InvalidParameter
from .spectral import Spectrum, counting_function, heat_trace

ALPHA_GRID = (0.25, 0.5, 0.75, 1.0)


# --------------------------------------------------------------------------
# Weyl ratio

def weyl_ratio_curve(spec: Spectrum, lambdas) -> np.ndarray:
    """Rows ``(lambda, N(lambda) / sqrt(lambda))``."""
    lam = np.asarray(lambdas, dtype=float)
    if np.any(~(lam > 0)):
        raise InvalidParameter("lambda grid must be positive")
    counts = np.asarray(counting_function(spec, lam))
    return np.column_stack([lam, counts / np.sqrt(lam)])


def top_decade(spec: Spectrum, points: int = 200) -> np.ndarray:
    hi = spec.lambda_max
    if not hi > 0:
        raise InsufficientSpectrum("spectrum has no positive eigenvalues")
    return np.geomspace(hi / 10.0, hi, points)


@dataclass(frozen=True)
class WeylTail:
    lambdas: np.ndarray
    ratios: np.ndarray
    target: float
    max_rel_deviation: float
    ratio_at_top: float
    rtol: float

    @property
    def ok(self) -> bool:
        return self.max_rel_deviation <= self.rtol


def weyl_tail_check(spec: Spectrum, target: Optional[float] = None, rtol: float = 0.05,
                    points: int = 200) -> WeylTail:
    """Worst relative gap between ``N(lambda)/sqrt(lambda)`` and ``H^1/pi`` on the top decade."""
    if target is None:
        if spec.weyl_constant is None:
            raise InvalidParameter("no target: the spectrum carries no Hausdorff length")
        target = spec.weyl_constant
    curve = weyl_ratio_curve(spec, top_decade(spec, points))
    dev = np.abs(curve[:, 1] / target - 1.0)
    return WeylTail(lambdas=curve[:, 0], ratios=curve[:, 1], target=float(target),
                    max_rel_deviation=float(dev.max()), ratio_at_top=float(curve[-1, 1]),
                    rtol=rtol)


# --------------------------------------------------------------------------
# heat trace

class HeatTraceLimit(NamedTuple):
    liminf_estimate: float
    lower_bound: float
    ok: bool
    t_grid: np.ndarray
    values: np.ndarray


def default_t_grid(diameter: float, points: int = 41) -> np.ndarray:
    return np.geomspace(1e-1, 1e-3, points) * diameter ** 2


def heat_trace_limit(spec: Spectrum, k: float = 1.0, t_grid: Optional[Sequence[float]] = None,
                     *, tol: float = 0.02, tail_model: bool = True,
                     diameter: Optional[float] = None,
                     lower_bound: Optional[float] = None) -> HeatTraceLimit:
    """Minimum of ``t^(k/2) Z(t)`` over ``t_grid`` against ``(4 pi)^(-k/2) H^1``.

    For ``k != 1`` the bound is taken as ``(4 pi)^(-k/2) (H^1)^k``.
    """
    H = spec.hausdorff_length
    if lower_bound is None:
        if H is None:
            raise InvalidParameter("lower_bound is required for spectra without geometry")
        lower_bound = (4.0 * math.pi) ** (-k / 2.0) * H ** k
    if t_grid is None:
        if diameter is None:
            if H is None:
                raise InvalidParameter("t_grid or diameter is required")
            diameter = H
        t_grid = default_t_grid(diameter)
    t = np.asarray(t_grid, dtype=float)
    values = t ** (k / 2.0) * np.asarray(heat_trace(spec, t, tail_model=tail_model))
    est = float(values.min())
    return HeatTraceLimit(est, float(lower_bound), bool(est >= lower_bound * (1.0 - tol)), t, values)


# --------------------------------------------------------------------------
# Abelian theorem on synthetic measures

class Lebesgue:
    """Lebesgue measure on ``[0, inf)``."""

    name = "lebesgue"

    def cdf(self, a):
        return np.asarray(a, dtype=float)

    def laplace(self, t):
        return 1.0 / np.asarray(t, dtype=float)


@dataclass(frozen=True, eq=False)
class Atoms:
    """Finite sum of point masses; ``laplace`` sums in a fixed order."""

    points: np.ndarray
    weights: Optional[np.ndarray] = None
    name: str = "atoms"

    def __post_init__(self):
        p = np.sort(np.asarray(self.points, dtype=float))
        if np.any(p < 0):
            raise InvalidParameter("atoms must lie in [0, inf)")
        object.__setattr__(self, "points", p)
        if self.weights is not None:
            object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))

    @classmethod
    def squares(cls, kmax: int) -> "Atoms":
        """``sum_{k >= 0} delta_{k^2}`` truncated at ``kmax``."""
        return cls(np.arange(kmax + 1, dtype=float) ** 2, name="squares")

    @classmethod
    def from_spectrum(cls, spec: Spectrum) -> "Atoms":
        return cls(spec.eigenvalues, name="spectrum")

    def cdf(self, a):
        a = np.asarray(a, dtype=float)
        if self.weights is None:
            return np.searchsorted(self.points, a, side="right").astype(float)
        cw = np.concatenate([[0.0], np.cumsum(self.weights)])
        return cw[np.searchsorted(self.points, a, side="right")]

    def laplace(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        w = np.ones_like(self.points) if self.weights is None else self.weights
        return np.array([math.fsum(w * np.exp(-self.points * ti)) for ti in t])


@dataclass(frozen=True)
class XLogX:
    """Absolutely continuous measure with ``nu([0, a]) = c a log a`` for ``a >= 1``."""

    c: float = 1.0 / (4.0 * math.pi)
    name: str = "xlogx"

    def cdf(self, a):
        a = np.asarray(a, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(a >= 1.0, self.c * a * np.log(np.maximum(a, 1.0)), 0.0)

    def laplace(self, t):
        # int_1^inf e^{-tx} (log x + 1) dx = (E1(t) + e^{-t}) / t
        t = np.asarray(t, dtype=float)
        return self.c * (exp1(t) + np.exp(-t)) / t


def log_normalizer(x):
    return np.log(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class AbelianResult:
    lhs_limit: float
    rhs: float
    ok: bool
    cdf_ratios: np.ndarray
    transform_ratios: np.ndarray
    rel_error: float


def abelian_check(nu, gamma: float, C: float, a_grid: Sequence[float], t_grid: Sequence[float],
                  *, rtol: float = 0.01, a_rtol: float = 0.01,
                  slowly_varying: Optional[Callable] = None) -> AbelianResult:
    """Check ``nu([0,a]) ~ C a^gamma L(a)`` and ``t^gamma int e^{-tx} dnu ~ C Gamma(gamma+1) L(1/t)``.

    ``L`` is ``slowly_varying`` (identically 1 by default).  The transform side
    is judged at the smallest ``t`` in the grid.

    Raises
    ------
    HypothesisNotMet
        The ratio ``nu([0,a]) / (a^gamma L(a))`` at the top of ``a_grid`` is not
        within ``a_rtol`` of ``C``.
    """
    if gamma < 0 or C < 0:
        raise InvalidParameter("gamma and C must be nonnegative")
    a = np.asarray(a_grid, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if a.size < 2 or np.any(np.diff(a) <= 0):
        raise InvalidParameter("a_grid must be strictly increasing")
    if t.size < 1 or np.any(np.diff(t) >= 0):
        raise InvalidParameter("t_grid must be strictly decreasing")
    Lf = slowly_varying if slowly_varying is not None else (lambda x: np.ones_like(np.asarray(x, dtype=float)))
    cdf_ratios = np.asarray(nu.cdf(a)) / (a ** gamma * Lf(a))
    if not abs(cdf_ratios[-1] - C) <= a_rtol * max(C, 1e-300):
        raise HypothesisNotMet(
            f"nu([0,a]) / a^gamma ends at {cdf_ratios[-1]:.6g}, not within {a_rtol:g} of C={C:g}")
    rhs = C * math.gamma(gamma + 1.0)
    with np.errstate(divide="ignore"):
        transform = t ** gamma * np.asarray(nu.laplace(t)) / Lf(1.0 / t)
    lhs = float(transform[-1])
    rel = abs(lhs - rhs) / rhs if rhs != 0 else abs(lhs)
    return AbelianResult(lhs_limit=lhs, rhs=rhs, ok=bool(rel <= rtol), cdf_ratios=cdf_ratios,
                         transform_ratios=transform, rel_error=float(rel))


def abelian_compatibility(spec: Spectrum, rtol: float = 0.05) -> tuple[float, float, bool]:
    """Compare ``sqrt(t) Z(t)`` at ``t = 1/lambda_hi`` with ``Gamma(3/2)`` times the top Weyl ratio."""
    lam = spec.lambda_max
    t = 1.0 / lam
    lhs = math.sqrt(t) * float(heat_trace(spec, t, tail_model=True))
    ratio = counting_function(spec, lam) / math.sqrt(lam)
    rhs = math.gamma(1.5) * ratio
    return lhs, rhs, bool(abs(lhs - rhs) <= rtol * rhs)


# --------------------------------------------------------------------------
# dimension classifier

@dataclass(frozen=True)
class AsymptoticsFit:
    exponent: float
    constant: float
    residual: float
    window: tuple[float, float]
    log_correction_detected: bool
    alpha_slopes: dict = field(default_factory=dict)
    log_ratio_variation: float = float("nan")


def classify_dimension(spec: Spectrum, alpha_grid: Sequence[float] = ALPHA_GRID, *,
                       tol_e: float = 0.05, log_tol: float = 0.05, points: int = 64,
                       min_eigenvalues: int = 50) -> tuple[bool, AsymptoticsFit]:
    """Decide whether ``N(lambda)`` grows like ``lambda^(1/2)``.

    The exponent is a log-log least-squares fit on the even points of a
    log-spaced grid over ``[lambda_hi/10, lambda_hi]``; the residual is the
    worst relative misfit on the odd (held-out) points.  For every alpha the
    fitted log-log slope of ``N / lambda^((1+alpha)/2)`` must be at most
    ``-alpha/4``.  ``N / (lambda log lambda)`` varying by at most ``log_tol``
    across the window flags a logarithmic correction.
    """
    nonzero = int(np.count_nonzero(spec.eigenvalues > 0))
    if nonzero < min_eigenvalues:
        raise InsufficientSpectrum(
            f"need at least {min_eigenvalues} nonzero eigenvalues, have {nonzero}")
    hi = spec.lambda_max
    lo = hi / 10.0
    lam = np.geomspace(lo, hi, points)
    n = np.asarray(counting_function(spec, lam), dtype=float)
    x = np.log(lam)
    y = np.log(n)
    fit_x, fit_y = x[0::2], y[0::2]
    slope, intercept = np.polyfit(fit_x, fit_y, 1)
    held = slice(1, None, 2)
    pred = np.exp(intercept + slope * x[held])
    residual = float(np.max(np.abs(n[held] / pred - 1.0)))
    constant = float(n[-1] / hi ** slope)

    alpha_slopes = {}
    decays = True
    for alpha in alpha_grid:
        s = float(np.polyfit(fit_x, fit_y - 0.5 * (1.0 + alpha) * fit_x, 1)[0])
        alpha_slopes[float(alpha)] = s
        decays &= s <= -alpha / 4.0

    with np.errstate(divide="ignore", invalid="ignore"):
        log_ratio = n / (lam * np.log(lam))
    if lo > 1.0 and np.all(log_ratio > 0):
        variation = float((log_ratio.max() - log_ratio.min()) / log_ratio.mean())
    else:
        variation = float("inf")
    fit = AsymptoticsFit(exponent=float(slope), constant=constant, residual=residual,
                         window=(float(lo), float(hi)),
                         log_correction_detected=bool(variation <= log_tol),
                         alpha_slopes=alpha_slopes, log_ratio_variation=variation)
    one_d = bool(decays and abs(slope - 0.5) <= tol_e)
    return one_d, fit


# --------------------------------------------------------------------------
# synthetic spectra

def linear_spectrum(n: int) -> Spectrum:
    """``lambda_i = i`` for ``i = 0..n-1``, so ``N(lambda) = floor(lambda) + 1``."""
    return Spectrum.from_eigenvalues(np.arange(n, dtype=float))


def xlogx_spectrum(n: int, c: float = 1.0 / (4.0 * math.pi)) -> Spectrum:
    """Zero plus ``lambda_i`` solving ``c lambda log lambda = i`` for ``i = 1..n-1``."""
    y = np.arange(1, n, dtype=float) / c
    lam = y / np.real(lambertw(y))
    return Spectrum.from_eigenvalues(np.concatenate([[0.0], lam]))
