"""One-dimensional model spaces: an interval ``[0, l]`` or a circle of radius
``r``, carrying the measure ``h dx`` with ``h = exp(-f)``.

Coordinates are plain reals: ``[0, l]`` on intervals, ``[0, 2 pi r)`` on
circles, so the one-dimensional Hausdorff measure is Lebesgue measure on the
coordinate.
"""

from __future__ import annotations

import ast
import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Union

import numpy as np

from .errors import (DomainMismatch, InteriorZeroDensity, InvalidParameter,
                     OutOfDomain, EvaluationFailure)
from .quadrature import integrate_intervals

_DOMAIN_TOL = 1e-12


@dataclass(frozen=True)
class CurvatureDimension:
    """Lower Ricci bound ``K`` and upper dimension bound ``N > 1``."""

    K: float
    N: float

    def __post_init__(self):
        if not (math.isfinite(self.K) and math.isfinite(self.N)):
            raise InvalidParameter("K and N must be finite")
        if self.N <= 1.0:
            raise InvalidParameter(f"N must exceed 1, got {self.N}")


@dataclass(frozen=True)
class Interval:
    length: float

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidParameter(f"interval length must be positive, got {self.length}")

    @property
    def period(self) -> float:
        return self.length

    @property
    def diameter(self) -> float:
        return self.length


@dataclass(frozen=True)
class Circle:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidParameter(f"circle radius must be positive, got {self.radius}")

    @property
    def period(self) -> float:
        return 2.0 * math.pi * self.radius

    @property
    def diameter(self) -> float:
        return math.pi * self.radius


SpaceKind = Union[Interval, Circle]


# --------------------------------------------------------------------------
# density families

_ALLOWED_FUNCS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan, "exp": np.exp, "log": np.log,
    "sqrt": np.sqrt, "sinh": np.sinh, "cosh": np.cosh, "tanh": np.tanh,
    "abs": np.abs, "arcsin": np.arcsin, "arccos": np.arccos, "arctan": np.arctan,
    "log1p": np.log1p, "expm1": np.expm1,
}
_ALLOWED_NAMES = {"x", "pi", "e", *_ALLOWED_FUNCS}
_ALLOWED_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Call, ast.Name, ast.Load,
                  ast.Constant, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow, ast.USub,
                  ast.UAdd)


def compile_expression(expr: str) -> Callable[[np.ndarray], np.ndarray]:
    """Compile a restricted arithmetic expression in ``x`` to a numpy callable.

    Only numeric literals, ``x``, ``pi``, ``e``, the arithmetic operators and a
    fixed set of numpy functions are accepted.
    """
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise InvalidParameter(f"cannot parse expression {expr!r}: {exc.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise InvalidParameter(f"disallowed syntax {type(node).__name__} in {expr!r}")
        if isinstance(node, ast.Name) and node.id not in _ALLOWED_NAMES:
            raise InvalidParameter(f"unknown name {node.id!r} in {expr!r}")
        if isinstance(node, ast.Call) and not (
                isinstance(node.func, ast.Name) and node.func.id in _ALLOWED_FUNCS):
            raise InvalidParameter(f"disallowed call in {expr!r}")
        if isinstance(node, ast.Constant) and not isinstance(node.value, (int, float)):
            raise InvalidParameter(f"non-numeric literal in {expr!r}")
    code = compile(tree, "<density>", "eval")
    namespace = {"__builtins__": {}, "pi": math.pi, "e": math.e, **_ALLOWED_FUNCS}

    def f(x):
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(eval(code, namespace, {"x": x}), x.shape)

    return f


@dataclass(frozen=True)
class Constant:
    value: float = 1.0

    name = "constant"

    def evaluate(self, x, period):
        return np.full(np.shape(x), float(self.value))

    def params(self):
        return {"value": float(self.value)}


@dataclass(frozen=True, eq=False)
class ExpNegF:
    """``h = exp(-f)`` for a vectorised callable or an expression string in ``x``."""

    f: Union[Callable, str]
    _fn: Callable = field(init=False, repr=False, compare=False)

    name = "expnegf"

    def __post_init__(self):
        fn = compile_expression(self.f) if isinstance(self.f, str) else self.f
        object.__setattr__(self, "_fn", fn)

    def log_potential(self, x):
        x = np.asarray(x, dtype=float)
        try:
            with np.errstate(all="ignore"):
                out = np.asarray(self._fn(x), dtype=float)
            if out.shape != x.shape:
                out = np.broadcast_to(out, x.shape) if out.ndim == 0 else \
                    np.vectorize(self._fn, otypes=[float])(x)
        except Exception as exc:  # user callable
            raise EvaluationFailure(f"potential evaluation failed: {exc}") from exc
        return out

    def evaluate(self, x, period):
        f = self.log_potential(x)
        if np.any(np.isnan(f)):
            raise EvaluationFailure("potential returned NaN")
        with np.errstate(over="ignore"):
            return np.exp(-f)

    def params(self):
        if isinstance(self.f, str):
            return {"f": self.f}
        return {"f": f"<callable {getattr(self.f, '__qualname__', repr(self.f))} {id(self.f):x}>"}


@dataclass(frozen=True)
class SinPower:
    """``sin(pi x / l) ** exponent`` on ``[0, l]``; ``sin(x)**p`` when ``l = pi``."""

    exponent: float

    name = "sinpower"

    def __post_init__(self):
        if not self.exponent > 0:
            raise InvalidParameter("SinPower exponent must be positive")

    def evaluate(self, x, period):
        x = np.asarray(x, dtype=float)
        s = np.sin(np.pi * x / period)
        inside = (x > 0.0) & (x < period)
        return np.where(inside, np.abs(s) ** self.exponent, 0.0)

    def params(self):
        return {"exponent": float(self.exponent)}


@dataclass(frozen=True, eq=False)
class Sampled:
    """Samples on a strictly increasing grid, interpolated linearly in ``log h``.

    Pieces touching a zero sample are interpolated linearly in ``h``.
    """

    grid: np.ndarray
    values: np.ndarray

    name = "sampled"

    def __post_init__(self):
        g = np.array(self.grid, dtype=float)
        v = np.array(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise InvalidParameter("sampled grid and values must be 1-D of equal length >= 2")
        if np.any(np.diff(g) <= 0):
            raise InvalidParameter("sampled grid must be strictly increasing")
        if np.any(~np.isfinite(v)) or np.any(v < 0):
            raise InvalidParameter("sampled values must be finite and nonnegative")
        g.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def _extended(self, period, periodic):
        g, v = self.grid, self.values
        if periodic:
            g = np.append(g, g[0] + period)
            v = np.append(v, v[0])
        return g, v

    def evaluate(self, x, period, periodic=False):
        x = np.asarray(x, dtype=float)
        g, v = self._extended(period, periodic)
        if periodic:
            x = np.where(x < g[0], x + period, x)
        i = np.clip(np.searchsorted(g, x, side="right") - 1, 0, g.size - 2)
        x0, x1 = g[i], g[i + 1]
        v0, v1 = v[i], v[i + 1]
        s = np.clip((x - x0) / (x1 - x0), 0.0, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            loglin = np.exp((1.0 - s) * np.log(v0) + s * np.log(v1))
        lin = (1.0 - s) * v0 + s * v1
        return np.where((v0 > 0) & (v1 > 0), loglin, lin)

    def piece_integrals(self, period, periodic=False):
        g, v = self._extended(period, periodic)
        return _piece_integral(v[:-1], v[1:], np.diff(g))

    def params(self):
        digest = hashlib.sha256(self.grid.tobytes() + self.values.tobytes()).hexdigest()
        return {"n": int(self.grid.size), "sha256": digest}


def _piece_integral(v0, v1, dx):
    """Exact integral of one log-linear (or linear) piece."""
    v0 = np.asarray(v0, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    pos = (v0 > 0) & (v1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pos, v1 / np.where(pos, v0, 1.0), 1.0)
        u = np.log(ratio)
        # (v1 - v0) / log(v1 / v0) = v0 * expm1(u) / u
        small = np.abs(u) < 1e-8
        lm = np.where(small, v0 * (1.0 + 0.5 * u + u * u / 6.0), v0 * np.expm1(u) / np.where(small, 1.0, u))
    return dx * np.where(pos, lm, 0.5 * (v0 + v1))


Family = Union[Constant, ExpNegF, SinPower, Sampled]


@dataclass(frozen=True)
class DensitySpec:
    """How ``h`` is built, plus the curvature-dimension pair it is claimed for.

    ``scale`` multiplies the family, so ``b * h`` is ``spec.scaled(b)``.
    """

    family: Family
    cd: CurvatureDimension
    scale: float = 1.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise InvalidParameter("density scale must be positive and finite")

    def scaled(self, b: float) -> "DensitySpec":
        return replace(self, scale=self.scale * b)

    @classmethod
    def constant(cls, value=1.0, K=0.0, N=2.0):
        return cls(Constant(value), CurvatureDimension(K, N))

    @classmethod
    def sinpower(cls, N, K=None):
        """``sin**(N-1)``; ``K`` defaults to ``-(N-1)``."""
        return cls(SinPower(N - 1.0), CurvatureDimension(-(N - 1.0) if K is None else K, N))

    @classmethod
    def exp_neg_f(cls, f, K, N):
        return cls(ExpNegF(f), CurvatureDimension(K, N))

    @classmethod
    def sampled(cls, grid, values, K, N):
        return cls(Sampled(grid, values), CurvatureDimension(K, N))


# --------------------------------------------------------------------------
# model space

@dataclass(frozen=True, eq=False)
class ModelSpace:
    kind: SpaceKind
    density: DensitySpec
    total_mass: float
    hausdorff_length: float

    @property
    def is_circle(self) -> bool:
        return isinstance(self.kind, Circle)

    @property
    def period(self) -> float:
        return self.kind.period

    @property
    def diameter(self) -> float:
        return self.kind.diameter

    @property
    def cd(self) -> CurvatureDimension:
        return self.density.cd

    def h(self, x) -> np.ndarray:
        """Density at coordinates ``x`` (no domain check; circles wrap)."""
        x = np.asarray(x, dtype=float)
        fam = self.density.family
        L = self.period
        if self.is_circle:
            x = np.mod(x, L)
            if isinstance(fam, Sampled):
                return self.density.scale * fam.evaluate(x, L, periodic=True)
        return self.density.scale * fam.evaluate(x, L)

    @property
    def vanishing_endpoints(self) -> tuple[bool, bool]:
        if self.is_circle:
            return (False, False)
        v = self.h(np.array([0.0, self.period]))
        return (bool(v[0] == 0.0), bool(v[1] == 0.0))

    def breakpoints(self) -> np.ndarray:
        """Coordinates where ``h`` may have kinks (sample nodes), inside ``[0, L]``."""
        fam = self.density.family
        if isinstance(fam, Sampled):
            g = fam.grid
            return g[(g > 0.0) & (g < self.period)]
        return np.empty(0)

    def mass_between(self, a, b, rtol: float = 1e-13) -> np.ndarray:
        """``m([a, b])`` for ``0 <= a <= b <= L`` (coordinate intervals, no wrap).

        The family is integrated unscaled and multiplied by ``scale`` afterwards,
        so scaling the measure scales every mass by exactly that factor.
        """
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        fam = self.density.family
        if isinstance(fam, Constant):
            base = fam.value * (b - a)
        elif isinstance(fam, Sampled):
            base = _sampled_mass(fam, a, b, self.period, self.is_circle)
        else:
            fam_eval = fam.evaluate
            L = self.period
            if self.is_circle:
                base = integrate_intervals(lambda x: fam_eval(np.mod(x, L), L), a, b, rtol=rtol)
            else:
                base = integrate_intervals(lambda x: fam_eval(x, L), a, b, rtol=rtol)
        return self.density.scale * base

    def fingerprint(self) -> str:
        kind = {"kind": "circle", "radius": repr(float(self.kind.radius))} if self.is_circle \
            else {"kind": "interval", "length": repr(float(self.kind.length))}
        fam = self.density.family
        payload = {
            **kind,
            "family": fam.name,
            "params": {k: repr(v) if isinstance(v, float) else v for k, v in fam.params().items()},
            "K": repr(float(self.cd.K)),
            "N": repr(float(self.cd.N)),
            "scale": repr(float(self.density.scale)),
        }
        text = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()


def _sampled_mass(fam: Sampled, a, b, period, periodic):
    g, v = fam._extended(period, periodic)
    prefix = np.concatenate([[0.0], np.cumsum(fam.piece_integrals(period, periodic))])

    def cumulative(x):
        x = np.clip(np.asarray(x, dtype=float), g[0], g[-1])
        i = np.clip(np.searchsorted(g, x, side="right") - 1, 0, g.size - 2)
        hx = fam.evaluate(np.where(x >= period, x - period, x) if periodic else x,
                          period, periodic)
        return prefix[i] + _piece_integral(v[i], hx, x - g[i])

    return cumulative(b) - cumulative(a)


def _check_domain(space: ModelSpace, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    L = space.period
    tol = _DOMAIN_TOL * max(1.0, L)
    if np.any(~np.isfinite(x)) or np.any(x < -tol) or np.any(x > L + tol):
        raise OutOfDomain(f"coordinate outside [0, {L}]")
    x = np.clip(x, 0.0, L)
    if space.is_circle:
        x = np.where(x >= L, 0.0, x)
    return x


def eval_density(space: ModelSpace, x):
    """``h(x)`` with a domain check; scalars in, scalar out."""
    xs = _check_domain(space, x)
    out = space.h(xs)
    return float(out) if np.ndim(out) == 0 else out


def distance(space: ModelSpace, x, y):
    """Intrinsic distance: ``|x - y|`` on intervals, arc length on circles."""
    xs = _check_domain(space, x)
    ys = _check_domain(space, y)
    d = np.abs(xs - ys)
    if space.is_circle:
        d = np.minimum(d, space.period - d)
    return float(d) if np.ndim(d) == 0 else d


def _probe_grid(space: ModelSpace, n: int = 4097) -> np.ndarray:
    L = space.period
    if space.is_circle:
        return np.linspace(0.0, L, n, endpoint=False)
    return np.linspace(0.0, L, n)[1:-1]


def make_space(kind: SpaceKind, density: DensitySpec, validate: bool = False,
               normalize: bool = False, grid_resolution: int = 200) -> ModelSpace:
    """Build and check a model space.

    Parameters
    ----------
    kind : Interval or Circle
    density : DensitySpec
    validate : bool
        Run the (K, N-1)-convexity check on ``-log h``.
    normalize : bool
        Rescale the density so that ``m(X) = 1``.

    Raises
    ------
    DomainMismatch, InteriorZeroDensity, ConvexityViolation
    """
    fam = density.family
    L = kind.period
    periodic = isinstance(kind, Circle)
    if isinstance(fam, SinPower):
        if periodic:
            raise DomainMismatch("SinPower densities live on intervals only")
        if abs(fam.exponent - (density.cd.N - 1.0)) > 1e-12 * max(1.0, density.cd.N):
            raise InvalidParameter(
                f"SinPower exponent {fam.exponent} must equal N - 1 = {density.cd.N - 1.0}")
    if isinstance(fam, Constant) and not fam.value > 0:
        raise InteriorZeroDensity("constant density must be positive")
    if isinstance(fam, Sampled):
        g = fam.grid
        tol = _DOMAIN_TOL * max(1.0, L)
        if g[0] > tol:
            raise DomainMismatch("sampled grid does not start at 0")
        if periodic:
            if g[-1] >= L - tol:
                raise DomainMismatch("circle samples must lie in [0, 2 pi r)")
            if np.any(fam.values == 0):
                raise InteriorZeroDensity("circle density vanishes at a sample")
        else:
            if g[-1] < L - tol:
                raise DomainMismatch(f"sampled grid ends at {g[-1]}, before {L}")
            inner = (g > tol) & (g < L - tol)
            if np.any(fam.values[inner] == 0):
                where = float(g[inner][np.argmax(fam.values[inner] == 0)])
                raise InteriorZeroDensity(f"density vanishes at interior point {where}")

    space = ModelSpace(kind, density, total_mass=1.0, hausdorff_length=L)
    probe = space.h(_probe_grid(space))
    if np.any(~np.isfinite(probe)):
        raise EvaluationFailure("density is not finite on the space")
    if np.any(probe <= 0):
        raise InteriorZeroDensity("density vanishes or is negative in the interior")

    mass = float(space.mass_between(0.0, L))
    if not (mass > 0 and math.isfinite(mass)):
        raise InteriorZeroDensity("total mass is not positive and finite")
    if normalize:
        density = density.scaled(1.0 / mass)
        mass = mass / space.density.scale * density.scale
    space = ModelSpace(kind, density, total_mass=mass, hausdorff_length=L)

    if validate:
        from .convexity import validate_space
        validate_space(space, grid_resolution=grid_resolution)
    return space
