"""Vectorised adaptive Gauss-Legendre quadrature over many intervals at once."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import QuadratureNonConvergence

_EPS = np.finfo(float).eps


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def fixed_gauss(func, a, b, order: int = 10) -> np.ndarray:
    """Non-adaptive rule applied to each interval ``[a_i, b_i]``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s, wt = gauss_legendre(order)
    length = b - a
    pts = a[..., None] + length[..., None] * s
    vals = np.asarray(func(pts.ravel()), dtype=float).reshape(pts.shape)
    return length * (vals @ wt)


def integrate_intervals(func, a, b, *, rtol: float = 1e-12, atol: float = 0.0,
                        order: int = 10, max_depth: int = 60,
                        max_panels: int = 2_000_000) -> np.ndarray:
    """Integrate a vectorised ``func`` over every interval ``[a_i, b_i]``.

    Each panel compares one ``order``-point rule against the same rule on its
    two halves.  A panel is accepted once the discrepancy drops under
    ``rtol * |I| * max(len/L, 1/64)`` (or ``atol``), where ``I`` is the running
    estimate for its interval.  The floor on the length fraction keeps
    algebraic endpoint singularities such as ``x**p`` from forcing unbounded
    refinement.

    Raises
    ------
    QuadratureNonConvergence
        If a panel is still rejected after ``max_depth`` bisections.
    """
    a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    shape = a.shape
    a = a.ravel().copy()
    b = b.ravel().copy()
    m = a.size
    total = np.zeros(m)
    lengths = b - a
    live = lengths != 0.0
    owner = np.nonzero(live)[0]
    pa = a[live]
    pb = b[live]
    s, wt = gauss_legendre(order)

    estimate = np.zeros(m)
    for depth in range(max_depth + 1):
        if owner.size == 0:
            break
        if owner.size > max_panels:
            raise QuadratureNonConvergence(
                f"adaptive quadrature exceeded {max_panels} panels")
        mid = 0.5 * (pa + pb)
        lefts = np.concatenate([pa, pa, mid])
        widths = np.concatenate([pb - pa, mid - pa, pb - mid])
        pts = lefts[:, None] + widths[:, None] * s
        vals = np.asarray(func(pts.ravel()), dtype=float).reshape(pts.shape)
        if not np.all(np.isfinite(vals)):
            raise QuadratureNonConvergence("integrand is not finite on a panel")
        res = widths * (vals @ wt)
        k = owner.size
        whole = res[:k]
        halves = res[k:2 * k] + res[2 * k:]
        err = np.abs(whole - halves)

        # running estimate: accepted mass plus the best guess on live panels
        estimate = total.copy()
        np.add.at(estimate, owner, halves)
        frac = np.abs(pb - pa) / np.abs(lengths[owner])
        budget = rtol * np.abs(estimate[owner]) * np.maximum(frac, 1.0 / 64.0)
        ok = (err <= np.maximum(budget, atol)) | (err <= 50.0 * _EPS * np.abs(halves))
        np.add.at(total, owner[ok], halves[ok])
        bad = ~ok
        if not bad.any():
            owner = owner[:0]
            break
        if depth == max_depth:
            raise QuadratureNonConvergence(
                f"adaptive quadrature did not converge within {max_depth} bisections")
        ob = owner[bad]
        owner = np.concatenate([ob, ob])
        pa, pb, mid = pa[bad], pb[bad], mid[bad]
        pa, pb = np.concatenate([pa, mid]), np.concatenate([mid, pb])
    return total.reshape(shape)
