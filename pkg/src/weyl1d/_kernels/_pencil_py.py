"""Pure-Python fallback for the Sturm-count kernels.

Same recurrences as the compiled module, vectorised across shifts instead of
across nodes: one pass over the mesh evaluates the inertia at every shift.
Bisection therefore advances all requested eigenvalues in lock-step.
"""

from __future__ import annotations

import numpy as np


def _guard(d, e, wi, pivmin):
    small = np.abs(d) < pivmin
    if small.any():
        d = np.where(small, -pivmin, d)
        e = np.where(small, d - wi, e)
    return d, e


def _path_sweep(w, ma, mb, mc, sig, pivmin, track_rho=False):
    n = w.shape[0]
    e = -sig * ma[0]
    d, e = _guard(w[0] + e, e, w[0], pivmin)
    neg = (d < 0.0).astype(np.int64)
    logr = np.zeros_like(sig)
    sgn = np.ones_like(sig)
    for i in range(1, n + 1):
        wp = w[i - 1]
        x = sig * mb[i - 1]
        if track_rho:
            r = (wp + x) / d
            sgn = np.where(r < 0.0, -sgn, sgn)
            logr = logr + np.log(np.abs(r))
        if i < n:
            dm = mc[i - 1] + ma[i]
            wi = w[i]
        else:
            dm = mc[i - 1]
            wi = 0.0
        e = -sig * dm + (wp * e - x * (2.0 * wp + x)) / d
        d, e = _guard(wi + e, e, wi, pivmin)
        neg += d < 0.0
    return neg, d, logr, sgn


def pencil_counts(w, ma, mb, mc, sigmas, periodic, pivmin):
    """Number of eigenvalues strictly below each shift."""
    sig = np.ascontiguousarray(sigmas, dtype=np.float64)
    if not periodic:
        return _path_sweep(w, ma, mb, mc, sig, pivmin)[0]
    n = w.shape[0]
    neg, dn, logr, sgn = _path_sweep(w, ma, mb, mc, sig, pivmin, track_rho=True)
    f = -sig * mc[n - 1]
    g, f = _guard(w[n - 1] + f, f, w[n - 1], pivmin)
    for i in range(n - 1, -1, -1):
        x = sig * mb[i]
        wi = w[i]
        if i > 0:
            dm = ma[i] + mc[i - 1]
            wp = w[i - 1]
        else:
            dm = ma[i]
            wp = 0.0
        f = -sig * dm + (wi * f - x * (2.0 * wi + x)) / g
        g, f = _guard(wp + f, f, wp, pivmin)
    rho = sgn * np.exp(np.minimum(logr, 700.0))
    q = 1.0 / g + (1.0 - 2.0 * rho) / dn
    return neg + (q > 0.0) - 1


def bisect_eigenvalues(w, ma, mb, mc, indices, lower, upper, periodic, rtol, max_iter, pivmin):
    """Bisection for the eigenvalues with the given sorted 0-based indices."""
    k = np.asarray(indices, dtype=np.int64)
    lo = np.full(k.size, float(lower))
    hi = np.full(k.size, float(upper))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        scale = np.maximum(np.abs(lo), np.abs(hi))
        active = ((hi - lo) > rtol * scale) & (mid > lo) & (mid < hi)
        if not active.any():
            break
        c = pencil_counts(w, ma, mb, mc, mid[active], periodic, pivmin)
        up = c > k[active]
        hi[active] = np.where(up, mid[active], hi[active])
        lo[active] = np.where(up, lo[active], mid[active])
    return 0.5 * (lo + hi)
