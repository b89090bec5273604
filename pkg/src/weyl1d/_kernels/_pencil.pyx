# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled Sturm-count kernels for P1 pencils on a path or a cycle.

The pencil is given element-wise: element ``e`` joins nodes ``e`` and ``e + 1``
(``e + 1`` taken modulo the element count on a cycle) with stiffness
``w[e] * [[1, -1], [-1, 1]]`` and mass ``[[ma[e], mb[e]], [mb[e], mc[e]]]``.

Pivots are carried as ``d_i = w_i + e_i`` so that the zero row sums of the
stiffness cancel analytically; ``e_i`` is O(sigma * mass) and keeps full
relative accuracy down to the smallest eigenvalues.
"""

from libc.math cimport fabs, log, exp

import numpy as np


cdef inline long _path_count(const double[::1] w, const double[::1] ma,
                             const double[::1] mb, const double[::1] mc,
                             double sigma, double pivmin) noexcept nogil:
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double e, d, wp, x, dm, wi
    cdef long neg = 0
    e = -sigma * ma[0]
    d = w[0] + e
    if fabs(d) < pivmin:
        d = -pivmin
        e = d - w[0]
    if d < 0.0:
        neg += 1
    for i in range(1, n + 1):
        wp = w[i - 1]
        x = sigma * mb[i - 1]
        if i < n:
            dm = mc[i - 1] + ma[i]
            wi = w[i]
        else:
            dm = mc[i - 1]
            wi = 0.0
        e = -sigma * dm + (wp * e - x * (2.0 * wp + x)) / d
        d = wi + e
        if fabs(d) < pivmin:
            d = -pivmin
            e = d - wi
        if d < 0.0:
            neg += 1
    return neg


cdef inline long _cycle_count(const double[::1] w, const double[::1] ma,
                              const double[::1] mb, const double[::1] mc,
                              double sigma, double pivmin) noexcept nogil:
    # neg(A) = neg(P) + [c^T P^{-1} c > 0] - 1, P the path obtained by cutting
    # the cycle at node 0 and c = e_0 - e_n.
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double e, d, wp, x, dm, wi, r, f, g0, dn, rho, q
    cdef double logr = 0.0
    cdef double sgn = 1.0
    cdef long neg = 0
    e = -sigma * ma[0]
    d = w[0] + e
    if fabs(d) < pivmin:
        d = -pivmin
        e = d - w[0]
    if d < 0.0:
        neg += 1
    for i in range(1, n + 1):
        wp = w[i - 1]
        x = sigma * mb[i - 1]
        r = (wp + x) / d
        if r < 0.0:
            sgn = -sgn
            r = -r
        logr += log(r)
        if i < n:
            dm = mc[i - 1] + ma[i]
            wi = w[i]
        else:
            dm = mc[i - 1]
            wi = 0.0
        e = -sigma * dm + (wp * e - x * (2.0 * wp + x)) / d
        d = wi + e
        if fabs(d) < pivmin:
            d = -pivmin
            e = d - wi
        if d < 0.0:
            neg += 1
    dn = d
    # backward pivots g_i = w_{i-1} + f_i of the same path; g_0 = 1 / (P^{-1})_{00}
    f = -sigma * mc[n - 1]
    g0 = w[n - 1] + f
    if fabs(g0) < pivmin:
        g0 = -pivmin
        f = g0 - w[n - 1]
    for i in range(n - 1, -1, -1):
        x = sigma * mb[i]
        wi = w[i]
        if i > 0:
            dm = ma[i] + mc[i - 1]
            wp = w[i - 1]
        else:
            dm = ma[i]
            wp = 0.0
        f = -sigma * dm + (wi * f - x * (2.0 * wi + x)) / g0
        g0 = wp + f
        if fabs(g0) < pivmin:
            g0 = -pivmin
            f = g0 - wp
    if logr > 700.0:
        logr = 700.0
    rho = sgn * exp(logr)
    q = 1.0 / g0 + (1.0 - 2.0 * rho) / dn
    if q > 0.0:
        neg += 1
    return neg - 1


cdef inline long _count(const double[::1] w, const double[::1] ma,
                        const double[::1] mb, const double[::1] mc,
                        double sigma, double pivmin, bint periodic) noexcept nogil:
    if periodic:
        return _cycle_count(w, ma, mb, mc, sigma, pivmin)
    return _path_count(w, ma, mb, mc, sigma, pivmin)


def pencil_counts(double[::1] w, double[::1] ma, double[::1] mb, double[::1] mc,
                  double[::1] sigmas, bint periodic, double pivmin):
    """Number of eigenvalues strictly below each shift."""
    cdef Py_ssize_t m = sigmas.shape[0]
    cdef Py_ssize_t j
    out = np.empty(m, dtype=np.int64)
    cdef long long[::1] o = out
    with nogil:
        for j in range(m):
            o[j] = _count(w, ma, mb, mc, sigmas[j], pivmin, periodic)
    return out


def bisect_eigenvalues(double[::1] w, double[::1] ma, double[::1] mb, double[::1] mc,
                       long long[::1] indices, double lower, double upper,
                       bint periodic, double rtol, int max_iter, double pivmin):
    """Bisection for the eigenvalues with the given sorted 0-based indices.

    ``lower``/``upper`` must bracket every requested eigenvalue.  Every count is
    reused to tighten the brackets of all indices, not only the active one.
    """
    cdef Py_ssize_t m = indices.shape[0]
    cdef Py_ssize_t j, k
    cdef int it
    cdef long c
    cdef double a, b, mid, width
    lo_arr = np.full(m, lower)
    hi_arr = np.full(m, upper)
    cdef double[::1] lo = lo_arr
    cdef double[::1] hi = hi_arr
    with nogil:
        for k in range(m):
            for it in range(max_iter):
                a = lo[k]
                b = hi[k]
                mid = 0.5 * (a + b)
                width = b - a
                if width <= rtol * (fabs(a) if fabs(a) > fabs(b) else fabs(b)):
                    break
                if mid <= a or mid >= b:
                    break
                c = _count(w, ma, mb, mc, mid, pivmin, periodic)
                for j in range(k, m):
                    if c > indices[j]:
                        if mid < hi[j]:
                            hi[j] = mid
                    else:
                        if mid > lo[j]:
                            lo[j] = mid
            if k + 1 < m and lo[k + 1] < lo[k]:
                lo[k + 1] = lo[k]
    return 0.5 * (lo_arr + hi_arr)
