"""Counting function and heat trace of a resolved spectrum."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from scipy.special import erfc

from ..errors import BeyondResolvedRange, InvalidParameter, UnresolvedTail
from .solver import Spectrum

TAIL_RTOL = 1e-6


def counting_function(spec: Spectrum, lam):
    """``N(lambda) = #{i : lambda_i <= lambda}``, zero mode included."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr < 0) or np.any(np.isnan(lam_arr)):
        raise InvalidParameter("lambda must be nonnegative")
    if np.any(lam_arr > spec.lambda_max):
        raise BeyondResolvedRange(
            f"lambda exceeds the last resolved eigenvalue {spec.lambda_max:.6g}")
    out = np.searchsorted(spec.eigenvalues, lam_arr, side="right")
    return int(out) if out.ndim == 0 else out


def _weyl_constant(spec: Spectrum) -> float:
    c = spec.weyl_constant
    if c is not None:
        return c
    # no geometry attached: read the constant off the top of the spectrum
    lam = spec.lambda_max
    return spec.resolved_count / math.sqrt(lam) if lam > 0 else 0.0


def weyl_tail(spec: Spectrum, t, constant: Optional[float] = None):
    """Weyl-law estimate of ``sum_{lambda_i > lambda_max} exp(-lambda_i t)``.

    The density of states ``c / (2 sqrt(s))`` integrated from ``lambda_max``
    gives ``c sqrt(pi / t) erfc(sqrt(t lambda_max)) / 2``.
    """
    c = _weyl_constant(spec) if constant is None else constant
    t = np.asarray(t, dtype=float)
    return 0.5 * c * np.sqrt(np.pi / t) * erfc(np.sqrt(t * spec.lambda_max))


def heat_trace(spec: Spectrum, t, tail_model: bool = False):
    """``Z(t) = sum_i exp(-lambda_i t)`` over the resolved eigenvalues.

    Raises
    ------
    UnresolvedTail
        The estimated unresolved contribution exceeds ``1e-6`` of the sum and
        ``tail_model`` is off.
    """
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~(t_arr > 0)):
        raise InvalidParameter("t must be positive")
    ev = spec.eigenvalues
    # fixed summation order: largest terms last keeps the result reproducible
    z = np.array([math.fsum(np.exp(-ev * ti)) for ti in t_arr])
    tail = weyl_tail(spec, t_arr)
    if not tail_model:
        bad = tail > TAIL_RTOL * z
        if np.any(bad):
            t_bad = float(t_arr[np.argmax(bad)])
            raise UnresolvedTail(
                f"unresolved eigenvalues contribute more than {TAIL_RTOL:g} at t={t_bad:.4g}; "
                "enable the tail model or refine the mesh")
        out = z
    else:
        out = z + tail
    return float(out[0]) if np.ndim(t) == 0 else out
