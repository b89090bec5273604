"""Eigenvalues of the weighted Neumann pencil.

The default method counts eigenvalues below a shift with a Sturm (inertia)
recurrence on the element coefficients and bisects on the counts.  The pivots
are carried relative to the zero row sums of the stiffness, so small
eigenvalues keep full relative accuracy.  On circles the count goes through a
bordered path and loses accuracy at double eigenvalues; there every cluster is
polished by inverse iteration and a Rayleigh-Ritz step whose quadratic forms
are summed element by element.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as sla
import scipy.sparse.linalg as spla

from .. import _kernels
from ..errors import InvalidParameter, SolverFailure
from ..geometry import ModelSpace
from . import cache as _cache
from .assembly import ElementArrays, assemble_elements, element_upper_bound, sparse_pencil
from .mesh import Discretization

log = logging.getLogger(__name__)

SAFETY = 1.0 / 16.0
PAIR_RTOL = 1e-6
CLUSTER_RTOL = 1e-5
BISECT_RTOL = 4e-16
BISECT_MAX_ITER = 200
METHODS = ("bisection", "dense", "shift-invert")


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Sorted resolved eigenvalues with their discretization metadata.

    ``eigenvalues`` holds only the resolved part.  ``computed`` additionally
    keeps values that were solved for but lie past the resolution cut.
    """

    eigenvalues: np.ndarray
    resolved_count: int
    mesh_size: float
    space_fingerprint: str
    hausdorff_length: Optional[float] = None
    lambda_cut: float = math.inf
    computed: np.ndarray = field(default=None, repr=False)
    n_dofs: int = 0
    method: str = "synthetic"
    backend: str = ""

    def __post_init__(self):
        ev = _readonly(self.eigenvalues)
        if ev.ndim != 1:
            raise InvalidParameter("eigenvalues must be one-dimensional")
        if np.any(np.diff(ev) < 0):
            raise InvalidParameter("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", ev)
        comp = ev if self.computed is None else _readonly(self.computed)
        object.__setattr__(self, "computed", comp)
        if self.resolved_count != ev.size:
            raise InvalidParameter("resolved_count must equal the number of eigenvalues kept")

    @classmethod
    def from_eigenvalues(cls, values, hausdorff_length: Optional[float] = None,
                         fingerprint: str = "synthetic") -> "Spectrum":
        v = np.sort(np.asarray(values, dtype=float))
        return cls(eigenvalues=v, resolved_count=int(v.size), mesh_size=float("nan"),
                   space_fingerprint=fingerprint, hausdorff_length=hausdorff_length)

    @property
    def lambda_max(self) -> float:
        """Largest trusted eigenvalue."""
        return float(self.eigenvalues[-1]) if self.resolved_count else 0.0

    @property
    def weyl_constant(self) -> Optional[float]:
        if self.hausdorff_length is None:
            return None
        return self.hausdorff_length / math.pi


def _pivmin(el: ElementArrays) -> float:
    # large enough that (w e - x (2w + x)) / pivmin cannot overflow
    return 1e-290 * max(1.0, float(np.max(el.w))) ** 2


class _Counter:
    def __init__(self, el: ElementArrays, backend: str):
        self.el = el
        self.mod = _kernels.get_backend(backend)
        self.args = tuple(np.ascontiguousarray(a, dtype=np.float64) for a in (el.w, el.ma, el.mb, el.mc))
        self.pivmin = _pivmin(el)

    def counts(self, shifts) -> np.ndarray:
        s = np.ascontiguousarray(np.atleast_1d(shifts), dtype=np.float64)
        return np.asarray(self.mod.pencil_counts(*self.args, s, self.el.periodic, self.pivmin))

    def bisect(self, indices: np.ndarray, lower: float, upper: float) -> np.ndarray:
        idx = np.ascontiguousarray(indices, dtype=np.int64)
        return np.asarray(self.mod.bisect_eigenvalues(
            *self.args, idx, float(lower), float(upper), self.el.periodic,
            BISECT_RTOL, BISECT_MAX_ITER, self.pivmin))


def _clusters(vals: np.ndarray, rtol: float) -> list[tuple[int, int]]:
    groups = []
    start = 0
    for i in range(1, vals.size + 1):
        if i == vals.size or vals[i] - vals[i - 1] > rtol * abs(vals[i]):
            groups.append((start, i))
            start = i
    return groups


def _quadratic_forms(el: ElementArrays, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = el.n_dofs
    i = np.arange(el.w.size)
    j = (i + 1) % n if el.periodic else i + 1
    Vi, Vj = V[i], V[j]
    D = Vj - Vi
    Kp = (D * el.w[:, None]).T @ D
    Mp = ((Vi * el.ma[:, None]).T @ Vi + (Vi * el.mb[:, None]).T @ Vj
          + (Vj * el.mb[:, None]).T @ Vi + (Vj * el.mc[:, None]).T @ Vj)
    return 0.5 * (Kp + Kp.T), 0.5 * (Mp + Mp.T)


def _polish(el: ElementArrays, vals: np.ndarray, iterations: int = 3) -> np.ndarray:
    """Inverse iteration plus Rayleigh-Ritz on every eigenvalue cluster."""
    K, M = sparse_pencil(el)
    K = K.tocsc()
    M = M.tocsc()
    out = vals.copy()
    rng = np.random.default_rng(12345)
    scale = float(vals[1]) if vals.size > 1 and vals[1] > 0 else 1.0
    for lo, hi in _clusters(vals, CLUSTER_RTOL):
        m = hi - lo
        shift = vals[lo] - 1e-6 * max(abs(vals[hi - 1]), scale)
        try:
            lu = spla.splu((K - shift * M).tocsc())
        except RuntimeError as exc:
            raise SolverFailure(f"factorization failed near {vals[lo]:.6g}: {exc}") from exc
        V = rng.standard_normal((el.n_dofs, m))
        for _ in range(iterations):
            V = lu.solve(M @ V)
            V, _ = np.linalg.qr(V)
        Kp, Mp = _quadratic_forms(el, V)
        try:
            ritz = sla.eigh(Kp, Mp, eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise SolverFailure(f"Rayleigh-Ritz failed near {vals[lo]:.6g}: {exc}") from exc
        out[lo:hi] = ritz
    return np.sort(out)


def _bisection(el: ElementArrays, k: int, backend: str, polish: bool) -> np.ndarray:
    counter = _Counter(el, backend)
    top = element_upper_bound(el) * (1.0 + 1e-8)
    upper = top
    # tighten the bracket when only the low end is wanted
    guess = max(1.0, element_upper_bound(el) * (k / el.n_dofs) ** 2)
    while guess < top:
        if counter.counts([guess])[0] >= k:
            upper = guess
            break
        guess *= 2.0
    lower = -1e-12 * max(1.0, upper)
    if counter.counts([lower])[0] != 0:
        raise SolverFailure("negative eigenvalues detected; the pencil is not semidefinite")
    vals = counter.bisect(np.arange(k), lower, upper)
    vals = np.sort(vals)
    if el.periodic and polish and k > 1:
        vals = _polish(el, vals)
    return vals


def _dense(el: ElementArrays, k: int) -> np.ndarray:
    K, M = sparse_pencil(el)
    try:
        return sla.eigh(K.toarray(), M.toarray(), subset_by_index=[0, k - 1], eigvals_only=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SolverFailure(f"dense generalized eigensolve failed: {exc}") from exc


def _shift_invert(el: ElementArrays, k: int) -> np.ndarray:
    K, M = sparse_pencil(el)
    if k >= el.n_dofs - 1:
        return _dense(el, k)
    # a small negative shift keeps K - sigma M definite
    sigma = -1e-3 * (math.pi / float(el.lengths.sum())) ** 2
    try:
        vals = spla.eigsh(K.tocsc(), k=k, M=M.tocsc(), sigma=sigma, which="LM",
                          return_eigenvectors=False, tol=1e-14)
    except (spla.ArpackError, spla.ArpackNoConvergence, RuntimeError) as exc:
        raise SolverFailure(f"shift-invert iteration failed: {exc}") from exc
    return np.sort(vals)


def resolution_cut(mesh_size: float) -> float:
    """Largest eigenvalue trusted on a mesh: ``(1/16) (pi / h_max)^2``."""
    return SAFETY * (math.pi / mesh_size) ** 2


def _trim_pairs(vals: np.ndarray, resolved: int) -> int:
    # never keep one member of a numerical pair and drop the other
    while 0 < resolved < vals.size and vals[resolved] - vals[resolved - 1] <= PAIR_RTOL * vals[resolved]:
        resolved -= 1
    return resolved


def eigen_solve(space: ModelSpace, disc: Discretization, count_requested: Optional[int] = None,
                *, method: str = "bisection", backend: Optional[str] = None,
                use_cache: bool = True, polish: bool = True) -> Spectrum:
    """Lowest eigenvalues of ``K u = lambda M u`` and the resolved window.

    Parameters
    ----------
    count_requested : int, optional
        How many eigenvalues to compute.  Defaults to everything below the
        resolution cut plus a few beyond it.
    method : {"bisection", "dense", "shift-invert"}
    backend : {"compiled", "python"}, optional
        Kernel used by the bisection method; defaults to the import-time choice.
    """
    if method not in METHODS:
        raise InvalidParameter(f"method must be one of {METHODS}")
    if count_requested is not None and count_requested < 1:
        raise InvalidParameter("count_requested must be at least 1")
    backend = backend or _kernels.BACKEND
    el = assemble_elements(space, disc)
    h_max = el.mesh_size
    cut = resolution_cut(h_max)
    n = el.n_dofs

    if count_requested is None:
        below = int(_Counter(el, backend).counts([cut])[0])
        k = min(n, below + 8)
    else:
        k = min(n, int(count_requested) + 1)

    key = None
    cdir = _cache.cache_dir() if use_cache else None
    if cdir is not None:
        key = _cache.cache_key(space.fingerprint(), disc.key(), str(k), method, str(polish),
                               f"merged={el.merged}")
        hit = _cache.read_spectrum(cdir / f"{key}.bin")
        if hit is not None:
            vals = hit[0]
            log.debug("spectrum cache hit %s", key)
        else:
            vals = None
    else:
        vals = None

    if vals is None:
        if method == "bisection":
            vals = _bisection(el, k, backend, polish)
        elif method == "dense":
            vals = _dense(el, k)
        else:
            vals = _shift_invert(el, k)
        vals = np.maximum(np.sort(vals), 0.0)
        if not np.all(np.isfinite(vals)):
            raise SolverFailure("non-finite eigenvalues")
        if key is not None:
            _cache.write_spectrum(cdir / f"{key}.bin", vals,
                                  {"fingerprint": space.fingerprint(), "disc": disc.key(),
                                   "method": method})

    limit = k if count_requested is None else min(int(count_requested), k)
    resolved = int(np.searchsorted(vals[:limit], cut, side="right"))
    resolved = _trim_pairs(vals, resolved)
    return Spectrum(eigenvalues=vals[:resolved], resolved_count=resolved, mesh_size=h_max,
                    space_fingerprint=space.fingerprint(),
                    hausdorff_length=space.hausdorff_length, lambda_cut=cut,
                    computed=vals[:max(limit, resolved)], n_dofs=n, method=method,
                    backend=backend if method == "bisection" else "")
