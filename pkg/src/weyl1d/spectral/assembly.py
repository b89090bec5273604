"""Element-wise assembly of the weighted Neumann pencil ``(K, M)``.

``K_ij = int phi_i' phi_j' h dx`` and ``M_ij = int phi_i phi_j h dx`` for hat
functions ``phi``.  Per element the stiffness is ``w [[1, -1], [-1, 1]]`` with
``w = int h dx / len^2`` and the mass is ``[[ma, mb], [mb, mc]]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import SingularMass
from ..geometry import ModelSpace
from ..quadrature import gauss_legendre
from .mesh import MIN_NODES, Discretization

UNDERFLOW_FRACTION = 1e-30


@dataclass(frozen=True)
class ElementArrays:
    nodes: np.ndarray
    lengths: np.ndarray
    w: np.ndarray
    ma: np.ndarray
    mb: np.ndarray
    mc: np.ndarray
    periodic: bool
    merged: int

    @property
    def n_dofs(self) -> int:
        return self.nodes.size

    @property
    def element_mass(self) -> np.ndarray:
        return self.ma + 2.0 * self.mb + self.mc

    @property
    def mesh_size(self) -> float:
        return float(self.lengths.max())


def _integrate(space: ModelSpace, left: np.ndarray, lengths: np.ndarray, order: int):
    """Gauss rule on every element, split at density kinks so each piece is smooth."""
    s, wt = gauss_legendre(order)
    L = space.period
    right = left + lengths
    bps = space.breakpoints()
    if bps.size:
        cuts = np.unique(np.concatenate([left, right, bps]))
        cuts = cuts[(cuts >= left[0]) & (cuts <= right[-1])]
        a, b = cuts[:-1], cuts[1:]
        owner = np.clip(np.searchsorted(left, a, side="right") - 1, 0, left.size - 1)
    else:
        a, b, owner = left, right, np.arange(left.size)
    pts = a[:, None] + (b - a)[:, None] * s
    if not space.is_circle:
        pts = np.clip(pts, 0.0, L)
    H = space.h(pts)
    if np.any(~np.isfinite(H)):
        raise SingularMass("density is not finite at a quadrature point")
    # local coordinate of each quadrature point inside its element
    loc = (pts - left[owner][:, None]) / lengths[owner][:, None]
    Hw = H * wt * (b - a)[:, None]
    n = left.size
    total = np.bincount(owner, Hw.sum(axis=1), minlength=n)
    ma = np.bincount(owner, (Hw * (1.0 - loc) ** 2).sum(axis=1), minlength=n)
    mb = np.bincount(owner, (Hw * loc * (1.0 - loc)).sum(axis=1), minlength=n)
    mc = np.bincount(owner, (Hw * loc * loc).sum(axis=1), minlength=n)
    return total / (lengths * lengths), ma, mb, mc


def _merge_underflow(nodes: np.ndarray, lengths: np.ndarray, mass: np.ndarray, periodic: bool):
    """Drop nodes so that no element carries less than ``1e-30`` of the total mass."""
    total = mass.sum()
    tiny = np.nonzero(mass < UNDERFLOW_FRACTION * total)[0]
    if tiny.size == 0:
        return nodes, 0
    n_el = lengths.size
    drop = set()
    for e in tiny:
        # remove the node shared with the heavier neighbour
        if periodic:
            left_mass = mass[(e - 1) % n_el]
            right_mass = mass[(e + 1) % n_el]
            node = e if left_mass >= right_mass else (e + 1) % n_el
        else:
            if e == 0:
                node = 1
            elif e == n_el - 1:
                node = n_el - 1
            else:
                node = e if mass[e - 1] >= mass[e + 1] else e + 1
        drop.add(int(node))
    keep = np.ones(nodes.size, dtype=bool)
    keep[sorted(drop)] = False
    return nodes[keep], len(drop)


def assemble_elements(space: ModelSpace, disc: Discretization) -> ElementArrays:
    """Element coefficients ``w, ma, mb, mc`` for the pencil."""
    disc.check_space(space)
    L = space.period
    periodic = space.is_circle
    nodes = disc.mesh.copy()
    merged = 0
    for _ in range(64):
        lengths = np.diff(np.append(nodes, L)) if periodic else np.diff(nodes)
        w, ma, mb, mc = _integrate(space, nodes[:lengths.size], lengths, disc.quadrature_order)
        mass = ma + 2.0 * mb + mc
        if np.any(~(mass > 0)):
            e = int(np.argmin(mass))
            raise SingularMass(f"element {e} carries zero measure; refine or merge the mesh")
        new_nodes, dropped = _merge_underflow(nodes, lengths, mass, periodic)
        if dropped == 0:
            break
        nodes = new_nodes
        merged += dropped
        if nodes.size < MIN_NODES:
            raise SingularMass("merging zero-measure elements left too few nodes")
    return ElementArrays(nodes=nodes, lengths=lengths, w=w, ma=ma, mb=mb, mc=mc,
                         periodic=periodic, merged=merged)


def sparse_pencil(el: ElementArrays) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    n = el.n_dofs
    n_el = el.w.size
    i = np.arange(n_el)
    j = (i + 1) % n if el.periodic else i + 1
    rows = np.concatenate([i, i, j, j])
    cols = np.concatenate([i, j, i, j])
    kv = np.concatenate([el.w, -el.w, -el.w, el.w])
    mv = np.concatenate([el.ma, el.mb, el.mb, el.mc])
    K = sp.coo_matrix((kv, (rows, cols)), shape=(n, n)).tocsr()
    M = sp.coo_matrix((mv, (rows, cols)), shape=(n, n)).tocsr()
    return K, M


def assemble(space: ModelSpace, disc: Discretization) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    """Sparse stiffness and mass matrices for ``space`` on ``disc``."""
    return sparse_pencil(assemble_elements(space, disc))


def element_upper_bound(el: ElementArrays) -> float:
    """Largest eigenvalue bound: max over elements of the 2x2 pencil's top eigenvalue."""
    det = el.ma * el.mc - el.mb * el.mb
    lam = el.w * (el.ma + el.mc + 2.0 * el.mb) / det
    return float(np.max(lam))
