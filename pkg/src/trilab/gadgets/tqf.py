"""Tensor quadratic feasibility gadget: 3-colorability as a TQF instance.

For a graph with k vertices the tensor has shape k(2k+5) x (2k+1) x (2k+1)
with integer entries.  Writing v = (x, y, t) and w for a second copy of
the same variables, the first-index slices are, in order:

* k(2k+1) minor slices E_ab - E_ba over all index pairs a < b (they force
  v and w to be proportional),
* 3k cube-root slices, one triple per vertex: x_i t ... using the
  bilinear forms x_i y_i - t^2, y_i t - x_i^2, x_i t - y_i^2 written with
  v on the left and w on the right so entries stay integral,
* k aggregated edge slices sum_{j ~ i} (x_i^2 + x_i x_j + x_j^2).

A nonzero complex solution (u, v, w) exists iff the graph is
3-colorable; complexification doubles every dimension and turns the
question into a real one.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..hypermatrix import RATIONAL, Tensor3
from .graphs import Graph
from .systems import ComplexVector, TrilinearSystem, lift_coloring


def _entry(dim, positions) -> np.ndarray:
    M = np.empty((dim, dim), dtype=object)
    M[...] = Fraction(0)
    for (a, b), val in positions:
        M[a, b] = Fraction(val)
    return M


def tqf_tensor(g: Graph) -> Tensor3:
    """Integer tensor of shape (k(2k+5), 2k+1, 2k+1) encoding 3-colorability."""
    k = g.n
    dim = 2 * k + 1
    t = 2 * k  # index of the homogenizing variable
    slices = []
    for a in range(dim):
        for b in range(a + 1, dim):
            slices.append(_entry(dim, [((a, b), 1), ((b, a), -1)]))
    for i in range(k):
        xi, yi = i, k + i
        slices.append(_entry(dim, [((xi, yi), 1), ((t, t), -1)]))   # x_i y_i - z^2
        slices.append(_entry(dim, [((yi, t), 1), ((xi, xi), -1)]))  # y_i z - x_i^2
        slices.append(_entry(dim, [((xi, t), 1), ((yi, yi), -1)]))  # x_i z - y_i^2
    for i in range(k):
        M = _entry(dim, [])
        for j in g.neighbors(i):
            M[i, i] += 1
            M[i, j] += 1
            M[j, j] += 1
        slices.append(M)
    assert len(slices) == k * (2 * k + 5)
    arr = np.empty((len(slices), dim, dim), dtype=object)
    for idx, M in enumerate(slices):
        arr[idx] = M
    return Tensor3(arr, RATIONAL)


def tqf_witness(g: Graph, coloring) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Complex witness (u, v, w) of the TQF system for a proper coloring.

    v = w = (x, 1/x, 1) with x the cube-root colors; u is any nonzero
    solution of the 4k+2 homogeneous linear equations u^T B_j w = 0,
    u^T C_k v = 0, which always exist because the first dimension
    k(2k+5) exceeds 4k+2.
    """
    lifted: ComplexVector = lift_coloring(g, coloring)
    v = lifted.as_complex()
    w = v.copy()
    A = tqf_tensor(g)
    ts = TrilinearSystem.from_tensor(A)
    _, B, C = ts.float_stacks()
    rows = [B[j].astype(complex) @ w for j in range(B.shape[0])]
    rows += [C[k2].astype(complex) @ v for k2 in range(C.shape[0])]
    K = np.array(rows)  # (4k+2, l); u must satisfy K @ u = 0
    _, s, vh = np.linalg.svd(K)
    u = vh[-1].conj()
    return u, v, w


def tqf_residuals(A: Tensor3, u, v, w):
    """Residual triple of Eq-system v^T A_i w, u^T B_j w, u^T C_k v."""
    T = A.to_float().data
    ra = np.einsum("ijk,j,k->i", T, np.asarray(v), np.asarray(w))
    rb = np.einsum("ijk,i,k->j", T, np.asarray(u), np.asarray(w))
    rc = np.einsum("ijk,i,j->k", T, np.asarray(u), np.asarray(v))
    return ra, rb, rc


def tensor_complexify(A: Tensor3) -> Tensor3:
    """Doubled real tensor whose real TQF feasibility equals the complex
    TQF feasibility of ``A``: slices B_i = [A_i 0; 0 -A_i],
    B_{l+i} = [0 A_i; A_i 0]."""
    l, m, n = A.dims
    if A.kind == RATIONAL:
        out = Tensor3.zeros(2 * l, 2 * m, 2 * n, kind=RATIONAL)
    else:
        out = Tensor3.zeros(2 * l, 2 * m, 2 * n, kind=A.kind)
    D = A.data
    out.data[:l, :m, :n] = D
    out.data[:l, m:, n:] = -D
    out.data[l:, :m, n:] = D
    out.data[l:, m:, :n] = D
    return out


def split_complex_witness(u, v, w):
    """Map a complex TQF witness of A to a real witness of the doubled
    tensor.  The first factor carries a conjugate flip: the doubled
    slices encode Re/Im of conj(u)^T B_j w, so u maps to (Re u; -Im u)
    while v, w map to (Re; Im)."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return (
        np.concatenate([u.real, -u.imag]),
        np.concatenate([v.real, v.imag]),
        np.concatenate([w.real, w.imag]),
    )
