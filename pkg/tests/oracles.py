"""Independent brute-force oracles used to freeze expected test values.

Everything here deliberately avoids the library's own fast paths: sums
are written as plain loops, optima come from grids or projected
gradient, so agreement with the package is a real check.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def loop_trilinear(entries, x, y, z):
    """sum_ijk a_ijk x_i y_j z_k by explicit loops (works on Fractions)."""
    l, m, n = len(entries), len(entries[0]), len(entries[0][0])
    total = 0
    for i in range(l):
        for j in range(m):
            for k in range(n):
                total += entries[i][j][k] * x[i] * y[j] * z[k]
    return total


def loop_mlmul(entries, X, Y, Z):
    """c_abc = sum_ijk a_ijk X_ia Y_jb Z_kc by explicit loops."""
    l, m, n = len(entries), len(entries[0]), len(entries[0][0])
    p, q, r = len(X[0]), len(Y[0]), len(Z[0])
    out = [[[0 for _ in range(r)] for _ in range(q)] for _ in range(p)]
    for a in range(p):
        for b in range(q):
            for c in range(r):
                acc = 0
                for i in range(l):
                    for j in range(m):
                        for k in range(n):
                            acc += entries[i][j][k] * X[i][a] * Y[j][b] * Z[k][c]
                out[a][b][c] = acc
    return out


def grid_spectral_norm_222(T: np.ndarray, steps: int = 72, polish: int = 200) -> float:
    """Dense angular grid over three unit circles, then alternating polish."""
    assert T.shape == (2, 2, 2)
    angles = np.linspace(0.0, np.pi, steps, endpoint=False)
    vecs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    M = np.einsum("ijk,ai->ajk", T, vecs)
    M2 = np.einsum("ajk,bj->abk", M, vecs)
    vals = np.abs(np.einsum("abk,ck->abc", M2, vecs))
    flat = int(np.argmax(vals))
    ia, ib, ic = np.unravel_index(flat, vals.shape)
    u, v, w = vecs[ia].copy(), vecs[ib].copy(), vecs[ic].copy()
    for _ in range(polish):
        w_new = np.einsum("ijk,i,j->k", T, u, v)
        if np.linalg.norm(w_new) > 1e-300:
            w = w_new / np.linalg.norm(w_new)
        v_new = np.einsum("ijk,i,k->j", T, u, w)
        if np.linalg.norm(v_new) > 1e-300:
            v = v_new / np.linalg.norm(v_new)
        u_new = np.einsum("ijk,j,k->i", T, v, w)
        if np.linalg.norm(u_new) > 1e-300:
            u = u_new / np.linalg.norm(u_new)
    return float(abs(np.einsum("ijk,i,j,k->", T, u, v, w)))


def central_difference_gradient(f, x: np.ndarray, h: float = 1e-5) -> np.ndarray:
    g = np.zeros_like(x, dtype=np.float64)
    for k in range(len(x)):
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        g[k] = (f(xp) - f(xm)) / (2.0 * h)
    return g


def clique_number_bruteforce(n: int, edges) -> int:
    """Largest clique by checking every vertex subset."""
    edge_set = {(min(i, j), max(i, j)) for i, j in edges}
    best = 1
    for size in range(2, n + 1):
        for subset in itertools.combinations(range(n), size):
            if all((a, b) in edge_set for a, b in itertools.combinations(subset, 2)):
                best = size
                break
    return best


def projected_gradient_edge_form(adjacency: np.ndarray, seed: int = 0,
                                 iters: int = 4000, restarts: int = 20) -> float:
    """max over the probability simplex of sum_{ij in E} x_i x_j."""
    n = adjacency.shape[0]
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(restarts):
        x = rng.random(n)
        x /= x.sum()
        step = 0.5
        for _ in range(iters):
            grad = adjacency @ x
            x = _project_simplex(x + step * grad)
        best = max(best, 0.5 * float(x @ adjacency @ x))
    return best


def _project_simplex(v: np.ndarray) -> np.ndarray:
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, len(v) + 1) > css)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def random_rational_tensor(rng: np.random.Generator, dims, lo=-4, hi=4):
    """Random small-integer entries as Fractions (exact)."""
    from trilab.hypermatrix import Tensor3

    l, m, n = dims
    entries = [Fraction(int(rng.integers(lo, hi + 1))) for _ in range(l * m * n)]
    return Tensor3.from_flat(dims, entries, "rational")


def random_float_tensor(rng: np.random.Generator, dims):
    from trilab.hypermatrix import Tensor3

    l, m, n = dims
    return Tensor3.from_flat(dims, rng.standard_normal(l * m * n).tolist(), "float")
