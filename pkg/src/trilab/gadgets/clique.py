"""Clique-detecting tensors: spectral norm 1 exactly at the clique number.

For a graph G and integer ell, the tensor has third-index slices
[ell^{-1} I] * ell followed by the symmetrized edge matrices E_1..E_m
twice (the duplicated block is kept verbatim; it feeds the same
sum-of-squares that the simplex edge form maximizes).  Its spectral norm
is sqrt(1 + (omega - ell)/(ell*omega)), which crosses 1 exactly at
ell = omega(G).
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..hypermatrix import RATIONAL, Tensor3
from ..spectral import SearchConfig, spectral_norm
from .graphs import Graph, maximal_cliques


def clique_tensor(g: Graph, ell: int) -> Tensor3:
    """Exact n x n x (ell + 2m) tensor whose spectral norm tests ell against
    the clique number; edges are taken in lexicographic order."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    n, m = g.n, g.m
    T = Tensor3.zeros(n, n, ell + 2 * m, kind=RATIONAL)
    inv = Fraction(1, ell)
    half = Fraction(1, 2)
    for t in range(ell):
        for i in range(n):
            T.data[i, i, t] = inv
    for k, (i, j) in enumerate(g.edges):
        for t in (ell + k, ell + m + k):
            T.data[i, j, t] = half
            T.data[j, i, t] = half
    return T


def clique_warm_starts(g: Graph, A: Tensor3) -> list:
    """One (u, v, w) start per maximal clique: u = v = normalized clique
    indicator, w = the matching normalized contraction."""
    T = A.to_float().data
    starts = []
    for clique in maximal_cliques(g):
        u = np.zeros(g.n)
        u[clique] = 1.0 / np.sqrt(len(clique))
        w = np.einsum("ijk,i,j->k", T, u, u)
        nrm = np.linalg.norm(w)
        if nrm < 1e-300:
            continue
        starts.append((u, u.copy(), w / nrm))
    return starts


def expected_clique_sigma(omega: int, ell: int) -> float:
    """sqrt(1 + (omega - ell)/(ell*omega)), the exact spectral norm."""
    return float(np.sqrt(1.0 + (omega - ell) / (ell * omega)))


def omega_from_singular_values(g: Graph, cfg: SearchConfig | None = None) -> int:
    """Largest ell in 1..n whose clique tensor has spectral norm 1 (to 1e-6)."""
    if g.n > 10:
        raise ValueError("omega_from_singular_values is capped at 10 vertices")
    if cfg is None:
        cfg = SearchConfig(seed=0, restarts=64, max_iters=500, tol=1e-10)
    best = 0
    for ell in range(1, g.n + 1):
        A = clique_tensor(g, ell)
        cert = spectral_norm(A.to_float(), cfg, warm_starts=clique_warm_starts(g, A))
        if cert.residual >= 1e-6:
            raise RuntimeError(f"spectral search did not converge at ell={ell}")
        if abs(cert.sigma - 1.0) < 1e-6:
            best = ell
    if best == 0:
        raise RuntimeError("no ell produced singular value 1; search failed")
    return best
