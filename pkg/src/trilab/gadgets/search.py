"""Numeric feasibility oracle for quadratic and trilinear systems.

Seeded multistart: every restart minimizes the sum of squared residuals
with a damped Gauss-Newton iteration; the trivial solution is excluded
by pinning each homogeneous block with a random affine chart
c^T x_b = 1 (sphere projection would shrink the Newton basins badly).
Success is judged on the block-normalized iterate, which is exact to
compute from the raw residuals because every equation family is
homogeneous of known degree in each block.

Restarts are processed in index order in fixed-size batches; inside a
batch all trajectories iterate in lockstep but are mutually
independent, so the outcome for a fixed seed does not depend on
execution order.  The winner is the succeeding restart with the lowest
index, exactly as if the restarts had run one at a time.

A ``None`` result is *not* a proof of infeasibility -- the oracle is
sound but incomplete.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..spectral import SearchConfig
from .systems import QuadraticSystem, TrilinearSystem

_STALL_LIMIT = 8
_BATCH = 1024


@dataclass
class Witness:
    vectors: tuple
    residual: float
    restart: int

    @property
    def x(self):
        if len(self.vectors) != 1:
            raise AttributeError("x is only defined for single-vector witnesses")
        return self.vectors[0]


def _normalize_blocks(X: np.ndarray, blocks) -> np.ndarray:
    for lo, hi in blocks:
        nrm = np.linalg.norm(X[:, lo:hi], axis=1, keepdims=True)
        nrm[nrm < 1e-300] = 1.0
        X[:, lo:hi] /= nrm
    return X


def _block_norms(X: np.ndarray, blocks) -> np.ndarray:
    return np.stack(
        [np.maximum(np.linalg.norm(X[:, lo:hi], axis=1), 1e-300) for lo, hi in blocks],
        axis=1,
    )


def _lm_batch(res_jac_fn, scale_fn, blocks, dim, cfg: SearchConfig,
              starts: np.ndarray, charts: np.ndarray, ids: np.ndarray):
    """Damped Gauss-Newton on one batch; returns (ids, X) of successes."""
    X = starts
    lam = np.full(len(ids), 1e-3)
    eye = np.eye(dim)

    def with_charts(Xc, charts_c):
        res, J = res_jac_fn(Xc)
        chart_res = np.einsum("rbi,ri->rb", charts_c, Xc) - 1.0
        return (
            np.concatenate([res, chart_res], axis=1),
            np.concatenate([J, charts_c], axis=1),
            res,
        )

    def normalized_hit(raw_res, Xc):
        # residual of the block-normalized iterate, computed by scaling
        scales = scale_fn(_block_norms(Xc, blocks))
        return np.max(np.abs(raw_res) / scales, axis=1) < cfg.tol

    res, J, raw = with_charts(X, charts)
    done = normalized_hit(raw, X)
    success_ids: list[int] = []
    success_X: list[np.ndarray] = []
    if np.any(done):
        success_ids.extend(ids[done].tolist())
        success_X.extend(X[done])
        keep = ~done
        ids, X, res, J, lam, charts = (
            ids[keep], X[keep], res[keep], J[keep], lam[keep], charts[keep])
    cost = np.einsum("re,re->r", res, res)
    stall = np.zeros(len(ids), dtype=int)
    for _ in range(cfg.max_iters):
        if len(ids) == 0:
            break
        Jt = J.transpose(0, 2, 1)
        G = Jt @ J
        g = (Jt @ res[..., None])[..., 0]
        step = -np.linalg.solve(G + lam[:, None, None] * eye, g[..., None])[..., 0]
        Xn = X + step
        res_n, J_n, raw_n = with_charts(Xn, charts)
        cost_n = np.einsum("re,re->r", res_n, res_n)
        better = cost_n < cost
        X = np.where(better[:, None], Xn, X)
        res = np.where(better[:, None], res_n, res)
        J = np.where(better[:, None, None], J_n, J)
        stall = np.where(better & (cost - cost_n > 1e-8 * cost), 0, stall + 1)
        cost = np.where(better, cost_n, cost)
        lam = np.where(better, np.maximum(lam * 0.3, 1e-12), np.minimum(lam * 5.0, 1e8))
        hit = normalized_hit(res[:, : raw_n.shape[1]], X)
        finished = hit | (stall > _STALL_LIMIT)
        if np.any(hit):
            success_ids.extend(ids[hit].tolist())
            success_X.extend(X[hit])
            # only lower-indexed restarts can still beat the best success
            finished = finished | (ids > min(success_ids))
        if np.any(finished):
            keep = ~finished
            ids, X, res, J, cost = ids[keep], X[keep], res[keep], J[keep], cost[keep]
            stall, lam, charts = stall[keep], lam[keep], charts[keep]
    return success_ids, success_X


def _lm_search(res_jac_fn, scale_fn, blocks, dim, cfg: SearchConfig):
    rng = np.random.default_rng(cfg.seed)
    R = cfg.restarts
    all_starts = _normalize_blocks(rng.standard_normal((R, dim)), blocks)
    all_charts = np.zeros((R, len(blocks), dim))
    for b, (lo, hi) in enumerate(blocks):
        c = rng.standard_normal((R, hi - lo))
        all_charts[:, b, lo:hi] = c / np.linalg.norm(c, axis=1, keepdims=True)
    for lo_idx in range(0, R, _BATCH):
        hi_idx = min(lo_idx + _BATCH, R)
        ids = np.arange(lo_idx, hi_idx)
        wins, xs = _lm_batch(
            res_jac_fn, scale_fn, blocks, dim, cfg,
            all_starts[lo_idx:hi_idx].copy(), all_charts[lo_idx:hi_idx].copy(), ids,
        )
        if wins:
            best = int(np.argmin(wins))
            x = _normalize_blocks(xs[best][None, :].copy(), blocks)[0]
            res, _ = res_jac_fn(x[None, :])
            residual = float(np.max(np.abs(res))) if res.shape[1] else 0.0
            return x, residual, int(wins[best])
    return None


def feasibility_search(system, cfg: SearchConfig) -> Witness | None:
    """Search for a nontrivial solution with unit-norm factors.

    Returns a :class:`Witness` whose residual max-norm is below
    ``cfg.tol``, or ``None`` when no restart succeeded (which proves
    nothing).
    """
    if isinstance(system, QuadraticSystem):
        return _search_quadratic(system, cfg)
    if isinstance(system, TrilinearSystem):
        return _search_trilinear(system, cfg)
    raise TypeError(f"unsupported system type {type(system).__name__}")


def _search_quadratic(qs: QuadraticSystem, cfg: SearchConfig) -> Witness | None:
    E = qs.float_stack()
    n = qs.dim
    if E.shape[0] == 0:
        x = np.zeros(n)
        x[0] = 1.0
        return Witness((x,), 0.0, 0)

    def res_jac(X):
        # T1[r,e,j] = sum_i x_i E[e,i,j]; with symmetric E the jacobian is
        # 2*T1 and the residual is sum_j T1 * x
        T1 = np.tensordot(X, E, axes=([1], [1]))
        res = np.einsum("rej,rj->re", T1, X)
        return res, 2.0 * T1

    def scale(norms):
        return np.repeat(norms[:, 0:1] ** 2, E.shape[0], axis=1)

    hit = _lm_search(res_jac, scale, [(0, n)], n, cfg)
    if hit is None:
        return None
    x, res, r = hit
    return Witness((x,), res, r)


def _search_trilinear(ts: TrilinearSystem, cfg: SearchConfig) -> Witness | None:
    l, m, n = ts.dims
    A, B, C = ts.float_stacks()
    blocks = [(0, l), (l, l + m), (l + m, l + m + n)]
    dim = l + m + n
    na, nb, nc = A.shape[0], B.shape[0], C.shape[0]
    if na + nb + nc == 0:
        x = np.zeros(dim)
        for lo, _ in blocks:
            x[lo] = 1.0
        return Witness((x[:l], x[l : l + m], x[l + m :]), 0.0, 0)

    def res_jac(X):
        U, V, W = X[:, :l], X[:, l : l + m], X[:, l + m :]
        R = X.shape[0]
        res = np.empty((R, na + nb + nc))
        J = np.zeros((R, na + nb + nc, dim))
        if na:
            dv = np.tensordot(W, A, axes=([1], [2]))  # (R, na, m)
            dw = np.tensordot(V, A, axes=([1], [1]))  # (R, na, n)
            res[:, :na] = np.einsum("rej,rj->re", dv, V)
            J[:, :na, l : l + m] = dv
            J[:, :na, l + m :] = dw
        if nb:
            du = np.tensordot(W, B, axes=([1], [2]))  # (R, nb, l)
            dw = np.tensordot(U, B, axes=([1], [1]))  # (R, nb, n)
            res[:, na : na + nb] = np.einsum("rei,ri->re", du, U)
            J[:, na : na + nb, :l] = du
            J[:, na : na + nb, l + m :] = dw
        if nc:
            du = np.tensordot(V, C, axes=([1], [2]))  # (R, nc, l)
            dv = np.tensordot(U, C, axes=([1], [1]))  # (R, nc, m)
            res[:, na + nb :] = np.einsum("rei,ri->re", du, U)
            J[:, na + nb :, :l] = du
            J[:, na + nb :, l : l + m] = dv
        return res, J

    def scale(norms):
        parts = []
        if na:
            parts.append(np.repeat((norms[:, 1] * norms[:, 2])[:, None], na, axis=1))
        if nb:
            parts.append(np.repeat((norms[:, 0] * norms[:, 2])[:, None], nb, axis=1))
        if nc:
            parts.append(np.repeat((norms[:, 0] * norms[:, 1])[:, None], nc, axis=1))
        return np.concatenate(parts, axis=1)

    hit = _lm_search(res_jac, scale, blocks, dim, cfg)
    if hit is None:
        return None
    x, res, r = hit
    return Witness((x[:l], x[l : l + m], x[l + m :]), res, r)
