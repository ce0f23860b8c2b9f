"""Eigenpair/singular-triple residuals, spectral norm, best rank-1 fit.

The spectral norm is computed by seeded multistart alternating
maximization: fix two of the unit vectors, replace the third by its
normalized contraction, repeat.  Every restart runs in lockstep inside
one batched numpy loop, so results are reproducible for a fixed seed and
independent of execution order; the winner is the restart with the
largest objective, ties broken by the lowest restart index.

Certificates report stationarity only.  Global optimality is never
claimed, and the residual of the returned triple is the caller's signal
for non-convergence (it is reported, not raised).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hypermatrix import FLOAT, Tensor3, contract, frobenius_norm, trilinear_form

L2 = "l2"
L3 = "l3"


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    restarts: int = 64
    max_iters: int = 500
    tol: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass
class EigenPair:
    lam: float
    x: np.ndarray
    variant: str = L2


@dataclass
class SingularTriple:
    sigma: float
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    variant: str = L2


@dataclass
class SpectralCertificate:
    sigma: float
    triple: SingularTriple
    residual: float
    restarts_used: int
    objective_trace: list = field(default_factory=list, repr=False)


def _require_cubical(A: Tensor3):
    l, m, n = A.dims
    if not l == m == n:
        raise ValueError(f"cubical tensor required, got dims {A.dims}")


def eig_residual(A: Tensor3, pair: EigenPair) -> np.ndarray:
    """A(x,x,I) - lam*x (l2 variant) or A(x,x,I) - lam*x^2 (l3 variant)."""
    _require_cubical(A)
    g = contract(A, x=pair.x, y=pair.x)
    if pair.variant == L2:
        rhs = [pair.lam * xi for xi in pair.x]
    elif pair.variant == L3:
        rhs = [pair.lam * xi * xi for xi in pair.x]
    else:
        raise ValueError(f"unknown variant {pair.variant!r}")
    return np.asarray([gi - ri for gi, ri in zip(g, rhs)])


def singular_residual(A: Tensor3, triple: SingularTriple):
    """The three stationarity residuals of a candidate singular triple.

    Returns (A(u,v,I) - sigma*w, A(I,v,w) - sigma*u, A(u,I,w) - sigma*v);
    the l3 variant squares the vector on the right-hand side.
    """
    u, v, w, s = triple.u, triple.v, triple.w, triple.sigma
    gw = contract(A, x=u, y=v)
    gu = contract(A, y=v, z=w)
    gv = contract(A, x=u, z=w)
    if triple.variant == L2:
        rw, ru, rv = w, u, v
    elif triple.variant == L3:
        rw = [wi * wi for wi in w]
        ru = [ui * ui for ui in u]
        rv = [vi * vi for vi in v]
    else:
        raise ValueError(f"unknown variant {triple.variant!r}")
    res_w = np.asarray([a - s * b for a, b in zip(gw, rw)])
    res_u = np.asarray([a - s * b for a, b in zip(gu, ru)])
    res_v = np.asarray([a - s * b for a, b in zip(gv, rv)])
    return res_w, res_u, res_v


def _canonical_sign(vec: np.ndarray) -> float:
    for x in vec:
        if x != 0:
            return 1.0 if x > 0 else -1.0
    return 1.0


def _float_data(A: Tensor3) -> np.ndarray:
    if A.kind != FLOAT:
        raise TypeError("floating-point tensor required; call to_float() first")
    return A.data


def _random_units(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    m = rng.standard_normal((count, dim))
    m /= np.linalg.norm(m, axis=1, keepdims=True)
    return m


def _normalize_rows(M: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(M, axis=1, keepdims=True)
    dead = norms[:, 0] < 1e-300
    safe = np.where(dead[:, None], 1.0, norms)
    out = M / safe
    if np.any(dead):
        out[dead] = fallback[dead]
    return out


def spectral_norm(A: Tensor3, cfg: SearchConfig, warm_starts=()) -> SpectralCertificate:
    """Largest |A(u,v,w)| over unit vectors found by alternating maximization.

    ``warm_starts`` is a sequence of (u, v, w) triples tried ahead of the
    random starts; together they count toward ``cfg.restarts``.
    """
    T = _float_data(A)
    if not np.any(T):
        raise ValueError("spectral norm of the zero tensor is undefined here")
    l, m, n = T.shape
    rng = np.random.default_rng(cfg.seed)
    R = max(cfg.restarts, len(warm_starts))
    U = _random_units(rng, R, l)
    V = _random_units(rng, R, m)
    W = _random_units(rng, R, n)
    for r, (u0, v0, w0) in enumerate(warm_starts):
        U[r] = np.asarray(u0, dtype=np.float64) / np.linalg.norm(u0)
        V[r] = np.asarray(v0, dtype=np.float64) / np.linalg.norm(v0)
        W[r] = np.asarray(w0, dtype=np.float64) / np.linalg.norm(w0)

    # restarts iterate in lockstep; converged ones freeze and drop out of
    # the batch (each trajectory only depends on its own start, so the
    # result is identical to running them one at a time)
    sigma_all = np.abs(np.einsum("ijk,ri,rj,rk->r", T, U, V, W))
    U_all, V_all, W_all = U.copy(), V.copy(), W.copy()
    ids = np.arange(R)
    sig = sigma_all.copy()
    calm = np.zeros(R, dtype=int)
    trace = []
    for _ in range(cfg.max_iters):
        if len(ids) == 0:
            break
        W = _normalize_rows(np.einsum("ijk,ri,rj->rk", T, U, V), W)
        V = _normalize_rows(np.einsum("ijk,ri,rk->rj", T, U, W), V)
        U = _normalize_rows(np.einsum("ijk,rj,rk->ri", T, V, W), U)
        new = np.abs(np.einsum("ijk,ri,rj,rk->r", T, U, V, W))
        calm = np.where(np.abs(new - sig) < cfg.tol * 0.01, calm + 1, 0)
        sig = new
        sigma_all[ids] = new
        U_all[ids], V_all[ids], W_all[ids] = U, V, W
        trace.append(sigma_all.copy())
        frozen = calm >= 3
        if np.any(frozen):
            keep = ~frozen
            ids, sig, calm = ids[keep], sig[keep], calm[keep]
            U, V, W = U[keep], V[keep], W[keep]

    best = int(np.argmax(sigma_all))  # argmax takes the lowest index on ties
    u, v, w = U_all[best].copy(), V_all[best].copy(), W_all[best].copy()
    # canonicalize: u and v get a positive leading entry; w's sign is then
    # forced by the stationarity equations (sigma stays >= 0)
    su, sv = _canonical_sign(u), _canonical_sign(v)
    u *= su
    v *= sv
    w *= su * sv
    sigma = abs(float(np.einsum("ijk,i,j,k->", T, u, v, w)))
    triple = SingularTriple(sigma=sigma, u=u, v=v, w=w, variant=L2)
    res = singular_residual(A, triple)
    residual = max(float(np.max(np.abs(r))) if r.size else 0.0 for r in res)
    return SpectralCertificate(
        sigma=sigma,
        triple=triple,
        residual=residual,
        restarts_used=R,
        objective_trace=trace,
    )


@dataclass
class Rank1Approx:
    sigma: float
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    approx_error: float
    certificate: SpectralCertificate


def best_rank1(A: Tensor3, cfg: SearchConfig, warm_starts=()) -> Rank1Approx:
    """Best rank-1 approximation sigma*u (x) v (x) w via the spectral norm."""
    cert = spectral_norm(A, cfg, warm_starts=warm_starts)
    T = _float_data(A)
    u, v, w = cert.triple.u, cert.triple.v, cert.triple.w
    # the triple satisfies A(u,v,w) = +sigma by the sign canonicalization
    approx = cert.sigma * np.einsum("i,j,k->ijk", u, v, w)
    err = float(np.linalg.norm((T - approx).reshape(-1)))
    return Rank1Approx(cert.sigma, u, v, w, err, cert)


# -- small-size eigenpair search -------------------------------------------


def _eig_system(T: np.ndarray, x: np.ndarray, lam: float, variant: str):
    g = np.einsum("ijk,i,j->k", T, x, x)
    if variant == L2:
        F = np.concatenate([g - lam * x, [x @ x - 1.0]])
        dgdl = -x
    else:
        F = np.concatenate([g - lam * x * x, [x @ x - 1.0]])
        dgdl = -(x * x)
    n = len(x)
    Jx = np.einsum("pjk,j->kp", T, x) + np.einsum("ipk,i->kp", T, x)
    if variant == L3:
        Jx = Jx - 2.0 * lam * np.diag(x)
    else:
        Jx = Jx - lam * np.eye(n)
    J = np.zeros((n + 1, n + 1))
    J[:n, :n] = Jx
    J[:n, n] = dgdl
    J[n, :n] = 2.0 * x
    return F, J


def find_eigenpairs_small(A: Tensor3, variant: str, cfg: SearchConfig) -> list[EigenPair]:
    """Newton search for eigenpairs of a small cubical tensor (n <= 4).

    Every returned pair satisfies the residual equations to cfg.tol under
    the unit-norm convention; completeness is not claimed.
    """
    _require_cubical(A)
    T = _float_data(A)
    n = T.shape[0]
    if n > 4:
        raise ValueError("find_eigenpairs_small is limited to n <= 4")
    if variant not in (L2, L3):
        raise ValueError(f"unknown variant {variant!r}")
    rng = np.random.default_rng(cfg.seed)
    found: dict[tuple, EigenPair] = {}
    for _ in range(cfg.restarts):
        x = rng.standard_normal(n)
        x /= np.linalg.norm(x)
        lam = float(np.einsum("ijk,i,j,k->", T, x, x, x))
        ok = False
        for _ in range(60):
            F, J = _eig_system(T, x, lam, variant)
            if np.max(np.abs(F)) < 1e-13:
                ok = True
                break
            try:
                step = np.linalg.solve(J, -F)
            except np.linalg.LinAlgError:
                step, *_ = np.linalg.lstsq(J, -F, rcond=None)
            x = x + step[:n]
            lam = lam + step[n]
            nrm = np.linalg.norm(x)
            if nrm < 1e-12 or not np.isfinite(nrm):
                break
            x /= nrm
        if not ok:
            continue
        s = _canonical_sign(x)
        x = s * x
        if variant == L2 and s < 0:
            lam = -lam
        pair = EigenPair(lam=float(lam), x=x, variant=variant)
        if np.max(np.abs(eig_residual(A, pair))) >= cfg.tol:
            continue
        key = (round(lam, 7),) + tuple(np.round(x, 7))
        found.setdefault(key, pair)
    return sorted(found.values(), key=lambda p: (-p.lam, tuple(p.x)))


__all__ = [
    "L2",
    "L3",
    "SearchConfig",
    "EigenPair",
    "SingularTriple",
    "SpectralCertificate",
    "Rank1Approx",
    "eig_residual",
    "singular_residual",
    "spectral_norm",
    "best_rank1",
    "find_eigenpairs_small",
]
