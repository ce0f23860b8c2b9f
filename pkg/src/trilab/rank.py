"""Tensor rank evidence: flattening bounds, ALS fits, border-rank family,
and the rational-versus-real rank demonstration.

Flattening ranks are exact (fraction-free Bareiss elimination on the
three unfoldings) and lower-bound the rank.  ALS residuals are evidence
for upper bounds only: the infimum may be unattained, in which case the
factors diverge; a configurable norm cap (default 1e3) keeps that
divergence observable but finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .hypermatrix import FLOAT, RATIONAL, Tensor3, frobenius_norm_sq, outer_product
from .spectral import SearchConfig


@dataclass(frozen=True)
class RankBounds:
    lower: int
    upper: int | None
    certified: bool


# -- exact flattening ranks ----------------------------------------------------


def unfold(A: Tensor3, mode: int) -> np.ndarray:
    """Matrix unfolding: rows indexed by ``mode``, columns by the rest."""
    l, m, n = A.dims
    if mode == 0:
        return A.data.reshape(l, m * n)
    if mode == 1:
        return np.moveaxis(A.data, 1, 0).reshape(m, l * n)
    if mode == 2:
        return np.moveaxis(A.data, 2, 0).reshape(n, l * m)
    raise ValueError("mode must be 0, 1, or 2")


def exact_rank(M: np.ndarray) -> int:
    """Rank of a matrix of Fractions/ints by Bareiss elimination."""
    rows = [[Fraction(e) for e in row] for row in M]
    nr = len(rows)
    if nr == 0:
        return 0
    nc = len(rows[0])
    # clear denominators row by row; scaling rows keeps the rank
    work: list[list[int]] = []
    for row in rows:
        den = 1
        for e in row:
            den = den * e.denominator // math.gcd(den, e.denominator)
        work.append([int(e * den) for e in row])
    rank = 0
    prev = 1
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if work[i][c] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(r + 1, nr):
            for j in range(c + 1, nc):
                work[i][j] = (work[i][j] * work[r][c] - work[i][c] * work[r][j]) // prev
            work[i][c] = 0
        prev = work[r][c]
        r += 1
        rank += 1
        if r == nr:
            break
    return rank


def flattening_ranks(A: Tensor3) -> tuple[int, int, int]:
    """Exact ranks of the three unfoldings (each lower-bounds the rank)."""
    if A.kind != RATIONAL:
        raise TypeError("flattening ranks are exact; rational tensor required")
    return tuple(exact_rank(unfold(A, mode)) for mode in range(3))


# -- alternating least squares --------------------------------------------------


@dataclass
class AlsFit:
    residual: float
    weights: np.ndarray
    factors: tuple[np.ndarray, np.ndarray, np.ndarray]
    trace: list = field(default_factory=list, repr=False)


def _khatri_rao(B: np.ndarray, C: np.ndarray) -> np.ndarray:
    r = B.shape[1]
    return (B[:, None, :] * C[None, :, :]).reshape(-1, r)


def _renorm(F: np.ndarray):
    norms = np.linalg.norm(F, axis=0)
    norms[norms < 1e-300] = 1.0
    return F / norms, norms


def _als_single(T: np.ndarray, r: int, start, max_iters: int, tol: float,
                factor_cap: float):
    """One ALS run; factors iterate unnormalized, the *reported* state is
    renormalized with the weights clipped at the cap."""
    X, Y, Z = (F.copy() for F in start)
    l, m, n = T.shape
    unf1 = T.reshape(l, m * n)
    unf2 = np.moveaxis(T, 1, 0).reshape(m, l * n)
    unf3 = np.moveaxis(T, 2, 0).reshape(n, l * m)
    eye = 1e-14 * np.eye(r)

    def solve_mode(unf, kr_left, kr_right):
        G = (kr_left.T @ kr_left) * (kr_right.T @ kr_right)
        R = unf @ _khatri_rao(kr_left, kr_right)
        try:
            return np.linalg.solve(G + eye, R.T).T
        except np.linalg.LinAlgError:
            return np.linalg.lstsq(G, R.T, rcond=None)[0].T

    best = np.inf
    best_state = None
    trace = []
    prev = np.inf
    for _ in range(max_iters):
        X = solve_mode(unf1, Y, Z)
        Y = solve_mode(unf2, X, Z)
        Z = solve_mode(unf3, X, Y)
        Xu, nx = _renorm(X)
        Yu, ny = _renorm(Y)
        Zu, nz = _renorm(Z)
        lam = np.minimum(nx * ny * nz, factor_cap)
        res = float(np.linalg.norm((T - np.einsum("a,ia,ja,ka->ijk", lam, Xu, Yu, Zu)).reshape(-1)))
        if res < best:
            best = res
            best_state = (lam, Xu, Yu, Zu)
        trace.append(best)
        if best < tol or abs(prev - res) < 1e-16 * (1.0 + best):
            break
        prev = res
    return best, best_state, trace


_COLLINEAR_EPS = (0.3, 0.1, 0.03, 0.01, 0.003, 0.001)


def _svd_collinear_starts(T: np.ndarray, r: int) -> list:
    """Deterministic starts from the unfolding singular vectors.

    Columns are the leading left singular vector plus a small multiple of
    the next ones; nearly-collinear columns are where the diverging
    decompositions of border-rank tensors live, which plain random starts
    approach only at a crawl.
    """
    l, m, n = T.shape
    us = [
        np.linalg.svd(T.reshape(l, m * n))[0],
        np.linalg.svd(np.moveaxis(T, 1, 0).reshape(m, l * n))[0],
        np.linalg.svd(np.moveaxis(T, 2, 0).reshape(n, l * m))[0],
    ]
    if r == 1:
        return [tuple(U[:, :1].copy() for U in us)]
    starts = []
    for eps in _COLLINEAR_EPS:
        factors = []
        for U in us:
            cols = [U[:, 0]]
            for a in range(1, r):
                cols.append(U[:, 0] + eps * U[:, a % U.shape[1]])
            factors.append(np.stack(cols, axis=1))
        starts.append(tuple(factors))
    return starts


def als_fit(A: Tensor3, r: int, cfg: SearchConfig, factor_cap: float = 1e3,
            return_details: bool = False):
    """Best Frobenius residual of a rank-r fit over seeded restarts.

    Restarts are the deterministic collinear SVD ladder followed by
    random starts, cfg.restarts in total.  The reported residual is the
    running best of the cap-clipped state, so it is monotone
    non-increasing across iterations even when the factor cap bites.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    T = A.to_float().data
    if not np.any(T):
        zero = AlsFit(0.0, np.zeros(r), tuple(np.zeros((d, r)) for d in T.shape), [0.0])
        return zero if return_details else 0.0
    rng = np.random.default_rng(cfg.seed)
    starts = _svd_collinear_starts(T, r)[: cfg.restarts]
    while len(starts) < cfg.restarts:
        starts.append(tuple(rng.standard_normal((d, r)) for d in T.shape))
    best = np.inf
    best_state = None
    best_trace: list = []
    for start in starts:
        res, state, trace = _als_single(T, r, start, cfg.max_iters, cfg.tol, factor_cap)
        if res < best:
            best, best_state, best_trace = res, state, trace
        if best < cfg.tol:
            break
    lam, X, Y, Z = best_state
    fit = AlsFit(best, lam, (X, Y, Z), best_trace)
    return fit if return_details else fit.residual


def rank_bounds(A: Tensor3, cfg: SearchConfig, r_max: int | None = None,
                fit_tol: float = 1e-8) -> RankBounds:
    """Lower bound from flattenings, upper bound from the first ALS fit
    whose residual drops below ``fit_tol``."""
    lower = max(flattening_ranks(A))
    if lower == 0:
        return RankBounds(0, 0, True)
    l, m, n = A.dims
    if r_max is None:
        r_max = min(l * m, m * n, l * n)
    upper = None
    for r in range(lower, r_max + 1):
        if als_fit(A, r, cfg) < fit_tol:
            upper = r
            break
    return RankBounds(lower, upper, certified=(upper == lower))


# -- border-rank family ----------------------------------------------------------


@dataclass(frozen=True)
class BorderRankInstance:
    A: Tensor3
    A_n: Tensor3
    n: int


def _basis_x() -> list:
    return [Fraction(1), Fraction(0)]


def _basis_y() -> list:
    return [Fraction(0), Fraction(1)]


def border_rank_family(n: int) -> BorderRankInstance:
    """The rank-3 limit tensor A and its rank-2 neighbours A_n with
    ||A_n - A||_F = 1/n exactly."""
    if n < 1:
        raise ValueError("n must be >= 1")
    x, y = _basis_x(), _basis_y()
    A = (
        outer_product(x, x, y)
        + outer_product(x, y, x)
        + outer_product(y, x, x)
    )
    inv = Fraction(1, n)
    xs = [x[0] + inv * y[0], x[1] + inv * y[1]]
    z_head = [y[0] - n * x[0], y[1] - n * x[1]]
    z_tail = [n * x[0], n * x[1]]
    A_n = outer_product(x, x, z_head) + outer_product(xs, xs, z_tail)
    diff = A_n - A
    expected = outer_product(y, y, x).scale(inv)
    if diff != expected:
        raise AssertionError("family identity A_n - A = (1/n) y*y*x failed")
    return BorderRankInstance(A, A_n, n)


# -- rational vs real rank -------------------------------------------------------

SQRT2 = float(np.sqrt(2.0))


def rational_rank_tensor() -> Tensor3:
    """The 2x2x2 tensor 2 x*x*x - 4 y*y*x + 4 y*x*y - 4 x*y*y (1-based
    entries a_111 = 2, a_221 = -4, a_212 = 4, a_122 = -4)."""
    x, y = _basis_x(), _basis_y()
    return (
        outer_product(x, x, x).scale(2)
        + outer_product(y, y, x).scale(-4)
        + outer_product(y, x, y).scale(4)
        + outer_product(x, y, y).scale(-4)
    )


def real_rank2_identity_residual() -> float:
    """Max abs error of conj(z) * z * conj(z) + z * conj(z) * z against the
    tensor above, where z = x + sqrt(2) y and conj flips the sign."""
    z = np.array([1.0, SQRT2])
    zbar = np.array([1.0, -SQRT2])
    approx = np.einsum("i,j,k->ijk", zbar, z, zbar) + np.einsum("i,j,k->ijk", z, zbar, z)
    target = rational_rank_tensor().to_float().data
    return float(np.max(np.abs(approx - target)))


# The eight trilinear equations for a rank-2 decomposition
# u1*u2*u3 + v1*v2*v3 of the tensor with entries (in flat 0-based order
# 111,112,121,122,211,212,221,222): 2,0,0,4,0,4,4,0 -- the symmetric
# sign variant whose certificate polynomials are 2c1^2 - d1^2 and
# c1 d2 d3 - 2.
_RHS = np.array([2.0, 0.0, 0.0, 4.0, 0.0, 4.0, 4.0, 0.0])


def rank2_equation_residuals(vars12: np.ndarray) -> np.ndarray:
    a1, a2, a3, b1, b2, b3, c1, c2, c3, d1, d2, d3 = vars12
    u1, u2, u3 = (a1, b1), (a2, b2), (a3, b3)
    v1, v2, v3 = (c1, d1), (c2, d2), (c3, d3)
    out = np.empty(8)
    pos = 0
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out[pos] = u1[i] * u2[j] * u3[k] + v1[i] * v2[j] * v3[k]
                pos += 1
    # flat order above is (i,j,k) with k fastest; RHS entries follow the
    # same order: (111,112,121,122,211,212,221,222)
    return out - _RHS


def _rank2_jacobian(p: np.ndarray) -> np.ndarray:
    a1, a2, a3, b1, b2, b3, c1, c2, c3, d1, d2, d3 = p
    u = [(a1, b1), (a2, b2), (a3, b3)]
    v = [(c1, d1), (c2, d2), (c3, d3)]
    J = np.zeros((8, 12))
    pos = 0
    for i in range(2):
        for j in range(2):
            for k in range(2):
                J[pos, [0, 3][i]] = u[1][j] * u[2][k]   # a1 or b1
                J[pos, [1, 4][j]] = u[0][i] * u[2][k]   # a2 or b2
                J[pos, [2, 5][k]] = u[0][i] * u[1][j]   # a3 or b3
                J[pos, [6, 9][i]] = v[1][j] * v[2][k]   # c1 or d1
                J[pos, [7, 10][j]] = v[0][i] * v[2][k]  # c2 or d2
                J[pos, [8, 11][k]] = v[0][i] * v[1][j]  # c3 or d3
                pos += 1
    return J


def solve_rank2_equations(seed: int, max_iters: int = 200) -> np.ndarray | None:
    """One seeded Levenberg-Marquardt run on the eight equations; returns
    the 12-vector solution when the residual max-norm drops below 1e-10."""
    rng = np.random.default_rng(seed)
    p = rng.standard_normal(12) * 1.2
    lam = 1e-3
    res = rank2_equation_residuals(p)
    cost = float(res @ res)
    for _ in range(max_iters):
        J = _rank2_jacobian(p)
        G = J.T @ J + lam * np.eye(12)
        g = J.T @ res
        try:
            step = -np.linalg.solve(G, g)
        except np.linalg.LinAlgError:
            break
        p_new = p + step
        res_new = rank2_equation_residuals(p_new)
        cost_new = float(res_new @ res_new)
        if cost_new < cost:
            p, res, cost = p_new, res_new, cost_new
            lam = max(lam * 0.3, 1e-13)
        else:
            lam = min(lam * 5.0, 1e9)
        if np.max(np.abs(res)) < 1e-11:
            return p
    return p if np.max(np.abs(res)) < 1e-10 else None


def certificate_residuals(p: np.ndarray) -> tuple[float, float]:
    """|d1^2 - 2 c1^2| and |c1 d2 d3 - 2| at a candidate solution."""
    c1, d1, d2, d3 = p[6], p[9], p[10], p[11]
    return abs(d1 * d1 - 2.0 * c1 * c1), abs(c1 * d2 * d3 - 2.0)


# -- bounded-height rational search ---------------------------------------------


def _height_fractions(height: int) -> list[Fraction]:
    out = {Fraction(0)}
    for num in range(-height, height + 1):
        for den in range(1, height + 1):
            out.add(Fraction(num, den))
    return sorted(out)


def _directions(height: int) -> list[tuple[Fraction, Fraction]]:
    dirs = [(Fraction(1), t) for t in _height_fractions(height)]
    dirs.append((Fraction(0), Fraction(1)))
    return dirs


def _is_exact_rank_le_1(D: np.ndarray) -> bool:
    """All 2x2 minors of all unfoldings of a 2x2x2 Fraction array vanish."""
    for mode in range(3):
        M = np.moveaxis(D, mode, 0).reshape(2, 4)
        for a in range(4):
            for b in range(a + 1, 4):
                if M[0, a] * M[1, b] - M[0, b] * M[1, a] != 0:
                    return False
    return True


def rational_grid_rank2_search(height: int = 2) -> dict:
    """Exhaustive search for an exact rational rank-2 decomposition whose
    first factor directions have bounded height.

    For each direction triple (u1, u2, u3) the scale lambda must make
    B - lambda u1*u2*u3 rank <= 1; that condition is a set of quadratics
    in lambda solved exactly, so a miss is a proof for this grid (not a
    proof of rational rank > 2 in general -- evidence only).
    """
    B = np.empty((2, 2, 2), dtype=object)
    flat = [Fraction(v) for v in (2, 0, 0, 4, 0, 4, 4, 0)]
    B.reshape(-1)[:] = flat
    B = B.reshape(2, 2, 2)
    dirs = _directions(height)
    tried = 0
    for u1 in dirs:
        for u2 in dirs:
            for u3 in dirs:
                tried += 1
                lam_candidates = _lambda_candidates(B, u1, u2, u3)
                for lam in lam_candidates:
                    if lam == 0:
                        continue
                    D = B - _rank1(u1, u2, u3, lam)
                    if _is_exact_rank_le_1(D):
                        return {"tried": tried, "found": (u1, u2, u3, lam)}
    return {"tried": tried, "found": None}


def _rank1(u1, u2, u3, lam) -> np.ndarray:
    out = np.empty((2, 2, 2), dtype=object)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out[i, j, k] = lam * u1[i] * u2[j] * u3[k]
    return out


def _lambda_candidates(B, u1, u2, u3) -> list[Fraction]:
    """Rational roots of the 2x2-minor conditions on B - lam * u1*u2*u3.

    Each unfolding minor of the difference is a quadratic alpha lam^2 +
    beta lam + gamma with rational coefficients; collect rational roots
    of the first non-identically-zero one (a necessary condition).
    """
    T = _rank1(u1, u2, u3, Fraction(1))
    for mode in range(3):
        MB = np.moveaxis(B, mode, 0).reshape(2, 4)
        MT = np.moveaxis(T, mode, 0).reshape(2, 4)
        for a in range(4):
            for b in range(a + 1, 4):
                alpha = MT[0, a] * MT[1, b] - MT[0, b] * MT[1, a]
                beta = -(
                    MB[0, a] * MT[1, b]
                    + MT[0, a] * MB[1, b]
                    - MB[0, b] * MT[1, a]
                    - MT[0, b] * MB[1, a]
                )
                gamma = MB[0, a] * MB[1, b] - MB[0, b] * MB[1, a]
                if alpha == 0 and beta == 0 and gamma == 0:
                    continue
                return _rational_quadratic_roots(alpha, beta, gamma)
    return []


def _rational_quadratic_roots(alpha: Fraction, beta: Fraction, gamma: Fraction) -> list[Fraction]:
    if alpha == 0:
        if beta == 0:
            return []
        return [-gamma / beta]
    disc = beta * beta - 4 * alpha * gamma
    if disc < 0:
        return []
    num, den = disc.numerator, disc.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return []
    sq = Fraction(rn, rd)
    return [(-beta + sq) / (2 * alpha), (-beta - sq) / (2 * alpha)]


# -- the full demonstration -------------------------------------------------------


@dataclass
class RationalRankReport:
    identity_residual: float
    runs: int
    solutions_found: int
    max_cert1: float
    max_cert2: float
    all_certified: bool
    flattening_lower: int
    grid_tried: int
    grid_found: bool


def rational_rank_demo(seed: int = 0, runs: int = 100, grid_height: int = 2) -> RationalRankReport:
    """Numeric and exact evidence that the rank-2 identity needs sqrt(2).

    (a) the tensor entries are fixed by construction; (b) the real rank-2
    identity is verified numerically; (c) every numeric solution of the
    rank-2 equations satisfies both certificate polynomials, which force
    c1 = d1 = 0 over the rationals (contradicting c1 d2 d3 = 2); (d) an
    exhaustive bounded-height rational grid finds no exact decomposition.
    Items (c)/(d) are desk-scale evidence, not a proof.
    """
    ident = real_rank2_identity_residual()
    found = 0
    mc1 = mc2 = 0.0
    for i in range(runs):
        sol = solve_rank2_equations(seed + i)
        if sol is None:
            continue
        found += 1
        c1, c2 = certificate_residuals(sol)
        mc1, mc2 = max(mc1, c1), max(mc2, c2)
    lower = max(flattening_ranks(rational_rank_tensor()))
    grid = rational_grid_rank2_search(grid_height)
    return RationalRankReport(
        identity_residual=ident,
        runs=runs,
        solutions_found=found,
        max_cert1=mc1,
        max_cert2=mc2,
        all_certified=(found > 0 and mc1 < 1e-8 and mc2 < 1e-8),
        flattening_lower=lower,
        grid_tried=grid["tried"],
        grid_found=grid["found"] is not None,
    )
