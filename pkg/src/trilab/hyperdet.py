"""Cayley's 2x2x2 hyperdeterminant and the matching bilinear system.

Subscripts in this module follow the classical 0-based convention
a_000..a_111.  ``det222`` evaluates the degree-4 polynomial

    1/4 [det(M0 + M1) - det(M0 - M1)]^2 - 4 det(M0) det(M1)

with M0, M1 the two first-index slabs.  ``bilinear_solve_222`` decides,
by exact case analysis over the projective line of x-candidates, whether
the six bilinear equations

    A(x, y, I) = 0,  A(x, I, z) = 0,  A(I, y, z) = 0

have a complex solution with x, y, z all nonzero, and returns a numeric
witness when one exists.  A solution forces M(x) = x0 A0 + x1 A1 to be
singular, so candidates are the roots of the binary quadratic
q(x) = det M(x); irrational root pairs are handled exactly in the
quadratic extension Q[s]/(q).  The decision is kept independent of
``det222`` so their agreement is a meaningful check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .hypermatrix import FLOAT, Tensor3


def _exact_entries(A: Tensor3) -> np.ndarray:
    if A.dims != (2, 2, 2):
        raise ValueError(f"2x2x2 tensor required, got dims {A.dims}")
    if A.kind == FLOAT:
        out = np.empty((2, 2, 2), dtype=object)
        for idx in np.ndindex(2, 2, 2):
            out[idx] = Fraction(float(A.data[idx]))
        return out
    return A.data


def _det2(M) -> Fraction:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def det222(A: Tensor3):
    """Cayley's hyperdeterminant, exact; float in, float out."""
    a = _exact_entries(A)
    m0 = [[a[0, 0, 0], a[0, 1, 0]], [a[0, 0, 1], a[0, 1, 1]]]
    m1 = [[a[1, 0, 0], a[1, 1, 0]], [a[1, 0, 1], a[1, 1, 1]]]
    plus = [[m0[r][c] + m1[r][c] for c in range(2)] for r in range(2)]
    minus = [[m0[r][c] - m1[r][c] for c in range(2)] for r in range(2)]
    val = Fraction(1, 4) * (_det2(plus) - _det2(minus)) ** 2 - 4 * _det2(m0) * _det2(m1)
    return float(val) if A.kind == FLOAT else val


def slices(A: Tensor3):
    """Slice families of a cubical tensor: A_k[i,j] = B_j[i,k] = C_i[j,k] = a_ijk."""
    l, m, n = A.dims
    if not l == m == n:
        raise ValueError(f"cubical tensor required, got dims {A.dims}")
    a_k = [A.data[:, :, k].copy() for k in range(n)]
    b_j = [A.data[:, j, :].copy() for j in range(m)]
    c_i = [A.data[i, :, :].copy() for i in range(l)]
    return a_k, b_j, c_i


@dataclass
class BilinearWitness:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    residual: float


def _residual_at(a, x, y, z) -> float:
    T = np.empty((2, 2, 2), dtype=complex)
    for idx in np.ndindex(2, 2, 2):
        T[idx] = complex(a[idx])
    r1 = np.einsum("ijk,i,j->k", T, x, y)
    r2 = np.einsum("ijk,i,k->j", T, x, z)
    r3 = np.einsum("ijk,j,k->i", T, y, z)
    return float(max(np.max(np.abs(r)) for r in (r1, r2, r3)))


def _make_witness(a, x, y, z) -> BilinearWitness:
    x, y, z = (np.asarray(t, dtype=complex) for t in (x, y, z))
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    z = z / np.linalg.norm(z)
    return BilinearWitness(x, y, z, _residual_at(a, x, y, z))


def _perp(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _free_yz(A0, A1):
    """Nonzero (y, z) with y^T A_i z = 0 for both i; exists over C always.

    z must be orthogonal to A_0^T y and A_1^T y, so y is a projective root
    of the quadratic det[A_0^T y | A_1^T y].
    """

    def hdet(yv):
        y = np.array(yv, dtype=object)
        c0v, c1v = A0.T @ y, A1.T @ y
        return c0v[0] * c1v[1] - c0v[1] * c1v[0]

    p0 = hdet([1, 0])
    p2 = hdet([0, 1])
    p1 = hdet([1, 1]) - p0 - p2
    cands: list[np.ndarray] = []
    if p2 != 0:
        for r in np.roots([float(p2), float(p1), float(p0)]):
            cands.append(np.array([1.0, complex(r)]))
    elif p1 != 0:
        cands.append(np.array([1.0, -float(p0) / float(p1)], dtype=complex))
        cands.append(np.array([0.0, 1.0], dtype=complex))
    else:
        # quadratic degenerate: y = (0,1) if p0 != 0, otherwise any y works
        cands.append(np.array([0.0, 1.0], dtype=complex))
        if p0 == 0:
            cands.append(np.array([1.0, 0.0], dtype=complex))
            cands.append(np.array([1.0, 1.0], dtype=complex))
    A0c = np.asarray(A0, dtype=np.float64)
    A1c = np.asarray(A1, dtype=np.float64)
    for y in cands:
        g0 = A0c.T @ y
        g1 = A1c.T @ y
        g = g0 if np.max(np.abs(g0)) >= np.max(np.abs(g1)) else g1
        z = _perp(g) if np.max(np.abs(g)) > 1e-12 else np.array([1.0, 0.0])
        if abs(y @ A0c @ z) < 1e-8 and abs(y @ A1c @ z) < 1e-8:
            return y, z
    raise RuntimeError("unreachable: the y-quadratic always has a complex root")


def _kernels_rational(M):
    """Exact (left-kernel, right-kernel) vectors of a singular 2x2 M."""
    m00, m01, m10, m11 = M[0, 0], M[0, 1], M[1, 0], M[1, 1]
    if m00 == 0 and m01 == 0 and m10 == 0 and m11 == 0:
        return None  # rank 0: kernels are everything
    z = (m01, -m00) if not (m01 == 0 and m00 == 0) else (m11, -m10)
    y = (m10, -m00) if not (m10 == 0 and m00 == 0) else (m11, -m01)
    return np.array(y, dtype=object), np.array(z, dtype=object)


def _check_rational_root(a, A0, A1, x) -> BilinearWitness | None:
    M = x[0] * A0 + x[1] * A1
    kers = _kernels_rational(M)
    if kers is None:
        y, z = _free_yz(A0, A1)
        return _make_witness(a, x, y, z)
    y, z = kers
    if (y @ A0 @ z) == 0 and (y @ A1 @ z) == 0:
        return _make_witness(a, x, y, z)
    return None


class _QuadField:
    """Q[s]/(s^2 + b s + c) with elements (p, q) meaning p + q s."""

    def __init__(self, b: Fraction, c: Fraction):
        self.b, self.c = b, c

    def of(self, r) -> tuple:
        return (Fraction(r), Fraction(0))

    def add(self, u, v):
        return (u[0] + v[0], u[1] + v[1])

    def mul(self, u, v):
        p, q = u
        r, t = v
        return (p * r - self.c * q * t, p * t + q * r - self.b * q * t)

    def neg(self, u):
        return (-u[0], -u[1])

    def is_zero(self, u) -> bool:
        return u[0] == 0 and u[1] == 0


def _check_irrational_pair(a, A0, A1, c0, c1, c2) -> BilinearWitness | None:
    """Conjugate roots of c2 s^2 + c1 s + c0, irreducible over Q."""
    b, c = c1 / c2, c0 / c2
    F = _QuadField(b, c)
    s = (Fraction(0), Fraction(1))
    M = [
        [F.add(F.of(A0[r, col]), F.mul(F.of(A1[r, col]), s)) for col in range(2)]
        for r in range(2)
    ]
    m00, m01, m10, m11 = M[0][0], M[0][1], M[1][0], M[1][1]
    zc = (m01, F.neg(m00))
    if F.is_zero(zc[0]) and F.is_zero(zc[1]):
        zc = (m11, F.neg(m10))
    yc = (m10, F.neg(m00))
    if F.is_zero(yc[0]) and F.is_zero(yc[1]):
        yc = (m11, F.neg(m01))

    def bilinear(yv, Amat, zv):
        acc = F.of(0)
        for r in range(2):
            for col in range(2):
                acc = F.add(acc, F.mul(yv[r], F.mul(F.of(Amat[r, col]), zv[col])))
        return acc

    if not (F.is_zero(bilinear(yc, A0, zc)) and F.is_zero(bilinear(yc, A1, zc))):
        return None
    disc = complex(b) ** 2 - 4.0 * complex(c)
    s_num = (-complex(b) + np.sqrt(disc)) / 2.0
    ev = lambda el: complex(el[0]) + complex(el[1]) * s_num
    x = np.array([1.0, s_num])
    y = np.array([ev(yc[0]), ev(yc[1])])
    z = np.array([ev(zc[0]), ev(zc[1])])
    return _make_witness(a, x, y, z)


def bilinear_solve_222(A: Tensor3) -> BilinearWitness | None:
    """Nontrivial solution of the six bilinear equations over C, or None.

    The found/not-found decision is exact; the witness itself is numeric
    with unit factors.
    """
    a = _exact_entries(A)
    if all(a[idx] == 0 for idx in np.ndindex(2, 2, 2)):
        e = np.array([1.0, 0.0])
        return _make_witness(a, e, e, e)
    # first-index slabs acting on (y, z): A_i[j,k] = a_ijk
    A0 = np.array([[a[0, 0, 0], a[0, 0, 1]], [a[0, 1, 0], a[0, 1, 1]]], dtype=object)
    A1 = np.array([[a[1, 0, 0], a[1, 0, 1]], [a[1, 1, 0], a[1, 1, 1]]], dtype=object)
    c0 = _det2(A0)
    c2 = _det2(A1)
    c1 = _det2(A0 + A1) - c0 - c2

    if c0 == 0 and c1 == 0 and c2 == 0:
        # everywhere-singular pencil: a solution always exists, and the
        # sample point x = (1,0) (falling back to rank-0 handling) finds it
        for x in ([1, 0], [0, 1], [1, 1], [1, -1]):
            hit = _check_rational_root(a, A0, A1, np.array([Fraction(t) for t in x], dtype=object))
            if hit is not None:
                return hit
        raise RuntimeError("unreachable: singular pencils always admit a solution")

    roots: list[np.ndarray] = []
    if c2 == 0:
        roots.append(np.array([Fraction(0), Fraction(1)], dtype=object))
        if c1 != 0:
            roots.append(np.array([Fraction(1), -c0 / c1], dtype=object))
    else:
        disc = c1 * c1 - 4 * c0 * c2
        sq = _fraction_sqrt_signed(disc)
        if sq is None:
            return _check_irrational_pair(a, A0, A1, c0, c1, c2)
        for sgn in (1, -1):
            roots.append(np.array([Fraction(1), (-c1 + sgn * sq) / (2 * c2)], dtype=object))
    seen = set()
    for x in roots:
        key = (x[0], x[1])
        if key in seen:
            continue
        seen.add(key)
        hit = _check_rational_root(a, A0, A1, x)
        if hit is not None:
            return hit
    return None


def _fraction_sqrt_signed(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None
