"""Quadratic and trilinear feasibility systems and the 3-coloring encoding.

All constructions here are exact (Fraction entries).  The numeric search
over these systems lives in :mod:`trilab.gadgets.search`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..hypermatrix import RATIONAL, Tensor3, as_rational
from .graphs import Graph

EDGE_FORM_MINORS = "minors"
EDGE_FORM_AGGREGATED = "aggregated"


def _rational_matrix(rows) -> np.ndarray:
    arr = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            arr[i, j] = as_rational(e)
    return arr


def _zeros(n: int, m: int | None = None) -> np.ndarray:
    m = n if m is None else m
    arr = np.empty((n, m), dtype=object)
    arr[...] = Fraction(0)
    return arr


@dataclass(frozen=True)
class QuadraticSystem:
    """Homogeneous quadratics x^T A_i x = 0 given by symmetric matrices."""

    dim: int
    matrices: tuple

    def __post_init__(self):
        for idx, M in enumerate(self.matrices):
            if M.shape != (self.dim, self.dim):
                raise ValueError(f"matrix {idx} has shape {M.shape}, expected {(self.dim,) * 2}")
            for i in range(self.dim):
                for j in range(i + 1, self.dim):
                    if M[i, j] != M[j, i]:
                        raise ValueError(f"matrix {idx} is not symmetric at ({i},{j})")

    @property
    def num_equations(self) -> int:
        return len(self.matrices)

    def float_stack(self) -> np.ndarray:
        return np.array([M.astype(np.float64) for M in self.matrices])

    def residuals(self, x) -> list:
        xv = list(x)
        out = []
        for M in self.matrices:
            acc = 0
            for i in range(self.dim):
                if xv[i] == 0:
                    continue
                acc += xv[i] * sum(M[i, j] * xv[j] for j in range(self.dim) if xv[j] != 0)
            out.append(acc)
        return out

    def to_tensor(self) -> Tensor3:
        """Stack the equation matrices into a (num_eqs, n, n) tensor."""
        arr = np.empty((self.num_equations, self.dim, self.dim), dtype=object)
        for e, M in enumerate(self.matrices):
            arr[e] = M
        return Tensor3(arr, RATIONAL)

    @classmethod
    def from_tensor(cls, T: Tensor3) -> "QuadraticSystem":
        if T.kind != RATIONAL:
            raise TypeError("quadratic systems are exact; rational tensor required")
        e, n, n2 = T.dims
        if n != n2:
            raise ValueError(f"slices must be square, got dims {T.dims}")
        return cls(n, tuple(T.data[i].copy() for i in range(e)))


@dataclass(frozen=True)
class TrilinearSystem:
    """Equations v^T A_i w = 0, u^T B_j w = 0, u^T C_k v = 0.

    ``dims = (l, m, n)`` are the lengths of (u, v, w).  When the system
    comes from a tensor the slice counts match the dims
    (A_i(j,k) = B_j(i,k) = C_k(i,j) = a_ijk); the decision-tree recursion
    also builds systems whose A-slice count exceeds ``l``, which is why
    the counts are not hard-wired to the dims.
    """

    dims: tuple[int, int, int]
    a_slices: tuple  # each m x n
    b_slices: tuple  # each l x n
    c_slices: tuple  # each l x m

    def __post_init__(self):
        l, m, n = self.dims
        for name, slices, shape in (
            ("A", self.a_slices, (m, n)),
            ("B", self.b_slices, (l, n)),
            ("C", self.c_slices, (l, m)),
        ):
            for idx, M in enumerate(slices):
                if M.shape != shape:
                    raise ValueError(f"{name}-slice {idx} has shape {M.shape}, expected {shape}")

    @classmethod
    def from_tensor(cls, T: Tensor3) -> "TrilinearSystem":
        l, m, n = T.dims
        a = tuple(T.data[i, :, :].copy() for i in range(l))
        b = tuple(T.data[:, j, :].copy() for j in range(m))
        c = tuple(T.data[:, :, k].copy() for k in range(n))
        return cls((l, m, n), a, b, c)

    def float_stacks(self):
        l, m, n = self.dims

        def stack(slices, shape):
            if not slices:
                return np.zeros((0,) + shape)
            return np.array([M.astype(np.float64) for M in slices])

        return (
            stack(self.a_slices, (m, n)),
            stack(self.b_slices, (l, n)),
            stack(self.c_slices, (l, m)),
        )

    def residuals(self, u, v, w):
        """The three residual families in float (or complex) arithmetic."""
        u, v, w = np.asarray(u), np.asarray(v), np.asarray(w)
        A, B, C = self.float_stacks()
        ra = np.einsum("ejk,j,k->e", A, v, w)
        rb = np.einsum("eik,i,k->e", B, u, w)
        rc = np.einsum("eij,i,j->e", C, u, v)
        return ra, rb, rc


@dataclass(frozen=True)
class ComplexVector:
    re: np.ndarray
    im: np.ndarray

    def as_complex(self) -> np.ndarray:
        return self.re + 1j * self.im

    def split(self) -> np.ndarray:
        """Real vector (re; im) of twice the length."""
        return np.concatenate([self.re, self.im])

    def is_nonzero(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.re)) > tol or np.max(np.abs(self.im)) > tol)


# -- color encoding ------------------------------------------------------------
#
# Variables are ordered (x_1..x_n, y_1..y_n, z); vertex i contributes the
# three cube-root quadratics x_i y_i - z^2, y_i z - x_i^2, x_i z - y_i^2,
# and each edge {i,j} contributes x_i^2 + x_i x_j + x_j^2 (per edge in the
# "minors" form, aggregated per vertex in the "aggregated" form).

HALF = Fraction(1, 2)


def _vertex_quadratics(n: int, i: int) -> list[np.ndarray]:
    z = 2 * n
    xi, yi = i, n + i
    m1 = _zeros(2 * n + 1)
    m1[xi, yi] = m1[yi, xi] = HALF
    m1[z, z] = Fraction(-1)
    m2 = _zeros(2 * n + 1)
    m2[yi, z] = m2[z, yi] = HALF
    m2[xi, xi] = Fraction(-1)
    m3 = _zeros(2 * n + 1)
    m3[xi, z] = m3[z, xi] = HALF
    m3[yi, yi] = Fraction(-1)
    return [m1, m2, m3]


def _edge_quadratic(n: int, i: int, j: int) -> np.ndarray:
    M = _zeros(2 * n + 1)
    M[i, i] = Fraction(1)
    M[j, j] = Fraction(1)
    M[i, j] = M[j, i] = HALF
    return M


def color_encode(g: Graph, edge_form: str = EDGE_FORM_MINORS) -> QuadraticSystem:
    """The homogeneous quadratic system over (x, y, z) whose nonzero
    complex solutions are exactly the proper 3-colorings of ``g``.

    ``minors`` emits one quadratic per edge (3n + |E| equations);
    ``aggregated`` sums each vertex's edge terms into one quadratic
    (4n equations)."""
    n = g.n
    mats: list[np.ndarray] = []
    for i in range(n):
        mats.extend(_vertex_quadratics(n, i))
    if edge_form == EDGE_FORM_MINORS:
        for i, j in g.edges:
            mats.append(_edge_quadratic(n, i, j))
    elif edge_form == EDGE_FORM_AGGREGATED:
        for i in range(n):
            M = _zeros(2 * n + 1)
            for j in g.neighbors(i):
                M = M + _edge_quadratic(n, i, j)
            mats.append(M)
    else:
        raise ValueError(f"unknown edge_form {edge_form!r}")
    return QuadraticSystem(2 * n + 1, tuple(mats))


OMEGA = cmath.exp(2j * cmath.pi / 3)


def lift_coloring(g: Graph, coloring) -> ComplexVector:
    """Lift a proper 3-coloring (vertex -> {0,1,2}) to a complex witness
    (x, 1/x, 1) of the color encoding.  Improper colorings are rejected."""
    colors = [coloring[v] for v in range(g.n)]
    if any(c not in (0, 1, 2) for c in colors):
        raise ValueError("colors must be 0, 1, or 2 (exponents of the cube root of unity)")
    for i, j in g.edges:
        if colors[i] == colors[j]:
            raise ValueError(f"improper coloring: edge ({i},{j}) has equal colors")
    x = [OMEGA**c for c in colors]
    y = [OMEGA ** (-c) for c in colors]
    vec = np.array(x + y + [1.0 + 0.0j])
    return ComplexVector(vec.real.copy(), vec.imag.copy())


def quadratic_residuals_complex(qs: QuadraticSystem, zvec: np.ndarray) -> np.ndarray:
    stack = qs.float_stack()
    return np.einsum("eij,i,j->e", stack.astype(complex), zvec, zvec)


# -- complexification and padding ---------------------------------------------


def complexify_system(qs: QuadraticSystem) -> QuadraticSystem:
    """Real 2n-variable system whose nontrivial real solutions correspond
    one-to-one (via z = p + iq -> (p; q)) to nontrivial complex solutions."""
    n = qs.dim
    out = []
    for A in qs.matrices:
        real_part = _zeros(2 * n)
        real_part[:n, :n] = A
        real_part[n:, n:] = -A
        imag_part = _zeros(2 * n)
        imag_part[:n, n:] = A
        imag_part[n:, :n] = A
        out.append(real_part)
        out.append(imag_part)
    return QuadraticSystem(2 * n, tuple(out))


def pad_system(qs: QuadraticSystem, r: int, s: int) -> QuadraticSystem:
    """Pad to r >= m+1 equations in s >= n variables, preserving real
    feasibility exactly: original matrices are zero-extended, zero
    equations fill the middle, and the last equation is the identity on
    the added variables (which pins them to zero over the reals)."""
    m, n = qs.num_equations, qs.dim
    if r < m + 1:
        raise ValueError(f"r must be at least m+1 = {m + 1}, got {r}")
    if s < n:
        raise ValueError(f"s must be at least n = {n}, got {s}")
    out = []
    for A in qs.matrices:
        M = _zeros(s)
        M[:n, :n] = A
        out.append(M)
    for _ in range(m, r - 1):
        out.append(_zeros(s))
    last = _zeros(s)
    for t in range(n, s):
        last[t, t] = Fraction(1)
    out.append(last)
    return QuadraticSystem(s, tuple(out))


def threecolor_qf_pipeline(g: Graph) -> QuadraticSystem:
    """Square real quadratic system feasible iff ``g`` is 3-colorable.

    The color encoding is complexified first and then padded to a square
    shape over the reals.  Padding before complexification would let the
    dummy variables absorb a complex isotropic vector (sum of squares has
    nontrivial complex zeros), breaking the "only if" direction, so the
    real padding comes last.
    """
    complexified = complexify_system(color_encode(g))
    size = max(complexified.num_equations + 1, complexified.dim)
    return pad_system(complexified, size, size)
