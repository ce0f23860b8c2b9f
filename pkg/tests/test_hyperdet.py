import math
from fractions import Fraction

import numpy as np
import pytest

from trilab.hyperdet import BilinearWitness, bilinear_solve_222, det222, slices
from trilab.hypermatrix import Tensor3, delta_tensor, outer_product

from oracles import random_rational_tensor


def _tensor(flat):
    return Tensor3.from_flat((2, 2, 2), [Fraction(v) for v in flat])


def test_det_delta_like():
    assert det222(delta_tensor(2)) == 1


def test_det_all_ones():
    assert det222(_tensor([1] * 8)) == 0


def test_det_zero():
    assert det222(Tensor3.zeros(2, 2, 2)) == 0


def test_det_w_tensor():
    # the border-rank limit tensor: a112 = a121 = a211 = 1
    W = _tensor([0, 1, 1, 0, 1, 0, 0, 0])
    assert det222(W) == 0


def test_det_float_backend():
    assert det222(delta_tensor(2).to_float()) == pytest.approx(1.0)


def test_det_wrong_dims():
    with pytest.raises(ValueError):
        det222(Tensor3.zeros(2, 2, 3))


def test_det_degree_four_exact():
    # f(t) = det(A + tB) has degree exactly 4 in t: the 5th finite
    # difference vanishes identically, the 4th does not (generically)
    rng = np.random.default_rng(0)
    A = random_rational_tensor(rng, (2, 2, 2))
    B = random_rational_tensor(rng, (2, 2, 2))
    vals = []
    for t in range(6):
        M = Tensor3(A.data + Fraction(t) * B.data, "rational")
        vals.append(det222(M))
    d = vals
    for _ in range(5):
        d = [b - a for a, b in zip(d, d[1:])]
    assert d == [0]
    d4 = vals
    for _ in range(4):
        d4 = [b - a for a, b in zip(d4, d4[1:])]
    assert any(v != 0 for v in d4)


def test_slices_delta():
    a_k, b_j, c_i = slices(delta_tensor(2))
    assert np.array_equal(a_k[0], np.array([[1, 0], [0, 0]], dtype=object))
    assert np.array_equal(a_k[1], np.array([[0, 0], [0, 1]], dtype=object))


def test_slices_reconstruction_and_consistency():
    rng = np.random.default_rng(1)
    A = random_rational_tensor(rng, (3, 3, 3))
    a_k, b_j, c_i = slices(A)
    for i in range(3):
        for j in range(3):
            for k in range(3):
                assert a_k[k][i, j] == A[i, j, k]
                assert b_j[j][i, k] == A[i, j, k]
                assert c_i[i][j, k] == A[i, j, k]


def test_slices_require_cubical():
    with pytest.raises(ValueError):
        slices(Tensor3.zeros(2, 3, 2))


def _check_witness(T, w: BilinearWitness):
    assert w.residual < 1e-8
    for vec in (w.x, w.y, w.z):
        assert np.linalg.norm(vec) == pytest.approx(1.0, abs=1e-9)


def test_solve_rank1_has_witness():
    T = outer_product([1, 0], [1, 0], [1, 0])
    assert det222(T) == 0
    w = bilinear_solve_222(T)
    assert w is not None
    _check_witness(T, w)


def test_solve_delta_like_not_found():
    assert bilinear_solve_222(delta_tensor(2)) is None


def test_solve_zero_tensor():
    w = bilinear_solve_222(Tensor3.zeros(2, 2, 2))
    assert w is not None and w.residual == 0.0


def _pencil_quadratic(T):
    """det(A0 + s A1) coefficients (c0, c1, c2), computed from scratch."""
    a = T.data
    A0 = [[a[0, 0, 0], a[0, 0, 1]], [a[0, 1, 0], a[0, 1, 1]]]
    A1 = [[a[1, 0, 0], a[1, 0, 1]], [a[1, 1, 0], a[1, 1, 1]]]
    det = lambda M: M[0][0] * M[1][1] - M[0][1] * M[1][0]
    c0, c2 = det(A0), det(A1)
    c1 = det([[A0[r][c] + A1[r][c] for c in range(2)] for r in range(2)]) - c0 - c2
    return c0, c1, c2


def test_det_equals_pencil_discriminant():
    # the hyperdeterminant coincides with the discriminant of the slab
    # pencil's characteristic quadratic, which is why solvable tensors
    # always have a rational double root for x
    rng = np.random.default_rng(2)
    for _ in range(50):
        T = random_rational_tensor(rng, (2, 2, 2))
        c0, c1, c2 = _pencil_quadratic(T)
        assert det222(T) == c1 * c1 - 4 * c0 * c2


def test_nonsquare_discriminant_never_solvable():
    # irreducible pencil quadratics (irrational root pairs) force the
    # solver through the quadratic-extension branch, which must refuse
    rng = np.random.default_rng(3)
    checked = 0
    for _ in range(300):
        T = random_rational_tensor(rng, (2, 2, 2))
        c0, c1, c2 = _pencil_quadratic(T)
        disc = c1 * c1 - 4 * c0 * c2
        if c2 == 0 or disc == 0:
            continue
        num, den = disc.numerator, disc.denominator
        rn, rd = math.isqrt(abs(num)), math.isqrt(den)
        if disc > 0 and rn * rn == num and rd * rd == den:
            continue  # rational roots; not the branch under test
        assert det222(T) != 0
        assert bilinear_solve_222(T) is None
        checked += 1
    assert checked > 100


def test_correspondence_random_and_constructed():
    rng = np.random.default_rng(1234)
    zeros = 0
    for _ in range(200):
        T = random_rational_tensor(rng, (2, 2, 2))
        d = det222(T)
        w = bilinear_solve_222(T)
        assert (d == 0) == (w is not None)
        if w is not None:
            zeros += 1
            _check_witness(T, w)
    for T in _constructed_cases(rng):
        d = det222(T)
        w = bilinear_solve_222(T)
        assert (d == 0) == (w is not None)
        if w is not None:
            _check_witness(T, w)


def _constructed_cases(rng):
    cases = []
    while len(cases) < 10:  # rank-1 tensors (det = 0)
        vecs = [[Fraction(int(rng.integers(-2, 3))) for _ in range(2)] for _ in range(3)]
        if all(any(v) for v in vecs):
            cases.append(outer_product(*vecs))
    for t in (1, -1, 2, -3):  # proportional slabs (singular pencil)
        e = [Fraction(int(rng.integers(-3, 4))) for _ in range(4)]
        cases.append(Tensor3.from_flat((2, 2, 2), e + [Fraction(t) * v for v in e]))
    cases.append(delta_tensor(2))
    cases.append(Tensor3.zeros(2, 2, 2))
    cases.append(_tensor([0, 1, 1, 0, 1, 0, 0, 0]))  # W tensor
    cases.append(_tensor([1, 0, 0, 1, 0, 1, 1, 0]))
    cases.append(_tensor([1, 2, 3, 4, 5, 6, 7, 8]))
    cases.append(_tensor([1, 1, 1, 0, 0, 0, 0, 0]))
    assert len(cases) == 20
    return cases
