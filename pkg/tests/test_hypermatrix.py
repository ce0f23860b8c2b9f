import math
from fractions import Fraction

import numpy as np
import pytest

from trilab.hypermatrix import (
    FLOAT,
    RATIONAL,
    DimensionMismatch,
    Tensor3,
    TensorFormatError,
    contract,
    delta_tensor,
    frobenius_norm,
    frobenius_norm_sq,
    is_symmetric,
    mlmul,
    outer_product,
    symmetrize,
    tensor_from_json,
    tensor_to_json,
    trilinear_form,
)

from oracles import (
    central_difference_gradient,
    loop_mlmul,
    loop_trilinear,
    random_float_tensor,
    random_rational_tensor,
)


def test_outer_product_unit_basis():
    T = outer_product([1, 0], [1, 0], [1, 0])
    assert T.kind == RATIONAL
    assert T[0, 0, 0] == 1
    assert sum(1 for e in T.flat_entries() if e != 0) == 1


def test_outer_product_direct():
    T = outer_product([1, 2], [1, 0], [1, 0])
    assert T[0, 0, 0] == 1
    assert T[1, 0, 0] == 2
    assert sum(1 for e in T.flat_entries() if e != 0) == 2


def test_outer_product_unit_norm():
    rng = np.random.default_rng(7)
    for _ in range(5):
        x, y, z = (rng.standard_normal(k) for k in (2, 3, 4))
        x, y, z = x / np.linalg.norm(x), y / np.linalg.norm(y), z / np.linalg.norm(z)
        T = outer_product(x, y, z)
        assert T.kind == FLOAT
        assert frobenius_norm(T) == pytest.approx(1.0, abs=1e-12)


def test_norm_product_rule():
    rng = np.random.default_rng(8)
    x, y, z = rng.standard_normal(3), rng.standard_normal(2), rng.standard_normal(4)
    T = outer_product(x, y, z)
    expected = np.linalg.norm(x) * np.linalg.norm(y) * np.linalg.norm(z)
    assert frobenius_norm(T) == pytest.approx(expected, rel=1e-12)


def test_mlmul_identity():
    rng = np.random.default_rng(0)
    A = random_rational_tensor(rng, (2, 3, 2))
    eye = lambda k: [[1 if i == j else 0 for j in range(k)] for i in range(k)]
    assert mlmul(A, eye(2), eye(3), eye(2)) == A


def test_mlmul_delta_hand_case():
    # multiplying the delta tensor by the unipotent [[1,1],[0,1]] on all
    # three sides fills the cube with ones except a 2 in the last corner
    A = delta_tensor(2)
    U = [[1, 1], [0, 1]]
    C = mlmul(A, U, U, U)
    expected = loop_mlmul(
        [[[A[i, j, k] for k in range(2)] for j in range(2)] for i in range(2)], U, U, U
    )
    for i in range(2):
        for j in range(2):
            for k in range(2):
                assert C[i, j, k] == expected[i][j][k]
                assert C[i, j, k] == (2 if (i, j, k) == (1, 1, 1) else 1)


def test_mlmul_composition_exact():
    rng = np.random.default_rng(1)
    for _ in range(5):
        A = random_rational_tensor(rng, (2, 2, 2))
        mats = [
            [[Fraction(int(rng.integers(-3, 4))) for _ in range(2)] for _ in range(2)]
            for _ in range(6)
        ]
        X, Y, Z, X2, Y2, Z2 = mats
        left = mlmul(mlmul(A, X, Y, Z), X2, Y2, Z2)
        prod = lambda P, Q: [
            [sum(P[i][t] * Q[t][j] for t in range(2)) for j in range(2)] for i in range(2)
        ]
        right = mlmul(A, prod(X, X2), prod(Y, Y2), prod(Z, Z2))
        assert left == right


def test_trilinear_delta():
    assert trilinear_form(delta_tensor(2), [1, 1], [1, 1], [1, 1]) == 2


def test_trilinear_zero_slot():
    rng = np.random.default_rng(2)
    A = random_rational_tensor(rng, (2, 2, 2))
    assert trilinear_form(A, [1, 2], [3, 5], [0, 0]) == 0


def test_trilinear_matches_frobenius_inner_product():
    rng = np.random.default_rng(3)
    A = random_float_tensor(rng, (2, 2, 2))
    x, y, z = rng.standard_normal(2), rng.standard_normal(2), rng.standard_normal(2)
    inner = float(np.sum(A.data * outer_product(x, y, z).data))
    assert trilinear_form(A, x, y, z) == pytest.approx(inner, rel=1e-12)


def test_trilinear_matches_loop_oracle_exact():
    rng = np.random.default_rng(4)
    A = random_rational_tensor(rng, (3, 2, 4))
    x = [Fraction(1), Fraction(-2), Fraction(1, 2)]
    y = [Fraction(3), Fraction(1, 3)]
    z = [Fraction(0), Fraction(1), Fraction(2), Fraction(-1)]
    nested = [[[A[i, j, k] for k in range(4)] for j in range(2)] for i in range(3)]
    assert trilinear_form(A, x, y, z) == loop_trilinear(nested, x, y, z)


def test_multilinearity_exact():
    rng = np.random.default_rng(5)
    A = random_rational_tensor(rng, (2, 3, 2))
    x1 = [Fraction(1), Fraction(2)]
    x2 = [Fraction(-1), Fraction(5)]
    y = [Fraction(1), Fraction(0), Fraction(2)]
    z = [Fraction(3), Fraction(-2)]
    a, b = Fraction(2, 3), Fraction(-7, 2)
    combo = [a * u + b * v for u, v in zip(x1, x2)]
    lhs = trilinear_form(A, combo, y, z)
    rhs = a * trilinear_form(A, x1, y, z) + b * trilinear_form(A, x2, y, z)
    assert lhs == rhs


def test_multilinearity_float():
    rng = np.random.default_rng(6)
    A = random_float_tensor(rng, (3, 3, 3))
    x1, x2, y, z = (rng.standard_normal(3) for _ in range(4))
    a, b = 0.7, -1.9
    lhs = trilinear_form(A, a * x1 + b * x2, y, z)
    rhs = a * trilinear_form(A, x1, y, z) + b * trilinear_form(A, x2, y, z)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_contract_delta_squares():
    n = 3
    x = [Fraction(2), Fraction(-1), Fraction(3)]
    vec = contract(delta_tensor(n), x=x, y=x)
    assert list(vec) == [xi * xi for xi in x]


def test_contract_fiber_extraction():
    rng = np.random.default_rng(9)
    A = random_rational_tensor(rng, (2, 3, 4))
    e0 = [1, 0]
    e1 = [0, 1, 0]
    fiber = contract(A, x=e0, y=e1)
    assert list(fiber) == [A[0, 1, k] for k in range(4)]


def test_contract_one_vector_matrix_shape():
    rng = np.random.default_rng(10)
    A = random_rational_tensor(rng, (2, 3, 4))
    M = contract(A, x=[1, 0])
    assert M.shape == (3, 4)
    assert M[2, 3] == A[0, 2, 3]


def test_contract_three_vectors_equals_trilinear():
    rng = np.random.default_rng(11)
    A = random_float_tensor(rng, (2, 3, 2))
    x, y, z = rng.standard_normal(2), rng.standard_normal(3), rng.standard_normal(2)
    assert contract(A, x=x, y=y, z=z) == pytest.approx(trilinear_form(A, x, y, z))


def test_contract_gradient_vs_finite_differences():
    rng = np.random.default_rng(12)
    A = random_float_tensor(rng, (3, 3, 3))
    y, z = rng.standard_normal(3), rng.standard_normal(3)
    x0 = rng.standard_normal(3)
    grad = contract(A, y=y, z=z)
    fd = central_difference_gradient(lambda x: trilinear_form(A, x, y, z), x0)
    assert np.max(np.abs(grad - fd)) < 1e-6


def test_symmetric_contract_slots_agree():
    rng = np.random.default_rng(13)
    S = symmetrize(random_float_tensor(rng, (3, 3, 3)))
    x = rng.standard_normal(3)
    a = contract(S, y=x, z=x)
    b = contract(S, x=x, z=x)
    c = contract(S, x=x, y=x)
    assert np.allclose(a, b, atol=1e-12)
    assert np.allclose(b, c, atol=1e-12)


def test_symmetric_gradient_identity():
    rng = np.random.default_rng(14)
    S = symmetrize(random_float_tensor(rng, (3, 3, 3)))
    x0 = rng.standard_normal(3)
    grad = 3.0 * np.asarray(contract(S, x=x0, y=x0), dtype=float)
    fd = central_difference_gradient(lambda x: trilinear_form(S, x, x, x), x0)
    assert np.max(np.abs(grad - fd)) < 1e-6


def test_frobenius_examples():
    assert frobenius_norm(Tensor3.zeros(2, 2, 2)) == 0
    assert frobenius_norm(delta_tensor(3)) == pytest.approx(math.sqrt(3))
    assert frobenius_norm_sq(delta_tensor(3)) == 3


def test_frobenius_exact_when_square():
    T = outer_product([Fraction(3, 5), Fraction(4, 5)], [1, 0], [1, 0])
    assert frobenius_norm(T) == Fraction(1)


def test_delta_tensor_basics():
    assert delta_tensor(1)[0, 0, 0] == 1
    d2 = delta_tensor(2)
    nz = [(i, j, k) for (i, j, k) in np.ndindex(2, 2, 2) if d2[i, j, k] != 0]
    assert nz == [(0, 0, 0), (1, 1, 1)]
    assert is_symmetric(delta_tensor(4))


def test_is_symmetric_examples():
    assert is_symmetric(delta_tensor(3))
    assert not is_symmetric(outer_product([1, 0], [1, 0], [0, 1]))


def test_symmetrize_is_symmetric():
    rng = np.random.default_rng(15)
    A = random_rational_tensor(rng, (3, 3, 3))
    assert is_symmetric(symmetrize(A))


def test_is_symmetric_requires_cubical():
    with pytest.raises(DimensionMismatch):
        is_symmetric(Tensor3.zeros(2, 3, 2))


def test_dimension_mismatch_errors():
    A = delta_tensor(2)
    with pytest.raises(DimensionMismatch):
        trilinear_form(A, [1, 0, 0], [1, 0], [1, 0])
    with pytest.raises(DimensionMismatch):
        mlmul(A, [[1], [1], [1]], [[1], [1]], [[1], [1]])


def test_no_implicit_kind_mixing():
    A = delta_tensor(2)
    with pytest.raises(TypeError):
        trilinear_form(A, [0.5, 0.5], [1, 0], [1, 0])
    with pytest.raises(TypeError):
        A + A.to_float()


def test_layout_third_index_fastest():
    T = Tensor3.from_flat((2, 2, 2), [Fraction(v) for v in range(8)])
    assert T[0, 0, 1] == 1
    assert T[0, 1, 0] == 2
    assert T[1, 0, 0] == 4


def test_serialization_rational_roundtrip_bit_exact():
    entries = [Fraction(10**12 + 1, 7), Fraction(-3, 2)] + [Fraction(0)] * 6
    T = Tensor3.from_flat((2, 2, 2), entries)
    back = tensor_from_json(tensor_to_json(T))
    assert back == T
    assert back.flat_entries() == entries


def test_serialization_float_roundtrip():
    rng = np.random.default_rng(16)
    T = random_float_tensor(rng, (2, 3, 2))
    back = tensor_from_json(tensor_to_json(T))
    assert back.kind == FLOAT
    assert back == T


def test_serialization_errors():
    with pytest.raises(TensorFormatError):
        tensor_from_json("{not json")
    with pytest.raises(TensorFormatError):
        tensor_from_json('{"dims": [2, 2], "entries": []}')
    with pytest.raises(TensorFormatError):
        tensor_from_json('{"dims": [1, 1, 2], "entries": ["1/0", "2"]}')
    with pytest.raises(TensorFormatError):
        tensor_from_json('{"dims": [1, 1, 2], "entries": ["1/2"]}')
    with pytest.raises(TensorFormatError):
        tensor_from_json('{"dims": [1, 1, 2], "entries": ["1/2", 0.25]}')
