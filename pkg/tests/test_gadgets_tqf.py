import numpy as np
import pytest

from trilab.gadgets import (
    TrilinearSystem,
    complete_graph,
    cycle_graph,
    feasibility_search,
    split_complex_witness,
    tensor_complexify,
    tqf_residuals,
    tqf_tensor,
    tqf_witness,
)
from trilab.hypermatrix import Tensor3
from trilab.spectral import SearchConfig


def test_tqf_dims_formula():
    for k in (1, 2, 3, 4):
        from trilab.gadgets import Graph

        g = complete_graph(k) if k > 1 else Graph(1, ())
        T = tqf_tensor(g)
        assert T.dims == (k * (2 * k + 5), 2 * k + 1, 2 * k + 1)


def test_tqf_minor_slices_structure():
    g = complete_graph(3)
    T = tqf_tensor(g)
    dim = 7
    n_minors = 3 * dim  # k(2k+1) = 21
    idx = 0
    for a in range(dim):
        for b in range(a + 1, dim):
            M = T.data[idx]
            assert M[a, b] == 1 and M[b, a] == -1
            assert sum(1 for e in M.reshape(-1) if e != 0) == 2
            idx += 1
    assert idx == n_minors
    # all entries of minor slices in {-1, 0, 1}
    for s in range(n_minors):
        assert all(e in (-1, 0, 1) for e in T.data[s].reshape(-1))


def test_tqf_witness_k3():
    g = complete_graph(3)
    u, v, w = tqf_witness(g, {0: 0, 1: 1, 2: 2})
    assert np.allclose(v, w)
    ra, rb, rc = tqf_residuals(tqf_tensor(g), u, v, w)
    assert max(np.max(np.abs(r)) for r in (ra, rb, rc)) < 1e-10
    assert np.linalg.norm(u) > 1e-8


def test_tqf_witness_c5():
    from trilab.gadgets import find_3coloring

    g = cycle_graph(5)
    col = dict(enumerate(find_3coloring(g)))
    u, v, w = tqf_witness(g, col)
    ra, rb, rc = tqf_residuals(tqf_tensor(g), u, v, w)
    assert max(np.max(np.abs(r)) for r in (ra, rb, rc)) < 1e-10


def test_tqf_k4_search_finds_nothing():
    ts = TrilinearSystem.from_tensor(tqf_tensor(complete_graph(4)))
    cfg = SearchConfig(seed=0, restarts=800, max_iters=80, tol=1e-9)
    assert feasibility_search(ts, cfg) is None


def test_tensor_complexify_dims():
    T = Tensor3.zeros(2, 2, 2)
    assert tensor_complexify(T).dims == (4, 4, 4)
    assert tensor_complexify(T).is_zero()


def test_tensor_complexify_block_structure():
    rng = np.random.default_rng(0)
    from oracles import random_rational_tensor

    A = random_rational_tensor(rng, (2, 3, 2))
    B = tensor_complexify(A)
    l, m, n = A.dims
    for i in range(l):
        assert np.array_equal(B.data[i, :m, :n], A.data[i])
        assert np.array_equal(B.data[i, m:, n:], -A.data[i])
        assert np.array_equal(B.data[l + i, :m, n:], A.data[i])
        assert np.array_equal(B.data[l + i, m:, :n], A.data[i])
        assert all(e == 0 for e in B.data[i, :m, n:].reshape(-1))
        assert all(e == 0 for e in B.data[l + i, :m, :n].reshape(-1))


def test_split_witness_solves_doubled_tensor():
    g = complete_graph(3)
    u, v, w = tqf_witness(g, {0: 0, 1: 1, 2: 2})
    B = tensor_complexify(tqf_tensor(g))
    ur, vr, wr = split_complex_witness(u, v, w)
    ra, rb, rc = tqf_residuals(B, ur, vr, wr)
    assert max(np.max(np.abs(r)) for r in (ra, rb, rc)) < 1e-10
    for vec in (ur, vr, wr):
        assert np.linalg.norm(vec) > 1e-8


def test_complexify_witness_transport_random():
    # complex TQF witnesses of random tensors map exactly to real
    # witnesses of the doubled tensor and back
    rng = np.random.default_rng(1)
    from oracles import random_rational_tensor

    A = random_rational_tensor(rng, (2, 2, 2))
    B = tensor_complexify(A)
    u = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    w = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    ra, rb, rc = tqf_residuals(A, u, v, w)
    ur, vr, wr = split_complex_witness(u, v, w)
    Ra, Rb, Rc = tqf_residuals(B, ur, vr, wr)
    # doubled residual families interleave real and imaginary parts
    assert np.allclose(Ra[:2], ra.real) and np.allclose(Ra[2:], ra.imag)
    assert np.allclose(Rb[:2], rb.real) and np.allclose(Rb[2:], -rb.imag)
    assert np.allclose(Rc[:2], rc.real) and np.allclose(Rc[2:], -rc.imag)
