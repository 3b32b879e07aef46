"""Multiplicative systems: matrix-multiplication oracle, catalogs, levels.

The standard system's units are literally unitriangular matrices, so numpy
matrix multiplication is the independent oracle for the group law. Catalog
counts are checked against inline brute-force associativity enumeration.
"""

import itertools

import numpy as np
import pytest

from zassenhaus.fplinalg import CapExceeded
from zassenhaus.multsys import (
    MultSystem,
    UElement,
    catalog,
    embed_lower_rank,
    enumerate_U,
    group_from_system,
    unipotent_group,
)


def to_matrix(system, vec):
    """Standard-system vector -> unitriangular matrix (the oracle side)."""
    m = np.eye(system.n + 1, dtype=int)
    for i, j in system.pairs:
        m[i - 1, j - 1] = int(vec[system.offsets[(i, j)]])
    return m


def from_matrix(system, m):
    vec = np.zeros(system.total_dim, dtype=np.int8)
    for i, j in system.pairs:
        vec[system.offsets[(i, j)]] = m[i - 1, j - 1] % system.p
    return vec


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3)])
def test_standard_u_mul_matches_matrix_multiplication(p, n):
    s = MultSystem.standard(p, n)
    rng = np.random.default_rng(42)
    for _ in range(60):
        a = rng.integers(0, p, size=s.total_dim).astype(np.int8)
        b = rng.integers(0, p, size=s.total_dim).astype(np.int8)
        got = s.u_mul(a, b)
        want = from_matrix(s, to_matrix(s, a) @ to_matrix(s, b) % p)
        assert np.array_equal(got, want)
        inv = s.u_inv(a)
        assert not s.u_mul(a, inv).any() and not s.u_mul(inv, a).any()
        k = int(rng.integers(-5, 9))
        got_pow = s.u_pow(a, k)
        want_pow = from_matrix(s, np.linalg.matrix_power(to_matrix(s, a), k).astype(np.int64) % p)
        # matrix_power on negative k inverts over the rationals; redo mod p
        if k < 0:
            m = to_matrix(s, s.u_inv(a))
            want_pow = from_matrix(s, np.linalg.matrix_power(m, -k).astype(np.int64) % p)
        assert np.array_equal(got_pow, want_pow)


def test_standard_rank2_f2_has_eight_elements():
    s = MultSystem.standard(2, 2)
    elems = enumerate_U(s)
    assert len(elems) == 8
    g = group_from_system(s)
    assert g.order == 8
    # dihedral of order 8: nonabelian with an order-4 element
    assert any(g.element_order(x) == 4 for x in range(8))
    assert any(g.comm(a, b) != 0 for a in range(8) for b in range(8))


def test_rank1_f3_three_elements():
    s = MultSystem.standard(3, 1)
    assert len(enumerate_U(s)) == 3
    g = group_from_system(s)
    assert g.order == 3 and g.element_order(1) == 3


def test_unipotent_lcs_frozen_orders():
    g3 = unipotent_group(2, 3)
    assert [len(t) for t in g3.lower_central_series()] == [8, 2, 1]
    g4 = unipotent_group(2, 4)
    assert [len(t) for t in g4.lower_central_series()] == [64, 8, 2, 1]


def test_unipotent_degree_filtration_matches_zassenhaus():
    for p, size in [(2, 3), (2, 4), (3, 3)]:
        g = unipotent_group(p, size)
        assert g.degree_filtration() == g.zassenhaus_recursive() == g.zassenhaus_lazard()


def test_ubar_of_standard_rank2_is_elementary_abelian():
    s = MultSystem.standard(2, 2)
    gbar = group_from_system(s, bar=True)
    assert gbar.order == 4
    assert all(gbar.element_order(x) <= 2 for x in range(4))
    # Ubar_(n) = 1 at n = 2
    assert gbar.zassenhaus_recursive().term(2) == (0,)


def test_u_filtration_levels_standard_rank3():
    s = MultSystem.standard(2, 3)
    g = group_from_system(s)
    f = g.zassenhaus_recursive()
    # U_(k) = U_{3,k} for the standard system: orders 2^6, 2^3, 2^1, 1
    assert f.orders() == [64, 8, 2, 1]
    assert f == g.degree_filtration()


def test_level_arithmetic_commutators_and_powers():
    s = MultSystem.standard(2, 3)
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = int(rng.integers(1, 4))
        dp = int(rng.integers(1, 4))
        mask_d, mask_dp = s.level_mask(d), s.level_mask(dp)
        a = (rng.integers(0, 2, size=s.total_dim) * mask_d).astype(np.int8)
        b = (rng.integers(0, 2, size=s.total_dim) * mask_dp).astype(np.int8)
        assert s.v_level(s.u_comm(a, b)) >= min(d + dp, s.n + 1)
        assert s.v_level(s.u_pow(a, 2)) >= min(2 * d, s.n + 1)
        assert s.v_level(s.v_mul(a, b)) >= min(d + dp, s.n + 1)


def test_uelement_api():
    s = MultSystem.standard(2, 2)
    u = UElement(s, [1, 0, 1])
    v = UElement(s, [0, 1, 0])
    assert (u * u.inverse()).is_identity()
    assert (u * v).vec.tolist() == s.u_mul(u.vec, v.vec).tolist()
    assert (u**2).vec.tolist() == s.u_mul(u.vec, u.vec).tolist()
    assert u.comm(v).level() >= 2


def test_serialization_roundtrip_bit_exact():
    rng = np.random.default_rng(9)
    for sys_ in itertools.islice(catalog(2, 3, 1), 5):
        data = sys_.to_json()
        back = MultSystem.from_json(data)
        assert back == sys_
        assert back.to_json() == data
    s = MultSystem.standard(3, 2)
    assert MultSystem.from_json(s.to_json()) == s


def test_catalog_n2_d1_p2_frozen_count():
    systems = list(catalog(2, 2, 1))
    assert len(systems) == 2
    assert systems[0] == MultSystem.standard(2, 2)
    # the second is the zero-pairing system
    assert systems[1].tensors[(1, 2, 3)].sum() == 0


def test_catalog_n2_d1_p3_count():
    # pairings F_3 x F_3 -> F_3 are scalars; no associativity constraint at n=2
    systems = list(catalog(3, 2, 1))
    assert len(systems) == 3


def test_catalog_n3_d1_p2_against_brute_force():
    # oracle: scalars c_ijk with c123*c134 == c124*c234 (the only quadruple)
    valid = 0
    for c123, c124, c134, c234 in itertools.product(range(2), repeat=4):
        if (c123 * c134) % 2 == (c234 * c124) % 2:
            valid += 1
    systems = list(catalog(2, 3, 1))
    assert len(systems) == valid == 10
    assert systems[0] == MultSystem.standard(2, 3)


def test_catalog_streams_are_deterministic():
    a = [s.digest for s in itertools.islice(catalog(2, 2, 2), 12)]
    b = [s.digest for s in itertools.islice(catalog(2, 2, 2), 12)]
    assert a == b


def test_associativity_rejected():
    # rank 3, scalar pairings: c123 = c134 = 1, c124 = c234 = 0 breaks the law
    dims = {pr: 1 for pr in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]}
    t1 = np.ones((1, 1, 1), dtype=int)
    t0 = np.zeros((1, 1, 1), dtype=int)
    pairings = {(1, 2, 3): t1, (1, 3, 4): t1, (1, 2, 4): t0, (2, 3, 4): t0}
    with pytest.raises(ValueError, match="associative"):
        MultSystem(2, 3, dims, pairings)


def test_embed_lower_rank_is_injective_homomorphism():
    s = MultSystem.standard(2, 2)
    ext, emb = embed_lower_rank(s)
    assert ext.n == 3
    assert ext.corner_dim == 1
    seen = set()
    elems = enumerate_U(s)
    for u in elems:
        seen.add(emb.apply(u).vec.tobytes())
    assert len(seen) == len(elems)
    rng = np.random.default_rng(4)
    for _ in range(40):
        a = elems[int(rng.integers(len(elems)))]
        b = elems[int(rng.integers(len(elems)))]
        assert emb.apply(a * b) == emb.apply(a) * emb.apply(b)
    # embedded elements keep the new column empty
    for u in elems[:4]:
        v = emb.apply(u)
        for i in range(1, 4):
            assert not v.block((i, 4)).any()


def test_enumerate_caps():
    s = MultSystem.standard(2, 3)
    with pytest.raises(CapExceeded):
        enumerate_U(s, max_total_dim=3)
    big = MultSystem.standard(2, 3)
    with pytest.raises(CapExceeded):
        group_from_system(big, max_order=16)


def test_central_slot_is_central():
    s = MultSystem.standard(2, 3)
    g = group_from_system(s)
    # elements supported on the corner only commute with everything
    corner_slice = s.slice_of(s.corner)
    for idx in range(g.order):
        vec = g.uelements[idx]
        if vec.any() and not vec[: corner_slice.start].any() and not vec[corner_slice.stop :].any():
            assert all(g.comm(idx, other) == 0 for other in range(g.order))
