"""Unit groups of truncated free algebras over F_p.

The algebra has basis all words of length < m in d letters (words of length
>= m are truncated to zero); the group is generated by the units 1 + x_i.
Its degree filtration (elements congruent to 1 modulo words of length k)
is an independent oracle for the mod-p filtration machinery in groups.py.
"""

from __future__ import annotations

import itertools

import numpy as np

from .fplinalg import CapExceeded, check_prime
from .groups import _BIG_DEGREE, MAX_ORDER, FiniteGroup


class TruncatedFreeAlgebra:
    """F_p<x_1..x_d> modulo words of length >= m, dense coefficient vectors."""

    def __init__(self, p: int, d: int, m: int, max_dim: int = 4096):
        check_prime(p)
        if d < 1 or m < 2:
            raise ValueError("need d >= 1 letters and truncation m >= 2")
        self.p, self.d, self.m = p, d, m
        words: list[tuple[int, ...]] = []
        for length in range(m):
            words.extend(itertools.product(range(d), repeat=length))
        if len(words) > max_dim:
            raise CapExceeded(f"algebra dimension {len(words)} exceeds {max_dim}")
        self.words = words
        self.dim = len(words)
        self.word_index = {w: i for i, w in enumerate(words)}
        # product scatter: words[i] ++ words[j] = words[t] when short enough
        I, J, T = [], [], []
        for i, wi in enumerate(words):
            for j, wj in enumerate(words):
                if len(wi) + len(wj) < m:
                    I.append(i)
                    J.append(j)
                    T.append(self.word_index[wi + wj])
        self._pi = np.asarray(I, dtype=np.int32)
        self._pj = np.asarray(J, dtype=np.int32)
        self._pt = np.asarray(T, dtype=np.int32)

    def one(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int8)
        v[0] = 1
        return v

    def generator_unit(self, i: int) -> np.ndarray:
        """The unit 1 + x_i (letters are 1-based in labels, 0-based here)."""
        v = self.one()
        v[self.word_index[(i,)]] = 1
        return v

    def mul(self, a, b) -> np.ndarray:
        prods = a.astype(np.int32)[self._pi] * b.astype(np.int32)[self._pj]
        out = np.zeros(self.dim, dtype=np.int32)
        np.add.at(out, self._pt, prods)
        return (out % self.p).astype(np.int8)

    def left_mul_matrix(self, a) -> np.ndarray:
        """L with (a*b)[t] = sum_j L[t, j] b[j]."""
        L = np.zeros((self.dim, self.dim), dtype=np.int32)
        np.add.at(L, (self._pt, self._pj), a.astype(np.int32)[self._pi])
        return L % self.p

    def series_degree(self, v) -> int:
        """Least word length with nonzero coefficient past the constant term."""
        nz = np.nonzero(v[1:])[0]
        if nz.size == 0:
            return _BIG_DEGREE
        return len(self.words[int(nz[0]) + 1])


def build_magnus_group(p: int, d: int, m: int, max_order: int = MAX_ORDER) -> FiniteGroup:
    """Group generated by the units 1 + x_i inside the truncated algebra.

    The returned group carries element degrees and generator indices; its
    degree_filtration() is the series-degree oracle.
    """
    alg = TruncatedFreeAlgebra(p, d, m)
    vecs: list[np.ndarray] = [alg.one()]
    labels = ["1"]
    index = {vecs[0].tobytes(): 0}
    gens = [alg.generator_unit(i) for i in range(d)]
    gen_names = [f"x{i+1}" for i in range(d)]
    frontier = [0]
    while frontier:
        nxt = []
        for gi in frontier:
            for k, gvec in enumerate(gens):
                prod = alg.mul(vecs[gi], gvec)
                key = prod.tobytes()
                if key not in index:
                    if len(vecs) >= max_order:
                        raise CapExceeded(f"magnus group exceeds order cap {max_order}")
                    index[key] = len(vecs)
                    vecs.append(prod)
                    labels.append(gen_names[k] if labels[gi] == "1" else labels[gi] + "*" + gen_names[k])
                    nxt.append(index[key])
        frontier = nxt
    n = len(vecs)
    mat = np.stack(vecs)
    table = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        La = alg.left_mul_matrix(vecs[a])
        rows = np.mod(mat.astype(np.int32) @ La.T, p).astype(np.int8)
        table[a] = [index[r.tobytes()] for r in rows]
    degrees = np.asarray([alg.series_degree(v) for v in vecs], dtype=np.int64)
    generator_ids = [index[g.tobytes()] for g in gens]
    g = FiniteGroup(p, table, labels=labels, degrees=degrees, generators=generator_ids)
    g.algebra = alg
    g.series = mat
    return g
