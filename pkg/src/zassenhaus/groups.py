"""Finite p-groups as multiplication tables, with filtration machinery.

A group is a table g*h over element indices 0..N-1 with identity at index 0.
Subgroups are sorted tuples of indices. Two independent algorithms compute
the mod-p restricted (Zassenhaus) filtration:

  zassenhaus_recursive: G_(1) = G,
      G_(n) = G_(ceil(n/p))^p * prod_{i+j=n} [G_(i), G_(j)]
  zassenhaus_lazard: G_(n) = prod_{i*p^k >= n} (gamma_i)^(p^k)
      with gamma_i the lower central series

and groups built from graded unit representations (truncated series,
unipotent matrices) carry a third, the degree filtration. Agreement of all
routes is the core self-check used throughout the test-suite.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .fplinalg import CapExceeded, check_prime

MAX_ORDER = 1 << 16

_BIG_DEGREE = 10**9

_filtration_cache: dict = {}


def _is_prime_power(order: int, p: int) -> bool:
    while order % p == 0:
        order //= p
    return order == 1


class FiniteGroup:
    """Finite p-group given by its multiplication table.

    table[a, b] is the index of a*b; index 0 is the identity. labels are
    human-readable generator words for I/O. degrees, when present, grade the
    elements by the filtration level of the unit representation that built
    the group (identity gets a sentinel large degree).
    """

    def __init__(self, p: int, table, labels=None, degrees=None, generators=None):
        check_prime(p)
        t = np.asarray(table, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError("table must be square")
        n = t.shape[0]
        if n == 0 or n > MAX_ORDER:
            raise CapExceeded(f"group order {n} outside 1..{MAX_ORDER}")
        if not _is_prime_power(n, p):
            raise ValueError(f"order {n} is not a power of p={p}")
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries out of range")
        if not (np.array_equal(t[0], np.arange(n)) and np.array_equal(t[:, 0], np.arange(n))):
            raise ValueError("index 0 must be the identity")
        self.p = p
        self.table = t
        self.order = n
        self.labels = list(labels) if labels is not None else [f"g{i}" for i in range(n)]
        if len(self.labels) != n:
            raise ValueError("labels length mismatch")
        self.degrees = None if degrees is None else np.asarray(degrees, dtype=np.int64)
        self.generators = list(generators) if generators is not None else []
        inv = np.full(n, -1, dtype=np.int32)
        rows, cols = np.nonzero(t == 0)
        inv[rows] = cols
        if (inv < 0).any():
            raise ValueError("not a group: missing inverses")
        self.inv = inv
        self._digest = hashlib.sha256(
            b"group:" + str(p).encode() + b":" + t.tobytes()
        ).hexdigest()

    # -- basic operations -------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def comm(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[t[self.inv[a], self.inv[b]], a], b])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            return self.power(self.inverse(g), -k)
        acc, base = 0, g
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k

    @property
    def digest(self) -> str:
        return self._digest

    def __repr__(self):
        return f"FiniteGroup(p={self.p}, order={self.order})"

    # -- subgroup machinery ------------------------------------------------

    def closure(self, gens) -> tuple:
        """Subgroup generated by gens (monoid closure; finite so a group)."""
        S = set(int(g) for g in gens)
        S.add(0)
        cur = np.fromiter(sorted(S), dtype=np.int32)
        frontier = cur
        while frontier.size:
            prods = np.concatenate(
                [
                    self.table[np.ix_(cur, frontier)].ravel(),
                    self.table[np.ix_(frontier, cur)].ravel(),
                ]
            )
            new = np.setdiff1d(np.unique(prods), cur, assume_unique=False)
            if new.size == 0:
                break
            cur = np.union1d(cur, new)
            frontier = new
        return tuple(int(x) for x in cur)

    def is_subgroup(self, S) -> bool:
        arr = np.asarray(sorted(set(S)), dtype=np.int32)
        if arr.size == 0 or arr[0] != 0:
            return False
        prods = self.table[np.ix_(arr, arr)]
        return bool(np.isin(prods, arr).all())

    def is_normal(self, S) -> bool:
        if not self.is_subgroup(S):
            return False
        arr = np.asarray(sorted(set(S)), dtype=np.int32)
        allg = np.arange(self.order, dtype=np.int32)
        conj = self.table[self.table[np.ix_(allg, arr)], self.inv[allg][:, None]]
        return bool(np.isin(conj, arr).all())

    def normal_closure(self, seed) -> tuple:
        S = set(self.closure(seed))
        while True:
            arr = np.fromiter(sorted(S), dtype=np.int32)
            allg = np.arange(self.order, dtype=np.int32)
            conj = self.table[self.table[np.ix_(allg, arr)], self.inv[allg][:, None]]
            new = set(int(x) for x in np.unique(conj)) - S
            if not new:
                return tuple(sorted(S))
            S = set(self.closure(S | new))

    def commutator_subgroup(self, H, K) -> tuple:
        Ha = np.asarray(sorted(set(H)), dtype=np.int32)
        Ka = np.asarray(sorted(set(K)), dtype=np.int32)
        t = self.table
        t1 = t[np.ix_(self.inv[Ha], self.inv[Ka])]
        t2 = t[t1, Ha[:, None]]
        t3 = t[t2, Ka[None, :]]
        return self.closure(np.unique(t3))

    def power_subgroup(self, H, k: int) -> tuple:
        """Subgroup generated by k-th powers of every element of H."""
        arr = np.asarray(sorted(set(H)), dtype=np.int32)
        acc = arr.copy()
        for _ in range(k - 1):
            acc = self.table[acc, arr]
        return self.closure(np.unique(acc))

    def coset_reps(self, N) -> np.ndarray:
        """reps[g] = min element of the coset gN."""
        arr = np.asarray(sorted(set(N)), dtype=np.int32)
        return self.table[:, arr].min(axis=1)

    def quotient(self, N):
        """Quotient by a normal subgroup.

        Returns (Q, proj) with proj[g] the Q-index of gN. Q-indices follow
        the sorted minimal coset representatives, so the identity coset is
        index 0 again.
        """
        if not self.is_normal(N):
            raise ValueError("quotient requires a normal subgroup")
        reps = self.coset_reps(N)
        unique = np.unique(reps)
        label = {int(r): i for i, r in enumerate(unique)}
        proj = np.fromiter((label[int(r)] for r in reps), dtype=np.int32, count=self.order)
        qtable = proj[self.table[np.ix_(unique, unique)]]
        qlabels = [self.labels[int(r)] for r in unique]
        Q = FiniteGroup(self.p, qtable, labels=qlabels)
        Q.generators = sorted(set(int(proj[g]) for g in self.generators if proj[g] != 0))
        return Q, proj

    def subgroup_group(self, S):
        """Materialize a subgroup as its own FiniteGroup.

        Returns (H, embed) with embed[i] the parent index of H's element i.
        """
        if not self.is_subgroup(S):
            raise ValueError("not a subgroup")
        arr = np.asarray(sorted(set(S)), dtype=np.int32)
        table = np.searchsorted(arr, self.table[np.ix_(arr, arr)])
        H = FiniteGroup(
            self.p,
            table,
            labels=[self.labels[int(g)] for g in arr],
            degrees=None if self.degrees is None else self.degrees[arr],
        )
        return H, arr

    # -- series ------------------------------------------------------------

    def lower_central_series(self) -> list[tuple]:
        """gamma_1 = G, gamma_{i+1} = [gamma_i, G], until trivial."""
        full = tuple(range(self.order))
        out = [full]
        while len(out[-1]) > 1:
            nxt = self.commutator_subgroup(out[-1], full)
            if nxt == out[-1]:
                raise ValueError("lower central series does not terminate; not nilpotent")
            out.append(nxt)
        return out

    def zassenhaus_recursive(self) -> "Filtration":
        key = (self._digest, "recursive")
        if key in _filtration_cache:
            return _filtration_cache[key]
        p = self.p
        terms = [tuple(range(self.order))]
        n = 2
        while len(terms[-1]) > 1:
            h = (n + p - 1) // p  # least h with h*p >= n
            gens: set[int] = set()
            gens.update(self.power_subgroup(terms[h - 1], p))
            for i in range(1, n):
                j = n - i
                gens.update(self.commutator_subgroup(terms[i - 1], terms[j - 1]))
            terms.append(self.closure(gens))
            if len(terms[-1]) > len(terms[-2]):
                raise AssertionError("filtration must descend")
            n += 1
        f = Filtration(self, terms)
        _filtration_cache[key] = f
        return f

    def zassenhaus_lazard(self) -> "Filtration":
        key = (self._digest, "lazard")
        if key in _filtration_cache:
            return _filtration_cache[key]
        p = self.p
        lcs = self.lower_central_series()
        terms = []
        n = 1
        while True:
            gens: set[int] = set()
            for i, gamma in enumerate(lcs, start=1):
                k = 0
                need = n
                while i * p**k < need:
                    k += 1
                gens.update(self.power_subgroup(gamma, p**k) if k else gamma)
            term = self.closure(gens)
            terms.append(term)
            if len(term) == 1:
                break
            n += 1
            if n > 4 * self.order:
                raise AssertionError("filtration runaway")
        f = Filtration(self, terms)
        _filtration_cache[key] = f
        return f

    def degree_filtration(self) -> "Filtration":
        """Filtration by the grading of the unit representation.

        Only available on groups built with element degrees (truncated
        series groups, unipotent matrix groups).
        """
        if self.degrees is None:
            raise ValueError("degree_filtration needs a graded group")
        terms = []
        k = 1
        while True:
            term = tuple(int(x) for x in np.nonzero((self.degrees >= k) | (np.arange(self.order) == 0))[0])
            if not self.is_subgroup(term):
                raise AssertionError("degree level is not a subgroup")
            terms.append(term)
            if len(term) == 1:
                break
            k += 1
        return Filtration(self, terms)

    def elementary_quotient_basis(self, H, K):
        """Basis and coordinates for an elementary abelian quotient H/K.

        Returns (basis, coords) where basis is a list of elements of H whose
        K-cosets form an F_p-basis of H/K and coords maps each element of H
        to its coordinate tuple. Raises if H/K is not elementary abelian.
        """
        Hs = tuple(sorted(set(H)))
        Ks = tuple(sorted(set(K)))
        if not self.is_subgroup(Hs) or not self.is_subgroup(Ks):
            raise ValueError("need subgroups")
        Kset = set(Ks)
        for a in Hs:
            if self.power(a, self.p) not in Kset:
                raise ValueError("quotient not exponent p")
            for b in Hs:
                if self.comm(a, b) not in Kset:
                    raise ValueError("quotient not abelian")
        basis: list[int] = []
        span = Ks
        for h in Hs:
            if h not in set(span):
                basis.append(h)
                span = self.closure(set(span) | {h} | set(basis))
        if len(span) != len(Hs):
            raise AssertionError("basis does not span")
        reps = self.coset_reps(Ks)
        coords: dict[int, tuple] = {}
        r = len(basis)
        from .fplinalg import enumerate_vectors

        for c in enumerate_vectors(self.p, r, cap=1 << 16):
            e = 0
            for ci, b in zip(c, basis):
                e = self.mul(e, self.power(b, int(ci)))
            coords.setdefault(int(reps[e]), tuple(int(x) for x in c))
        if len(coords) != self.p**r:
            raise AssertionError("coset count mismatch; quotient not elementary abelian")
        out = {h: coords[int(reps[h])] for h in Hs}
        return basis, out


class Filtration:
    """A descending chain of subgroups, 1-indexed, ending at the trivial one."""

    def __init__(self, group: FiniteGroup, terms: list[tuple]):
        if not terms or len(terms[-1]) != 1:
            raise ValueError("filtration must end at the trivial subgroup")
        self.group = group
        self.terms = [tuple(sorted(t)) for t in terms]

    def term(self, n: int) -> tuple:
        if n < 1:
            raise ValueError("terms are 1-indexed")
        if n > len(self.terms):
            return self.terms[-1]
        return self.terms[n - 1]

    @property
    def length(self) -> int:
        return len(self.terms)

    def orders(self) -> list[int]:
        return [len(t) for t in self.terms]

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        n = max(self.length, other.length)
        return all(self.term(k) == other.term(k) for k in range(1, n + 1))

    def __repr__(self):
        return f"Filtration(orders={self.orders()})"


def cyclic_group(p: int, order: int) -> FiniteGroup:
    """Z/order with order a power of p; generator is index 1."""
    check_prime(p)
    if not _is_prime_power(order, p) or order < 1:
        raise ValueError("order must be a positive power of p")
    idx = np.arange(order)
    table = (idx[:, None] + idx[None, :]) % order
    labels = ["1"] + [f"x1^{k}" if k > 1 else "x1" for k in range(1, order)]
    return FiniteGroup(p, table, labels=labels, generators=[1])
