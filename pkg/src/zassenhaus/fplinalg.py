"""Exact dense linear algebra over the prime fields F_p, p in {2, 3, 5}.

Vectors and matrices are numpy integer arrays with entries reduced mod p
(dtype int8 internally; any integer array-like is accepted on input).
Every echelon form is the canonical reduced row echelon form, so bases
returned by the functions here are deterministic: the same subspace always
gets the same basis matrix.

For p = 2 the elimination kernels switch to a bit-packed uint64
representation when rows are wide; the packed helpers are also exported for
enumeration-heavy callers.
"""

from __future__ import annotations

import numpy as np

PRIMES = (2, 3, 5)

# columns-per-word in the GF(2) packed representation
_WORD = 64
_GF2_PACK_MIN_COLS = 256


class CapExceeded(ValueError):
    """A configured size cap would be exceeded."""


def check_prime(p: int) -> int:
    if p not in PRIMES:
        raise ValueError(f"p must be one of {PRIMES}, got {p!r}")
    return p


def asarray_mod(data, p: int) -> np.ndarray:
    """Coerce to an int8 array with entries reduced into 0..p-1."""
    check_prime(p)
    a = np.asarray(data)
    if a.size and not np.issubdtype(a.dtype, np.integer):
        raise ValueError("entries must be integers")
    return np.mod(a, p).astype(np.int8)


def _inv_mod(x: int, p: int) -> int:
    return pow(int(x), p - 2, p)


# ---------------------------------------------------------------------------
# GF(2) packed kernels


def gf2_pack(rows: np.ndarray) -> np.ndarray:
    """Pack a (m, n) 0/1 matrix into (m, ceil(n/64)) uint64 words.

    Bit j of word w holds column w*64+j.
    """
    rows = np.asarray(rows, dtype=np.uint8) & 1
    m, n = rows.shape
    nwords = (n + _WORD - 1) // _WORD
    padded = np.zeros((m, nwords * _WORD), dtype=np.uint8)
    padded[:, :n] = rows
    bits = padded.reshape(m, nwords, _WORD).astype(np.uint64)
    shifts = np.arange(_WORD, dtype=np.uint64)
    return (bits << shifts).sum(axis=2, dtype=np.uint64)


def gf2_unpack(packed: np.ndarray, n: int) -> np.ndarray:
    packed = np.asarray(packed, dtype=np.uint64)
    m, nwords = packed.shape
    shifts = np.arange(_WORD, dtype=np.uint64)
    bits = (packed[:, :, None] >> shifts) & np.uint64(1)
    out = bits.reshape(m, nwords * _WORD)[:, :n]
    return out.astype(np.int8)


def _rref_gf2_packed(mat: np.ndarray) -> tuple[np.ndarray, list[int]]:
    m, n = mat.shape
    P = gf2_pack(mat)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        w, b = divmod(col, _WORD)
        colbits = (P[:, w] >> np.uint64(b)) & np.uint64(1)
        hot = np.nonzero(colbits[r:])[0]
        if hot.size == 0:
            continue
        pr = r + int(hot[0])
        if pr != r:
            P[[r, pr]] = P[[pr, r]]
        colbits = (P[:, w] >> np.uint64(b)) & np.uint64(1)
        mask = colbits.astype(bool)
        mask[r] = False
        if mask.any():
            P[mask] ^= P[r]
        pivots.append(col)
        r += 1
    return gf2_unpack(P, n), pivots


def rref(mat, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns (R, pivots): R has the same shape as the input with zero rows
    packed at the bottom, pivots is the list of pivot column indices in
    order. Canonical: pivot entries are 1, pivot columns are cleared above
    and below.
    """
    M = asarray_mod(mat, p)
    if M.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    m, n = M.shape
    if m == 0 or n == 0:
        return M.copy(), []
    if p == 2 and n >= _GF2_PACK_MIN_COLS:
        return _rref_gf2_packed(M)
    R = M.copy()
    pivots: list[int] = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        hot = np.nonzero(R[r:, col])[0]
        if hot.size == 0:
            continue
        pr = r + int(hot[0])
        if pr != r:
            R[[r, pr]] = R[[pr, r]]
        inv = _inv_mod(R[r, col], p)
        if inv != 1:
            R[r] = (R[r].astype(np.int16) * inv) % p
        coef = R[:, col].copy()
        coef[r] = 0
        mask = coef != 0
        if mask.any():
            R[mask] = (R[mask].astype(np.int16) - np.outer(coef[mask].astype(np.int16), R[r])) % p
        pivots.append(col)
        r += 1
    return R.astype(np.int8), pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def solve(mat, rhs, p: int):
    """One solution x of M x = b, or None if the system is inconsistent.

    Tie-break: free variables are set to zero, so the answer is canonical.
    """
    M = asarray_mod(mat, p)
    b = asarray_mod(rhs, p)
    if M.ndim != 2 or b.ndim != 1 or b.shape[0] != M.shape[0]:
        raise ValueError("shape mismatch in solve")
    aug = np.concatenate([M, b[:, None]], axis=1)
    R, pivots = rref(aug, p)
    n = M.shape[1]
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int8)
    for i, col in enumerate(pivots):
        x[col] = R[i, n]
    return x


def kernel_basis(mat, p: int) -> np.ndarray:
    """Canonical basis of the right null space, one row per basis vector.

    Ordered by free column index; entry at the free column is 1.
    """
    M = asarray_mod(mat, p)
    m, n = M.shape
    R, pivots = rref(M, p)
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((len(free), n), dtype=np.int8)
    for k, fc in enumerate(free):
        out[k, fc] = 1
        for i, pc in enumerate(pivots):
            out[k, pc] = (-int(R[i, fc])) % p
    return out


def image_basis(mat, p: int) -> np.ndarray:
    """Canonical (echelon) basis of the column space, one row per vector."""
    M = asarray_mod(mat, p)
    R, pivots = rref(M.T, p)
    return R[: len(pivots)].copy()


def row_space_basis(mat, p: int) -> np.ndarray:
    R, pivots = rref(mat, p)
    return R[: len(pivots)].copy()


def enumerate_vectors(p: int, n: int, cap: int = 1 << 20):
    """All vectors of F_p^n in lexicographic order (first coord slowest)."""
    check_prime(p)
    total = p**n
    if total > cap:
        raise CapExceeded(f"p^n = {total} exceeds cap {cap}")
    out = np.zeros((total, n), dtype=np.int8)
    for j in range(n):
        reps = p ** (n - 1 - j)
        pattern = np.repeat(np.arange(p, dtype=np.int8), reps)
        out[:, j] = np.tile(pattern, total // (p * reps))
    return out


class BilinearMap:
    """A pairing F_p^da x F_p^db -> F_p^dc given by tensor t[a][b][c]."""

    def __init__(self, p: int, tensor):
        check_prime(p)
        t = asarray_mod(tensor, p)
        if t.ndim != 3:
            raise ValueError("tensor must have shape (da, db, dc)")
        self.p = p
        self.tensor = t

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.tensor.shape

    def is_zero(self) -> bool:
        return not self.tensor.any()

    def apply(self, a, b) -> np.ndarray:
        a = asarray_mod(a, self.p)
        b = asarray_mod(b, self.p)
        da, db, dc = self.tensor.shape
        if a.shape != (da,) or b.shape != (db,):
            raise ValueError("operand dimension mismatch")
        out = np.einsum("a,b,abc->c", a.astype(np.int64), b.astype(np.int64), self.tensor.astype(np.int64))
        return np.mod(out, self.p).astype(np.int8)

    def apply_batch(self, A, B) -> np.ndarray:
        """Row-wise pairing of (m, da) against (m, db) -> (m, dc)."""
        A = asarray_mod(A, self.p)
        B = asarray_mod(B, self.p)
        out = np.einsum("ma,mb,abc->mc", A.astype(np.int64), B.astype(np.int64), self.tensor.astype(np.int64))
        return np.mod(out, self.p).astype(np.int8)

    def __eq__(self, other):
        return (
            isinstance(other, BilinearMap)
            and self.p == other.p
            and self.tensor.shape == other.tensor.shape
            and bool(np.array_equal(self.tensor, other.tensor))
        )

    def __hash__(self):
        return hash((self.p, self.tensor.shape, self.tensor.tobytes()))


class Subspace:
    """Subspace of F_p^n held as a canonical echelon row basis."""

    def __init__(self, p: int, ambient_dim: int, vectors=None):
        check_prime(p)
        self.p = p
        self.n = ambient_dim
        if vectors is None or (hasattr(vectors, "__len__") and len(vectors) == 0):
            self.basis = np.zeros((0, ambient_dim), dtype=np.int8)
        else:
            V = asarray_mod(vectors, p)
            if V.ndim == 1:
                V = V[None, :]
            if V.shape[1] != ambient_dim:
                raise ValueError("ambient dimension mismatch")
            self.basis = row_space_basis(V, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def contains(self, vec) -> bool:
        v = asarray_mod(vec, self.p)
        res = _reduce_against(v, self.basis, self.p)
        return not res.any()

    def contains_space(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis)

    def sum(self, other: "Subspace") -> "Subspace":
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("incompatible subspaces")
        return Subspace(self.p, self.n, np.concatenate([self.basis, other.basis], axis=0))

    def intersect(self, other: "Subspace") -> "Subspace":
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("incompatible subspaces")
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.p, self.n)
        # x = a.U = b.V  <=>  [U^T | -V^T] (a;b) = 0
        block = np.concatenate([self.basis.T, (-other.basis.T) % self.p], axis=1)
        ker = kernel_basis(block, self.p)
        vecs = np.mod(ker[:, : self.dim].astype(np.int16) @ self.basis.astype(np.int16), self.p)
        return Subspace(self.p, self.n, vecs)

    def quotient_basis(self, sub: "Subspace") -> np.ndarray:
        """Vectors of self completing a basis of sub to one of self.

        Requires sub <= self; the result is canonical (greedy over the
        echelon basis of self, reduced against sub).
        """
        if not self.contains_space(sub):
            raise ValueError("quotient_basis requires sub <= self")
        tracker = SpanTracker(self.p, self.n)
        for r in sub.basis:
            tracker.insert(r)
        out = []
        for r in self.basis:
            if tracker.insert(r):
                out.append(r.copy())
        if not out:
            return np.zeros((0, self.n), dtype=np.int8)
        return np.stack(out)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.n == other.n
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __hash__(self):
        return hash((self.p, self.n, self.basis.tobytes()))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.sum(b)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def _reduce_against(v: np.ndarray, echelon: np.ndarray, p: int) -> np.ndarray:
    """Reduce v against echelon rows (each with a leading 1)."""
    res = v.astype(np.int16).copy()
    for row in echelon:
        lead = np.nonzero(row)[0]
        if lead.size == 0:
            continue
        c = int(res[lead[0]]) % p
        if c:
            res = (res - c * row.astype(np.int16)) % p
    return res.astype(np.int8)


class SpanTracker:
    """Incremental span with expression witnesses.

    insert(v) adds v to the span, returning True when it was independent of
    everything inserted so far. express(v) returns coefficients over the
    inserted vectors reproducing v, or None when v is outside the span.
    Membership is O(rank * n) per query; rows are kept in echelon form.
    """

    def __init__(self, p: int, n: int):
        check_prime(p)
        self.p = p
        self.n = n
        self.rows: list[np.ndarray] = []  # echelon rows, leading coeff 1
        self.pivots: list[int] = []
        self.combos: list[np.ndarray] = []  # row i = sum_k combos[i][k] * input_k
        self.count = 0  # inputs seen

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, v):
        """Return (residue, mu) with v = residue + sum_k mu[k] * input_k."""
        res = asarray_mod(v, self.p).astype(np.int16)
        if res.shape != (self.n,):
            raise ValueError("vector dimension mismatch")
        mu = np.zeros(self.count, dtype=np.int16)
        for i, (row, piv) in enumerate(zip(self.rows, self.pivots)):
            c = int(res[piv]) % self.p
            if c:
                res = (res - c * row.astype(np.int16)) % self.p
                mu = (mu + c * _padded(self.combos[i], self.count)) % self.p
        return res.astype(np.int8), mu

    def insert(self, v) -> bool:
        res, mu = self._reduce(v)
        idx = self.count
        self.count += 1
        if not res.any():
            return False
        piv = int(np.nonzero(res)[0][0])
        inv = _inv_mod(res[piv], self.p)
        row = np.mod(res.astype(np.int16) * inv, self.p).astype(np.int8)
        # res = v_idx - sum_k mu[k] v_k, so row = inv*(e_idx - mu) over inputs
        combo = np.zeros(self.count, dtype=np.int16)
        combo[: mu.shape[0]] = (-mu) % self.p
        combo[idx] = 1
        combo = np.mod(combo * inv, self.p)
        # keep existing rows reduced against the new one for canonical order
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.rows.insert(pos, row)
        self.pivots.insert(pos, piv)
        self.combos.insert(pos, combo)
        for i in range(len(self.rows)):
            if i == pos:
                continue
            c = int(self.rows[i][piv]) % self.p
            if c:
                self.rows[i] = np.mod(self.rows[i].astype(np.int16) - c * row.astype(np.int16), self.p).astype(np.int8)
                self.combos[i] = np.mod(_padded(self.combos[i], self.count) - c * combo, self.p)
        return True

    def express(self, v):
        res, mu = self._reduce(v)
        if res.any():
            return None
        return np.mod(mu, self.p).astype(np.int8)

    def reduce(self, v):
        """Canonical residue of v modulo the span, with witness coefficients.

        Returns (residue, mu) with v = residue + sum_k mu[k] * input_k.
        Rows are kept fully reduced, so the residue vanishes on every pivot
        coordinate and is the canonical representative of v mod the span.
        """
        res, mu = self._reduce(v)
        return res, np.mod(mu, self.p).astype(np.int8)

    def contains(self, v) -> bool:
        return self.express(v) is not None

    def basis_matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.n), dtype=np.int8)
        return np.stack(self.rows)


def _padded(a: np.ndarray, n: int) -> np.ndarray:
    if a.shape[0] == n:
        return a.astype(np.int16)
    out = np.zeros(n, dtype=np.int16)
    out[: a.shape[0]] = a
    return out
