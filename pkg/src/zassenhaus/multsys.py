"""Multiplicative systems and their groups of formal unipotent units.

A rank-n system is an array of F_p spaces A_ij (1 <= i < j <= n+1) with
associative pairings A_ij x A_jk -> A_ik. Arrays r = (r_ij) supported on
j - i >= d form V_{n,d}; the formal units 1 + r with the multiplication
(1+a)(1+b) = 1 + a + b + ab form the groups U_{n,d}, with U = U_{n,1},
central Z = U_{n,n} (the corner slot), and Ubar = U/Z.

Elements are flat int8 coordinate vectors over the blocks in lexicographic
(i, j) order; at p = 2 the mixed-radix element ids used by the enumeration
and table-building layers are literally bit-packed words.
"""

from __future__ import annotations

import hashlib
import itertools
import json

import numpy as np

from .fplinalg import CapExceeded, check_prime, enumerate_vectors
from .groups import _BIG_DEGREE, FiniteGroup


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 2)]


def all_triples(n: int) -> list[tuple[int, int, int]]:
    return [
        (i, j, k)
        for i in range(1, n + 2)
        for j in range(i + 1, n + 2)
        for k in range(j + 1, n + 2)
    ]


class MultSystem:
    """Spaces A_ij with associative pairings, over F_p, p in {2,3,5}."""

    def __init__(self, p: int, n: int, dims: dict, pairings: dict, validate: bool = True):
        check_prime(p)
        if n < 1:
            raise ValueError("rank must be >= 1")
        self.p, self.n = p, n
        pairs = all_pairs(n)
        if set(dims) != set(pairs):
            raise ValueError("dims must cover exactly the pairs (i,j), 1<=i<j<=n+1")
        for pr, d in dims.items():
            if int(d) < 1:
                raise ValueError(f"dim A_{pr} must be >= 1")
        self.dims = {pr: int(dims[pr]) for pr in pairs}
        triples = all_triples(n)
        if set(pairings) != set(triples):
            raise ValueError("pairings must cover exactly the triples i<j<k")
        self.tensors: dict[tuple, np.ndarray] = {}
        for i, j, k in triples:
            t = np.mod(np.asarray(pairings[(i, j, k)]), p).astype(np.int8)
            want = (self.dims[(i, j)], self.dims[(j, k)], self.dims[(i, k)])
            if t.shape != want:
                raise ValueError(f"pairing {(i,j,k)} has shape {t.shape}, want {want}")
            self.tensors[(i, j, k)] = t
        self.pairs = pairs
        self.offsets = {}
        off = 0
        for pr in pairs:
            self.offsets[pr] = off
            off += self.dims[pr]
        self.total_dim = off
        self.corner = (1, n + 1)
        if validate:
            self._check_associative()
        self._digest = None

    # -- structure ---------------------------------------------------------

    def _check_associative(self):
        for i, j, k, l in itertools.combinations(range(1, self.n + 2), 4):
            tijk = self.tensors[(i, j, k)].astype(np.int64)
            tikl = self.tensors[(i, k, l)].astype(np.int64)
            tjkl = self.tensors[(j, k, l)].astype(np.int64)
            tijl = self.tensors[(i, j, l)].astype(np.int64)
            left = np.einsum("abe,ecf->abcf", tijk, tikl) % self.p
            right = np.einsum("bce,aef->abcf", tjkl, tijl) % self.p
            if not np.array_equal(left, right):
                raise ValueError(f"pairings not associative at quadruple {(i,j,k,l)}")

    def slice_of(self, pair) -> slice:
        o = self.offsets[pair]
        return slice(o, o + self.dims[pair])

    def block(self, vec: np.ndarray, pair) -> np.ndarray:
        return vec[..., self.slice_of(pair)]

    @classmethod
    def standard(cls, p: int, n: int) -> "MultSystem":
        """All spaces F_p with field multiplication; U is the group of
        unitriangular (n+1)x(n+1) matrices over F_p."""
        dims = {pr: 1 for pr in all_pairs(n)}
        pairings = {tr: np.ones((1, 1, 1), dtype=np.int8) for tr in all_triples(n)}
        return cls(p, n, dims, pairings)

    @property
    def corner_dim(self) -> int:
        return self.dims[self.corner]

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "dims": {f"{i},{j}": self.dims[(i, j)] for i, j in self.pairs},
            "pairings": {
                f"{i},{j},{k}": self.tensors[(i, j, k)].tolist() for i, j, k in all_triples(self.n)
            },
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultSystem":
        dims = {tuple(int(x) for x in k.split(",")): v for k, v in data["dims"].items()}
        pairings = {tuple(int(x) for x in k.split(",")): np.asarray(v) for k, v in data["pairings"].items()}
        return cls(int(data["p"]), int(data["n"]), dims, pairings)

    @property
    def digest(self) -> str:
        if self._digest is None:
            blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
            self._digest = hashlib.sha256(blob.encode()).hexdigest()
        return self._digest

    def __eq__(self, other):
        return isinstance(other, MultSystem) and self.digest == other.digest

    def __hash__(self):
        return hash(self.digest)

    def describe(self) -> str:
        if self == MultSystem.standard(self.p, self.n):
            return f"standard(p={self.p}, n={self.n})"
        return f"system(p={self.p}, n={self.n}, digest={self.digest[:12]})"

    # -- V_{n,d} arithmetic on flat vectors ---------------------------------

    def v_zero(self) -> np.ndarray:
        return np.zeros(self.total_dim, dtype=np.int8)

    def v_add(self, a, b) -> np.ndarray:
        return np.mod(a.astype(np.int16) + b.astype(np.int16), self.p).astype(np.int8)

    def v_neg(self, a) -> np.ndarray:
        return np.mod(-a.astype(np.int16), self.p).astype(np.int8)

    def v_mul(self, a, b) -> np.ndarray:
        """(ab)_ik = sum_{i<j<k} mu_ijk(a_ij, b_jk). Raises level by >= 1."""
        batch = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
        out = np.zeros(batch + (self.total_dim,), dtype=np.int64)
        for (i, j, k), t in self.tensors.items():
            ab = self.block(a, (i, j)).astype(np.int64)
            bb = self.block(b, (j, k)).astype(np.int64)
            out[..., self.slice_of((i, k))] += np.einsum("...a,...b,abc->...c", ab, bb, t.astype(np.int64))
        return np.mod(out, self.p).astype(np.int8)

    def v_level(self, a) -> int:
        """Least j - i over nonzero blocks; n + 1 when a = 0."""
        best = self.n + 1
        for i, j in self.pairs:
            if j - i < best and self.block(a, (i, j)).any():
                best = j - i
        return best

    def level_mask(self, d: int) -> np.ndarray:
        m = np.zeros(self.total_dim, dtype=bool)
        for i, j in self.pairs:
            if j - i >= d:
                m[self.slice_of((i, j))] = True
        return m

    # -- U_{n,d} group law ---------------------------------------------------

    def u_identity(self) -> np.ndarray:
        return self.v_zero()

    def u_mul(self, a, b) -> np.ndarray:
        """(1+a)(1+b) = 1 + a + b + ab, on the V-coordinates."""
        s = a.astype(np.int64) + b.astype(np.int64) + self.v_mul(a, b).astype(np.int64)
        return np.mod(s, self.p).astype(np.int8)

    def u_inv(self, a) -> np.ndarray:
        """(1+a)^-1 = 1 + sum_{i>=1} (-1)^i a^i (a is nilpotent)."""
        out = np.zeros(np.shape(a), dtype=np.int64)
        power = a.copy()
        sign = -1
        for _ in range(self.n):
            out += sign * power.astype(np.int64)
            power = self.v_mul(power, a)
            sign = -sign
            if not power.any():
                break
        return np.mod(out, self.p).astype(np.int8)

    def u_pow(self, a, k: int) -> np.ndarray:
        if k < 0:
            return self.u_pow(self.u_inv(a), -k)
        acc = self.u_identity()
        base = a.copy()
        while k:
            if k & 1:
                acc = self.u_mul(acc, base)
            base = self.u_mul(base, base)
            k >>= 1
        return acc

    def u_comm(self, a, b) -> np.ndarray:
        """[u, v] = u^-1 v^-1 u v."""
        return self.u_mul(self.u_mul(self.u_mul(self.u_inv(a), self.u_inv(b)), a), b)

    def zero_corner(self, a) -> np.ndarray:
        out = a.copy()
        out[self.slice_of(self.corner)] = 0
        return out


class UElement:
    """A unit 1 + a of a multiplicative system (thin vector wrapper)."""

    __slots__ = ("system", "vec")

    def __init__(self, system: MultSystem, vec):
        self.system = system
        self.vec = np.mod(np.asarray(vec), system.p).astype(np.int8)
        if self.vec.shape != (system.total_dim,):
            raise ValueError("coordinate length mismatch")

    def __mul__(self, other: "UElement") -> "UElement":
        if self.system is not other.system and self.system != other.system:
            raise ValueError("elements of different systems")
        return UElement(self.system, self.system.u_mul(self.vec, other.vec))

    def inverse(self) -> "UElement":
        return UElement(self.system, self.system.u_inv(self.vec))

    def __pow__(self, k: int) -> "UElement":
        return UElement(self.system, self.system.u_pow(self.vec, k))

    def comm(self, other: "UElement") -> "UElement":
        return UElement(self.system, self.system.u_comm(self.vec, other.vec))

    def level(self) -> int:
        return self.system.v_level(self.vec)

    def is_identity(self) -> bool:
        return not self.vec.any()

    def block(self, pair) -> np.ndarray:
        return self.system.block(self.vec, pair)

    def __eq__(self, other):
        return isinstance(other, UElement) and self.system == other.system and np.array_equal(self.vec, other.vec)

    def __hash__(self):
        return hash((self.system.digest, self.vec.tobytes()))

    def __repr__(self):
        return f"U{tuple(int(x) for x in self.vec)}"


VElement = UElement  # same coordinates; V is the additive picture of the array


# -- module-level op aliases (vector in, vector out convenience on UElement) --


def v_add(a: UElement, b: UElement) -> UElement:
    return UElement(a.system, a.system.v_add(a.vec, b.vec))


def v_mul(a: UElement, b: UElement) -> UElement:
    return UElement(a.system, a.system.v_mul(a.vec, b.vec))


def u_mul(a: UElement, b: UElement) -> UElement:
    return a * b


def u_inv(a: UElement) -> UElement:
    return a.inverse()


def u_comm(a: UElement, b: UElement) -> UElement:
    return a.comm(b)


def u_pow(a: UElement, k: int) -> UElement:
    return a**k


class Embedding:
    """Block-copy homomorphism U(lower) -> U(higher) from rank escalation."""

    def __init__(self, lower: MultSystem, higher: MultSystem):
        self.lower = lower
        self.higher = higher

    def apply_vec(self, vec: np.ndarray) -> np.ndarray:
        out = np.zeros(self.higher.total_dim, dtype=np.int8)
        for pr in self.lower.pairs:
            out[self.higher.slice_of(pr)] = self.lower.block(vec, pr)
        return out

    def apply(self, u: UElement) -> UElement:
        return UElement(self.higher, self.apply_vec(u.vec))


def embed_lower_rank(system: MultSystem) -> tuple[MultSystem, Embedding]:
    """Extend a rank-(n-1) view: pad rank n with A_{i,n+1} = F_p and zero
    pairings into the new column. The block-copy map is an injective
    homomorphism U(system) -> U(extended)."""
    n_new = system.n + 1
    dims = {pr: 1 for pr in all_pairs(n_new)}
    for pr in system.pairs:
        dims[pr] = system.dims[pr]
    pairings = {}
    for i, j, k in all_triples(n_new):
        if k <= n_new:
            pairings[(i, j, k)] = system.tensors[(i, j, k)]
        else:
            pairings[(i, j, k)] = np.zeros((dims[(i, j)], dims[(j, k)], dims[(i, k)]), dtype=np.int8)
    ext = MultSystem(system.p, n_new, dims, pairings)
    return ext, Embedding(system, ext)


DEFAULT_DIM_BOUND = 20
DEFAULT_ELEMENT_BOUND = 1 << 20


def enumerate_U(
    system: MultSystem,
    d: int = 1,
    max_total_dim: int = DEFAULT_DIM_BOUND,
    max_elements: int = DEFAULT_ELEMENT_BOUND,
) -> list[UElement]:
    """All elements of U_{n,d}, in lexicographic coordinate order."""
    mask = system.level_mask(d)
    free = int(mask.sum())
    if free > max_total_dim:
        raise CapExceeded(f"support dimension {free} exceeds bound {max_total_dim}")
    count = system.p**free
    if count > max_elements:
        raise CapExceeded(f"{count} elements exceed bound {max_elements}")
    coords = enumerate_vectors(system.p, free, cap=max_elements)
    out_mat = np.zeros((count, system.total_dim), dtype=np.int8)
    out_mat[:, mask] = coords
    return [UElement(system, row) for row in out_mat]


def _element_matrix(system: MultSystem, d: int, bar: bool, max_elements: int) -> np.ndarray:
    mask = system.level_mask(d)
    if bar:
        mask[system.slice_of(system.corner)] = False
    free = int(mask.sum())
    count = system.p**free
    if count > max_elements:
        raise CapExceeded(f"group of order {count} exceeds cap {max_elements}")
    coords = enumerate_vectors(system.p, free, cap=max_elements)
    mat = np.zeros((count, system.total_dim), dtype=np.int8)
    mat[:, mask] = coords
    return mat


def group_from_system(
    system: MultSystem,
    bar: bool = False,
    max_order: int = 4096,
) -> FiniteGroup:
    """Materialize U (or Ubar = U/Z when bar=True) as a table group.

    Elements are graded by level, so degree_filtration() is available.
    The returned group has attributes .system, .uelements (coordinate
    matrix) and .bar.
    """
    mat = _element_matrix(system, 1, bar, max_order)
    count = mat.shape[0]
    mask = system.level_mask(1)
    if bar:
        mask[system.slice_of(system.corner)] = False
    weights = np.zeros(system.total_dim, dtype=np.int64)
    radix = 1
    for pos in reversed(np.nonzero(mask)[0]):
        weights[pos] = radix
        radix *= system.p
    ids = mat.astype(np.int64) @ weights  # lex order -> ascending, 0 first
    if not np.array_equal(ids, np.sort(ids)):
        raise AssertionError("element enumeration must be sorted")
    # multiplication table blockwise (out = a + b + a*b, corner dropped for
    # bar), chunked over left factors to bound memory
    table = np.empty((count, count), dtype=np.int32)
    chunk = max(1, (1 << 22) // max(1, count * system.total_dim))
    for start in range(0, count, chunk):
        A = mat[start : start + chunk].astype(np.int32)
        prod = A[:, None, :] + mat[None, :, :].astype(np.int32)
        for (i, j, k), t in system.tensors.items():
            if bar and (i, k) == system.corner:
                continue
            ab = A[:, system.slice_of((i, j))]
            bb = mat[:, system.slice_of((j, k))].astype(np.int32)
            prod[:, :, system.slice_of((i, k))] += np.einsum("ax,by,xyz->abz", ab, bb, t.astype(np.int32))
        prod = np.mod(prod, system.p).astype(np.int64)
        rows = prod.reshape(-1, system.total_dim) @ weights
        table[start : start + chunk] = np.searchsorted(ids, rows).reshape(-1, count)
    degrees = np.fromiter(
        (system.v_level(row) for row in mat), dtype=np.int64, count=count
    )
    degrees[0] = _BIG_DEGREE
    labels = ["1"] + ["u(" + ",".join(str(int(x)) for x in row[mask]) + ")" for row in mat[1:]]
    g = FiniteGroup(system.p, table, labels=labels, degrees=degrees)
    g.system = system
    g.uelements = mat
    g.bar = bar
    return g


def unipotent_group(p: int, size: int, max_order: int = 4096) -> FiniteGroup:
    """Unitriangular size x size matrices over F_p as a table group."""
    if size < 2:
        raise ValueError("size must be >= 2")
    return group_from_system(MultSystem.standard(p, size - 1), max_order=max_order)


def catalog(p: int, n: int, max_dim: int, include_standard: bool = True):
    """Stream of systems: standard first, then all dimension assignments
    (corner pinned to F_p for n >= 2) with pairing tensors in lexicographic
    order, associative ones only, exact duplicates skipped.

    The stream is combinatorially long for max_dim >= 2; consumers take
    prefixes.
    """
    check_prime(p)
    if n < 1 or max_dim < 1:
        raise ValueError("need n >= 1 and max_dim >= 1")
    seen: set[str] = set()
    if include_standard:
        s = MultSystem.standard(p, n)
        seen.add(s.digest)
        yield s
    pairs = all_pairs(n)
    triples = all_triples(n)
    corner = (1, n + 1)
    free_pairs = [pr for pr in pairs if pr != corner or n == 1]
    for choice in itertools.product(range(1, max_dim + 1), repeat=len(free_pairs)):
        dims = {corner: 1}
        dims.update(dict(zip(free_pairs, choice)))
        shapes = [(dims[(i, j)], dims[(j, k)], dims[(i, k)]) for i, j, k in triples]
        sizes = [a * b * c for a, b, c in shapes]
        total = sum(sizes)
        for flat in itertools.product(range(p), repeat=total):
            pairings = {}
            off = 0
            for tr, shape, size in zip(triples, shapes, sizes):
                pairings[tr] = np.asarray(flat[off : off + size], dtype=np.int8).reshape(shape)
                off += size
            try:
                sys_ = MultSystem(p, n, dims, pairings)
            except ValueError:
                continue
            if sys_.digest in seen:
                continue
            seen.add(sys_.digest)
            yield sys_
