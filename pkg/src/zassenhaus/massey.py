"""Massey products via defining systems and unipotent representations.

A defining system over a multiplicative system S of rank n, on a finite
p-group Q, assigns to every non-corner slot (i, j) a 1-cochain with values
in the slot space, such that

    d1 a_ij = sum_{i<k<j} a_ik cup a_kj     (cup through S's pairings).

Slots with j = i + 1 are then exactly characters of Q. The associated
Massey 2-cocycle is the corner-valued sum over k of a_1k cup a_{k,n+1};
its class is the Massey product of the characters relative to this
defining system.

The dictionary with unipotent representations: rho(g) = 1 + r(g) with
r_ij = -a_ij is a homomorphism Q -> U(S)/Z exactly when the defining
system conditions hold, and it lifts to U(S) itself exactly when the
Massey class vanishes; the corner of a lift is -c for any c solving
d1 c = (Massey cocycle).
"""

import itertools

import numpy as np

from .cohomology import (
    coboundary_context,
    cup,
    d1,
    h1_basis,
    is_cocycle2,
)
from .fplinalg import CapExceeded, SpanTracker, asarray_mod, enumerate_vectors
from .groups import FiniteGroup
from .multsys import MultSystem


def cup_sum(
    group: FiniteGroup, system: MultSystem, blocks: dict, i: int, j: int
) -> np.ndarray:
    """sum_{i<k<j} a_ik cup a_kj through the system's pairings."""
    acc = np.zeros(
        (group.order, group.order, system.dims[(i, j)]), dtype=np.int16
    )
    for k in range(i + 1, j):
        acc += cup(
            group, blocks[(i, k)], blocks[(k, j)], system.tensors[(i, k, j)]
        )
    return np.mod(acc, group.p).astype(np.int8)


class DefiningSystem:
    """Blocks a_ij (non-corner slots) satisfying the cup-sum conditions."""

    def __init__(
        self,
        group: FiniteGroup,
        system: MultSystem,
        blocks: dict,
        validate: bool = True,
    ):
        if group.p != system.p:
            raise ValueError("group and system live over different primes")
        self.group = group
        self.system = system
        self.n = system.n
        expected = [pr for pr in system.pairs if pr != system.corner]
        if sorted(blocks) != sorted(expected):
            raise ValueError("blocks must cover exactly the non-corner slots")
        self.blocks = {}
        for pr in expected:
            a = asarray_mod(blocks[pr], group.p)
            if a.ndim == 1:
                a = a[:, None]
            if a.shape != (group.order, system.dims[pr]):
                raise ValueError(f"block {pr} has wrong shape")
            if a[0].any():
                raise ValueError(f"block {pr} not normalized at the identity")
            self.blocks[pr] = a
        if validate:
            self.validate()

    @property
    def characters(self) -> list[np.ndarray]:
        return [self.blocks[(i, i + 1)] for i in range(1, self.n + 1)]

    def validate(self):
        for i, j in self.blocks:
            if j - i < 2:
                continue
            lhs = d1(self.group, self.blocks[(i, j)])
            rhs = cup_sum(self.group, self.system, self.blocks, i, j)
            if not np.array_equal(lhs, rhs):
                raise ValueError(f"block {(i, j)} fails its cup-sum condition")
        # level-one blocks are characters automatically: empty cup sum
        for idx, chi in enumerate(self.characters, start=1):
            if d1(self.group, chi).any():
                raise ValueError(f"slot {(idx, idx + 1)} is not a character")

    def massey_cocycle(self) -> np.ndarray:
        """Corner-valued obstruction cocycle, shape (N, N, corner_dim)."""
        z = cup_sum(self.group, self.system, self.blocks, 1, self.n + 1)
        if not is_cocycle2(self.group, z):
            raise AssertionError("Massey cochain failed the cocycle identity")
        return z

    def _scalar_cocycle(self) -> np.ndarray:
        if self.system.corner_dim != 1:
            raise ValueError("class bookkeeping needs a one-dimensional corner")
        return self.massey_cocycle()

    def massey_residue(self) -> np.ndarray:
        """Canonical flat coordinates of the Massey class."""
        return coboundary_context(self.group).class_residue(self._scalar_cocycle())

    def massey_vanishes(self) -> bool:
        return not self.massey_residue().any()

    # -- the representation dictionary -------------------------------------

    def to_rep(self) -> np.ndarray:
        """Row g = coordinates of rho(g) in U(S)/Z: blocks -a_ij, corner 0."""
        rep = np.zeros((self.group.order, self.system.total_dim), dtype=np.int8)
        for pr, a in self.blocks.items():
            rep[:, self.system.slice_of(pr)] = np.mod(-a, self.group.p)
        verify_rep(self.group, self.system, rep, mod_corner=True)
        return rep

    def lift(self):
        """Full U(S)-representation matrix extending to_rep(), or None."""
        z = self._scalar_cocycle()
        c = coboundary_context(self.group).solve(z)
        if c is None:
            return None
        rep = self.to_rep()
        rep[:, self.system.slice_of(self.system.corner)] = np.mod(-c, self.group.p)
        verify_rep(self.group, self.system, rep, mod_corner=False)
        return rep


def verify_rep(
    group: FiniteGroup,
    system: MultSystem,
    rep: np.ndarray,
    mod_corner: bool = False,
):
    """Hard-check multiplicativity of a representation matrix.

    rep[g] are U(S) coordinates (corner ignored when mod_corner); raises
    AssertionError on the first violated product.
    """
    if rep.shape != (group.order, system.total_dim):
        raise ValueError("representation matrix has wrong shape")
    if rep[0].any():
        raise AssertionError("identity must map to the identity")
    sl = system.slice_of(system.corner)
    chunk = max(1, (1 << 22) // max(1, group.order * system.total_dim))
    for start in range(0, group.order, chunk):
        block = slice(start, min(start + chunk, group.order))
        prod = system.u_mul(rep[block][:, None, :], rep[None, :, :])
        want = rep[group.table[block]].copy()
        if mod_corner:
            prod[..., sl] = 0
            want[..., sl] = 0
        if not np.array_equal(prod, want):
            raise AssertionError("representation fails multiplicativity")


def rep_to_defining_system(
    group: FiniteGroup, system: MultSystem, rep: np.ndarray
) -> DefiningSystem:
    """Invert the dictionary: blocks a_ij = -rep block, corner dropped."""
    blocks = {
        pr: np.mod(-rep[:, system.slice_of(pr)], group.p)
        for pr in system.pairs
        if pr != system.corner
    }
    return DefiningSystem(group, system, blocks)


# ---------------------------------------------------------------------------
# levelwise enumeration and counting


def homomorphism_cochains(group: FiniteGroup) -> np.ndarray:
    """All scalar characters of the group, one per row, shape (p^r, N)."""
    chars = h1_basis(group)
    coeffs = enumerate_vectors(group.p, chars.shape[1])
    return np.mod(coeffs.astype(np.int16) @ chars.T, group.p).astype(np.int8)


def enumerate_defining_systems(
    group: FiniteGroup, system: MultSystem, max_count: int = 1 << 16
):
    """Yield every defining system over `system`, level by level.

    Level-one slots range over characters; a higher slot has solutions
    exactly when its cup sum is a coboundary, and then a full coset of
    Z^1 per value coordinate. Raises CapExceeded past max_count.
    """
    homs = homomorphism_cochains(group)
    ctx = coboundary_context(group)
    slots = sorted(
        (pr for pr in system.pairs if pr != system.corner),
        key=lambda pr: (pr[1] - pr[0], pr[0]),
    )
    produced = [0]

    def rec(idx: int, blocks: dict):
        if idx == len(slots):
            produced[0] += 1
            if produced[0] > max_count:
                raise CapExceeded(f"more than {max_count} defining systems")
            yield DefiningSystem(group, system, dict(blocks), validate=False)
            return
        i, j = slots[idx]
        d = system.dims[(i, j)]
        if j - i == 1:
            base = np.zeros((group.order, d), dtype=np.int8)
        else:
            rhs = cup_sum(group, system, blocks, i, j)
            cols = []
            for c in range(d):
                sol = ctx.solve(rhs[:, :, c : c + 1])
                if sol is None:
                    return  # this branch admits no defining system
                cols.append(sol[:, 0])
            base = np.stack(cols, axis=1)
        for pick in itertools.product(range(homs.shape[0]), repeat=d):
            add = homs[list(pick)].T
            blocks[(i, j)] = np.mod(base + add, group.p).astype(np.int8)
            yield from rec(idx + 1, blocks)
        blocks.pop((i, j), None)

    yield from rec(0, {})


def count_defining_systems(
    group: FiniteGroup, system: MultSystem, max_count: int = 1 << 16
) -> int:
    return sum(1 for _ in enumerate_defining_systems(group, system, max_count))


def count_defining_systems_product_formula(group: FiniteGroup, n: int) -> int:
    """Closed-form count for the standard rank-n system, n in {2, 3}.

    At n = 2 there are no higher slots. At n = 3 the two level-two slots
    contribute, independently, |Z^1| solutions each exactly when the
    corresponding cup product is a coboundary.
    """
    if n not in (2, 3):
        raise ValueError("closed form implemented for n = 2 and n = 3 only")
    homs = homomorphism_cochains(group)
    if n == 2:
        return homs.shape[0] ** 2
    ctx = coboundary_context(group)
    free = homs.shape[0]
    ok = np.zeros((free, free), dtype=bool)
    one = np.ones((1, 1, 1), dtype=np.int8)
    for a in range(free):
        for b in range(free):
            ok[a, b] = ctx.is_coboundary(cup(group, homs[a], homs[b], one))
    total = 0
    for i, j, k in itertools.product(range(free), repeat=3):
        if ok[i, j] and ok[j, k]:
            total += free * free
    return total


def count_unipotent_homs_cohomologically(
    group: FiniteGroup, system: MultSystem, max_count: int = 1 << 16
) -> int:
    """#Hom(Q, U(S)) = sum over liftable defining systems of |Z^1|^corner.

    Lifts of a fixed defining system form a coset of Hom(Q, corner), so
    each vanishing Massey class contributes p^(h1 * corner_dim) full
    representations. Dual route to direct enumeration of homomorphisms.
    """
    homs = homomorphism_cochains(group)
    per_lift = homs.shape[0] ** system.corner_dim
    total = 0
    for ds in enumerate_defining_systems(group, system, max_count):
        if all(
            not coboundary_context(group)
            .class_residue(ds.massey_cocycle()[:, :, c : c + 1])
            .any()
            for c in range(ds.system.corner_dim)
        ):
            total += per_lift
    return total


# ---------------------------------------------------------------------------
# spans of witnessed Massey classes


class PhiAccumulator:
    """Span of Massey classes in H^2(Q), each with a defining-system witness.

    insert revalidates the witness before trusting it; only witnesses that
    enlarge the span are kept. Residues are canonical class coordinates,
    so membership queries are exact.
    """

    def __init__(self, group: FiniteGroup, n: int):
        self.group = group
        self.n = n
        self.ctx = coboundary_context(group)
        self.tracker = SpanTracker(group.p, self.ctx.ncoords)
        self.witnesses: list[DefiningSystem] = []

    @property
    def dim(self) -> int:
        return self.tracker.dim

    def insert(self, ds: DefiningSystem) -> bool:
        if ds.group.digest != self.group.digest or ds.n != self.n:
            raise ValueError("witness lives on the wrong group or rank")
        ds.validate()
        residue = ds.massey_residue()
        if self.tracker.contains(residue):
            return False
        self.tracker.insert(residue)
        self.witnesses.append(ds)
        return True

    def contains_residue(self, residue) -> bool:
        return self.tracker.contains(residue)

    def contains_class(self, z) -> bool:
        return self.tracker.contains(self.ctx.class_residue(z))

    def basis_residues(self) -> np.ndarray:
        return self.tracker.basis_matrix()


def direct_sum_systems(a: MultSystem, b: MultSystem) -> MultSystem:
    """Rank-preserving sum sharing the one-dimensional corner slot.

    Non-corner slots add up; pairings act blockwise, and both corners map
    into the single shared corner line, so Massey cocycles add.
    """
    if (a.p, a.n) != (b.p, b.n):
        raise ValueError("systems must share prime and rank")
    if a.corner_dim != 1 or b.corner_dim != 1:
        raise ValueError("shared corner requires one-dimensional corners")
    corner = a.corner
    dims = {
        pr: (1 if pr == corner else a.dims[pr] + b.dims[pr]) for pr in a.pairs
    }
    tensors = {}
    for tr in a.tensors:
        i, k, j = tr
        ta, tb = a.tensors[tr], b.tensors[tr]
        da1, da2, da3 = ta.shape
        db1, db2, db3 = tb.shape
        out_dim = 1 if (i, j) == corner else da3 + db3
        t = np.zeros((da1 + db1, da2 + db2, out_dim), dtype=np.int8)
        if (i, j) == corner:
            t[:da1, :da2, 0] = ta[:, :, 0]
            t[da1:, da2:, 0] = tb[:, :, 0]
        else:
            t[:da1, :da2, :da3] = ta
            t[da1:, da2:, da3:] = tb
        tensors[tr] = t
    return MultSystem(a.p, a.n, dims, tensors)


def direct_sum_witness(ds1: DefiningSystem, ds2: DefiningSystem) -> DefiningSystem:
    """Witness for the sum of two Massey classes over the summed system."""
    if ds1.group.digest != ds2.group.digest:
        raise ValueError("witnesses live on different groups")
    total = direct_sum_systems(ds1.system, ds2.system)
    blocks = {
        pr: np.concatenate([ds1.blocks[pr], ds2.blocks[pr]], axis=1)
        for pr in ds1.blocks
    }
    return DefiningSystem(ds1.group, total, blocks)
