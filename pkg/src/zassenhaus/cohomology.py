"""Mod-p group cohomology in degrees one and two, by direct linear algebra.

Cochains are normalized inhomogeneous cochains with trivial action:
a 1-cochain is an (N, dv) array with row 0 (the identity) zero, a 2-cochain
an (N, N, dv) array vanishing whenever either argument is the identity.
Differentials follow the bar-resolution conventions

    (d1 a)(g, h)    = a(g) + a(h) - a(gh)
    (d2 c)(g, h, k) = c(h, k) - c(gh, k) + c(g, hk) - c(g, h)

so 2-cocycles are exactly factor sets of central extensions.

Degree-two classes are handled through CoboundaryContext: the image of d1
is echelonized once per group (with a tracked transformation), after which
"is this a coboundary", "solve d1 c = z" and "canonical coordinates of the
class [z]" are all O(rank) vector operations. Full H^2 bases are only built
for small groups; everything else works with class residues.
"""

import numpy as np

from .fplinalg import (
    CapExceeded,
    SpanTracker,
    Subspace,
    asarray_mod,
    gf2_pack,
    gf2_unpack,
    kernel_basis,
    rank,
    rref,
    solve,
)
from .groups import FiniteGroup

MAX_CLASS_COORDS = 1 << 20


# ---------------------------------------------------------------------------
# cochains and differentials


def normalize1(group: FiniteGroup, a) -> np.ndarray:
    a = asarray_mod(a, group.p)
    if a.ndim == 1:
        a = a[:, None]
    if a.shape[0] != group.order or a[0].any():
        raise ValueError("need a normalized 1-cochain (identity row zero)")
    return a


def normalize2(group: FiniteGroup, c) -> np.ndarray:
    c = asarray_mod(c, group.p)
    if c.ndim == 2:
        c = c[:, :, None]
    if c.shape[:2] != (group.order, group.order) or c[0].any() or c[:, 0].any():
        raise ValueError("need a normalized 2-cochain")
    return c


def d1(group: FiniteGroup, a) -> np.ndarray:
    """(d1 a)(g, h) = a(g) + a(h) - a(gh), shape (N, N, dv)."""
    a = normalize1(group, a)
    out = a[:, None, :].astype(np.int16) + a[None, :, :] - a[group.table]
    return np.mod(out, group.p).astype(np.int8)


def d2(group: FiniteGroup, c) -> np.ndarray:
    """Full degree-two differential; materializes (N, N, N, dv)."""
    c = normalize2(group, c)
    n = group.order
    if n**3 * c.shape[2] > (1 << 26):
        raise CapExceeded("full d2 tensor too large; use is_cocycle2")
    t = group.table
    out = c[None, :, :, :].astype(np.int16) - c[t] + c[:, t] - c[:, :, None, :]
    return np.mod(out, group.p).astype(np.int8)


def is_cocycle2(group: FiniteGroup, c) -> bool:
    """Chunked d2 c == 0 check; never materializes the full 3-tensor."""
    c = normalize2(group, c)
    n = group.order
    t = group.table
    chunk = max(1, (1 << 22) // max(1, n * n * c.shape[2]))
    for start in range(0, n, chunk):
        sl = slice(start, min(start + chunk, n))
        block = (
            c[None, :, :, :].astype(np.int16)
            - c[t[sl]]
            + c[sl][:, t]
            - c[sl][:, :, None, :]
        )
        if np.mod(block, group.p).any():
            return False
    return True


def cup(group: FiniteGroup, a, b, pairing) -> np.ndarray:
    """(a cup b)(g, h) = pairing(a(g), b(h)); pairing is a (da, db, dc) tensor."""
    a = normalize1(group, a)
    b = normalize1(group, b)
    t = np.asarray(pairing)
    if t.ndim != 3 or t.shape[:2] != (a.shape[1], b.shape[1]):
        raise ValueError("pairing tensor shape mismatch")
    out = np.einsum("gx,hy,xyz->ghz", a.astype(np.int32), b.astype(np.int32), t.astype(np.int32))
    return np.mod(out, group.p).astype(np.int8)


def scalar_cup(group: FiniteGroup, a, b) -> np.ndarray:
    """Cup product of scalar-valued 1-cochains under field multiplication."""
    one = np.ones((1, 1, 1), dtype=np.int8)
    return cup(group, a, b, one)


def inflate1(proj: np.ndarray, a) -> np.ndarray:
    """Pull a 1-cochain on Q back along a projection array proj: G -> Q."""
    a = np.asarray(a)
    return a[proj]


def inflate2(proj: np.ndarray, c) -> np.ndarray:
    """Pull a 2-cochain on Q back along proj: inf(c)(g, h) = c(pg, ph)."""
    c = np.asarray(c)
    return c[np.ix_(proj, proj)]


def restrict1(embed: np.ndarray, a) -> np.ndarray:
    """Restrict a 1-cochain along a subgroup embedding index array."""
    a = np.asarray(a)
    return a[embed]


# ---------------------------------------------------------------------------
# degree one


def h1_basis(group: FiniteGroup) -> np.ndarray:
    """Basis of Hom(G, F_p) as columns: an (N, r) matrix of characters.

    Characters factor through the maximal elementary abelian quotient,
    which is G modulo the second term of its p-filtration; the coordinates
    on that quotient are the basis.
    """
    g2 = group.zassenhaus_recursive().term(2)
    everything = tuple(range(group.order))
    _, coords = group.elementary_quotient_basis(everything, g2)
    r = len(next(iter(coords.values()))) if coords else 0
    out = np.zeros((group.order, r), dtype=np.int8)
    for g, tup in coords.items():
        out[g] = tup
    return out


# ---------------------------------------------------------------------------
# degree two: cached coboundary solver


class CoboundaryContext:
    """Echelonized image of d1 for scalar 2-cochains on one group.

    Flat coordinates index pairs (g, h) with g, h both non-identity, in row
    major order, so a normalized 2-cochain z maps to z[1:, 1:].ravel().
    After construction:

      reduce(z)        -> (residue, cvals): z = residue + d1(c) with
                          c(g) = cvals[g-1]; the residue is the canonical
                          representative of the class [z] mod coboundaries.
      solve(z)         -> 1-cochain c with d1(c) = z, or None.
      class_residue(z) -> canonical flat coordinates of [z].

    Only scalar values are supported; vector-valued cochains are handled
    one coordinate at a time by callers.
    """

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.p = group.p
        n = group.order
        self.ncoords = (n - 1) * (n - 1)
        if self.ncoords > MAX_CLASS_COORDS:
            raise CapExceeded(
                f"{self.ncoords} class coordinates exceed cap {MAX_CLASS_COORDS}"
            )
        m = np.zeros((max(n - 1, 0), n - 1, n - 1), dtype=np.int8)
        if n > 1:
            idx = np.arange(n - 1)
            m[idx, idx, :] += 1
            m[idx, :, idx] += 1
            tt = group.table[1:, 1:]
            a_idx, b_idx = np.nonzero(tt > 0)
            np.subtract.at(m, (tt[a_idx, b_idx] - 1, a_idx, b_idx), 1)
            m %= self.p
        flat = m.reshape(n - 1, self.ncoords)
        aug = np.concatenate([flat, np.eye(n - 1, dtype=np.int8)], axis=1)
        reduced, pivots = rref(aug, self.p)
        pivots = np.asarray(pivots, dtype=np.int64)
        k = int(np.searchsorted(pivots, self.ncoords))
        self.rank = k  # = dim B^2
        self.pivots = pivots[:k]
        self.transform = reduced[:k, self.ncoords :].astype(np.int8)
        basis = reduced[:k, : self.ncoords].astype(np.int8)
        self._packed = self.p == 2 and self.ncoords >= 64
        self.basis = gf2_pack(basis) if self._packed else basis

    def _flatten(self, z) -> np.ndarray:
        z = normalize2(self.group, z)
        if z.shape[2] != 1:
            raise ValueError("coboundary context handles scalar values only")
        return z[1:, 1:, 0].reshape(self.ncoords)

    def reduce(self, z):
        zf = self._flatten(z)
        lam = zf[self.pivots].astype(np.int16) if self.rank else np.zeros(0, np.int16)
        if self.rank == 0:
            residue = zf.copy()
        elif self._packed:
            sel = self.basis[lam.astype(bool)]
            acc = np.bitwise_xor.reduce(sel, axis=0) if sel.shape[0] else np.zeros_like(self.basis[0])
            residue = (zf ^ gf2_unpack(acc[None, :], self.ncoords)[0]).astype(np.int8)
        else:
            residue = np.mod(zf - lam @ self.basis.astype(np.int16), self.p).astype(np.int8)
        cvals = (
            np.mod(lam @ self.transform.astype(np.int16), self.p).astype(np.int8)
            if self.rank
            else np.zeros(self.group.order - 1, dtype=np.int8)
        )
        return residue, cvals

    def class_residue(self, z) -> np.ndarray:
        return self.reduce(z)[0]

    def is_coboundary(self, z) -> bool:
        return not self.class_residue(z).any()

    def solve(self, z):
        """1-cochain c (shape (N, 1)) with d1(c) = z, or None."""
        residue, cvals = self.reduce(z)
        if residue.any():
            return None
        c = np.zeros((self.group.order, 1), dtype=np.int8)
        c[1:, 0] = cvals
        assert np.array_equal(d1(self.group, c), normalize2(self.group, z))
        return c

    def same_class(self, z1, z2) -> bool:
        return bool(np.array_equal(self.class_residue(z1), self.class_residue(z2)))


_context_cache: dict = {}


def coboundary_context(group: FiniteGroup) -> CoboundaryContext:
    key = group.digest
    ctx = _context_cache.get(key)
    if ctx is None:
        ctx = CoboundaryContext(group)
        _context_cache[key] = ctx
    return ctx


# ---------------------------------------------------------------------------
# degree two: explicit basis for small groups


class H2Space:
    """Explicit basis of H^2(G, F_p) for a small group.

    Builds the full cocycle space as the kernel of d2 on normalized scalar
    2-cochains, then quotients by coboundaries via canonical residues; cost
    is cubic in |G|, so this is reserved for small quotients.
    """

    def __init__(self, group: FiniteGroup, max_order: int = 32):
        if group.order > max_order:
            raise CapExceeded(
                f"explicit H^2 basis limited to order {max_order}; "
                f"group has order {group.order}"
            )
        self.group = group
        self.p = group.p
        self.ctx = coboundary_context(group)
        n = group.order
        m = n - 1
        ncoords = self.ctx.ncoords
        eqs = np.zeros((m, m, m, m, m), dtype=np.int8)  # (g,h,k) x (x,y)
        if m:
            t = group.table
            g, h, k = np.meshgrid(np.arange(1, n), np.arange(1, n), np.arange(1, n), indexing="ij")
            gi, hi, ki = g - 1, h - 1, k - 1
            np.add.at(eqs, (gi, hi, ki, hi, ki), 1)  # +c(h, k)
            gh = t[g, h]
            mask = gh > 0
            np.subtract.at(
                eqs, (gi[mask], hi[mask], ki[mask], gh[mask] - 1, ki[mask]), 1
            )  # -c(gh, k)
            hk = t[h, k]
            mask = hk > 0
            np.add.at(
                eqs, (gi[mask], hi[mask], ki[mask], gi[mask], hk[mask] - 1), 1
            )  # +c(g, hk)
            np.subtract.at(eqs, (gi, hi, ki, gi, hi), 1)  # -c(g, h)
        mat = np.mod(eqs.reshape(m**3, ncoords), self.p)
        z2 = kernel_basis(mat, self.p)
        self.z2_dim = z2.shape[0]
        self.b2_dim = self.ctx.rank
        tracker = SpanTracker(self.p, ncoords)
        basis_rows = []
        residues = []
        for row in z2:
            res = self.ctx.class_residue(self._unflatten(row))
            if tracker.contains(res):
                continue
            tracker.insert(res)
            basis_rows.append(row)
            residues.append(res)
        self._tracker = tracker
        self.dim = len(basis_rows)
        self.basis = [self._unflatten(r) for r in basis_rows]
        self.residues = (
            np.stack(residues) if residues else np.zeros((0, ncoords), dtype=np.int8)
        )

    def _unflatten(self, flat: np.ndarray) -> np.ndarray:
        n = self.group.order
        c = np.zeros((n, n, 1), dtype=np.int8)
        c[1:, 1:, 0] = np.asarray(flat, dtype=np.int8).reshape(n - 1, n - 1)
        return c

    def class_coords(self, z) -> np.ndarray:
        """[z] in basis coordinates; z must be a cocycle in the span."""
        res = self.ctx.class_residue(z)
        coeffs = self._tracker.express(res)
        if coeffs is None:
            raise ValueError("not a cohomology class of this group (not a cocycle?)")
        return coeffs

    def cocycle_for(self, coords) -> np.ndarray:
        coords = asarray_mod(coords, self.p)
        n = self.group.order
        acc = np.zeros((n, n, 1), dtype=np.int16)
        for lam, b in zip(coords, self.basis):
            acc += int(lam) * b.astype(np.int16)
        return np.mod(acc, self.p).astype(np.int8)


def h2(group: FiniteGroup, max_order: int = 32) -> H2Space:
    return H2Space(group, max_order=max_order)


# ---------------------------------------------------------------------------
# central extensions and transgression


class CentralExtension:
    """The extension 1 -> N/K -> G/K -> G/N -> 1 with N/K central elementary.

    Built from a group G with normal subgroups K <= N; validates that N/K
    is central in G/K and elementary abelian of exponent p. Provides the
    factor set of the minimal section and the transgression map from
    characters of N/K to classes in H^2(G/N, F_p).

    The transgression of a character chi is the class of

        sign * chi( s(q1) s(q2) s(q1 q2)^{-1} )

    with sign = -1 by default; the sign convention is reported so callers
    can surface it alongside pairing values.
    """

    def __init__(self, group: FiniteGroup, N, K, sign: int = -1):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        self.sign = sign
        self.group = group
        self.p = group.p
        Ns = tuple(sorted(set(int(x) for x in N)))
        Ks = tuple(sorted(set(int(x) for x in K)))
        if not set(Ks) <= set(Ns):
            raise ValueError("K must be contained in N")
        if not group.is_normal(Ns) or not group.is_normal(Ks):
            raise ValueError("N and K must be normal in G")
        self.gstar, self.proj_k = group.quotient(Ks)
        self.quot, self.proj_n = group.quotient(Ns)
        # pi: G/K -> G/N, well defined because K <= N
        pi = np.zeros(self.gstar.order, dtype=np.int32)
        pi[self.proj_k] = self.proj_n
        self.pi = pi
        self.nstar = tuple(sorted(set(int(self.proj_k[x]) for x in Ns)))
        for x in self.nstar:
            bad = np.nonzero(self.gstar.table[x] != self.gstar.table[:, x])[0]
            if bad.size:
                raise ValueError("N/K is not central in G/K")
        self.fiber_basis, self.fiber_coords = self.gstar.elementary_quotient_basis(
            self.nstar, (0,)
        )
        self.rank = len(self.fiber_basis)
        # standing assumption: the fiber sits under every character of G/K,
        # i.e. N/K is contained in the second filtration term of G/K. This
        # makes transgression injective and its preimages unique.
        chars = h1_basis(self.gstar)
        if chars[list(self.nstar)].any():
            raise ValueError(
                "fiber must vanish under all characters of the total group"
            )
        self.section = self._minimal_section()
        self.factor_coords = self._factor_set_coords(self.section)

    def _minimal_section(self) -> np.ndarray:
        s = np.full(self.quot.order, self.gstar.order, dtype=np.int64)
        np.minimum.at(s, self.pi, np.arange(self.gstar.order))
        if s[0] != 0 or (s >= self.gstar.order).any():
            raise AssertionError("section construction failed")
        return s.astype(np.int32)

    def _maximal_section(self) -> np.ndarray:
        s = np.full(self.quot.order, -1, dtype=np.int64)
        np.maximum.at(s, self.pi, np.arange(self.gstar.order))
        s[0] = 0  # keep the section normalized
        return s.astype(np.int32)

    def _factor_set_coords(self, s: np.ndarray) -> np.ndarray:
        """(|Q|, |Q|, rank) coordinates of f(q1,q2) = s(q1)s(q2)s(q1q2)^-1."""
        g = self.gstar
        q = self.quot
        prod = g.table[s[:, None], s[None, :]]
        f = g.table[prod, g.inv[s[q.table]]]
        if (self.pi[f] != 0).any():
            raise AssertionError("factor set does not land in the fiber")
        out = np.zeros((q.order, q.order, self.rank), dtype=np.int8)
        for (i, j), val in np.ndenumerate(f):
            out[i, j] = self.fiber_coords[int(val)]
        return out

    def character(self, vec) -> dict:
        """Character N/K -> F_p given by a dual vector over fiber_basis.

        Returns a dict mapping each element of N* (indices in G/K) to its
        value; mainly for inspection and tests.
        """
        vec = asarray_mod(vec, self.p)
        return {
            x: int(np.dot(self.fiber_coords[x], vec) % self.p) for x in self.nstar
        }

    def transgress(self, vec, section: np.ndarray | None = None) -> np.ndarray:
        """2-cocycle on Q = G/N representing trg(chi_vec)."""
        vec = asarray_mod(vec, self.p)
        if vec.shape != (self.rank,):
            raise ValueError("character vector has wrong length")
        coords = (
            self.factor_coords
            if section is None
            else self._factor_set_coords(section)
        )
        z = np.mod(self.sign * (coords.astype(np.int16) @ vec.astype(np.int16)), self.p)
        return z.astype(np.int8)[:, :, None]

    def section_independent(self, vec) -> bool:
        """The transgressed class must not depend on the chosen section."""
        z1 = self.transgress(vec)
        z2 = self.transgress(vec, section=self._maximal_section())
        return coboundary_context(self.quot).same_class(z1, z2)

    def transgression_matrix(self) -> np.ndarray:
        """Rows: canonical class residues of trg of each dual basis vector."""
        ctx = coboundary_context(self.quot)
        rows = []
        for i in range(self.rank):
            e = np.zeros(self.rank, dtype=np.int8)
            e[i] = 1
            rows.append(ctx.class_residue(self.transgress(e)))
        if not rows:
            return np.zeros((0, ctx.ncoords), dtype=np.int8)
        return np.stack(rows)

    def transgression_preimage(self, z):
        """Character vector phi with trg(phi) = [z], or None.

        Exactness of inflation-restriction says this exists exactly when z
        inflates to a coboundary on G/K.
        """
        ctx = coboundary_context(self.quot)
        target = ctx.class_residue(z)
        mat = self.transgression_matrix()
        if self.rank == 0:
            return np.zeros(0, dtype=np.int8) if not target.any() else None
        return solve(mat.T, target, self.p)

    def inflate_to_gstar(self, z) -> np.ndarray:
        return inflate2(self.pi, normalize2(self.quot, z))

    def dies_on_gstar(self, z) -> bool:
        return coboundary_context(self.gstar).is_coboundary(self.inflate_to_gstar(z))


def five_term_exactness(ext: CentralExtension, h2_max_order: int = 32) -> dict:
    """Check the low-degree exact sequence of 1 -> N/K -> G/K -> Q -> 1.

    For the five-term sequence

        0 -> H^1(Q) -> H^1(G/K) -> Hom(N/K, F_p) -> H^2(Q) -> H^2(G/K)

    this verifies, as subspace equalities:

      * injectivity of inflation on H^1(Q),
      * ker(restriction) == im(inflation)       at H^1(G/K),
      * ker(transgression) == im(restriction)   at Hom(N/K, F_p),
      * ker(inflation) == im(transgression)     at H^2(Q).

    The last node needs an explicit H^2(Q) basis, so the quotient must fit
    under ``h2_max_order``. Raises AssertionError on any failed equality and
    returns the dimensions involved.
    """
    p = ext.p
    quot, gstar = ext.quot, ext.gstar
    chars_q = h1_basis(quot)
    chars_g = h1_basis(gstar)
    r_q, r_g, r_f = chars_q.shape[1], chars_g.shape[1], ext.rank
    m = gstar.order - 1  # coordinates of a normalized 1-cochain on G/K

    # --- node H^1(G/K): ker(res) = im(inf) -------------------------------
    inflated = chars_q[ext.pi]  # (|G/K|, r_q) columns = inflated characters
    im_inf = Subspace(p, m, inflated[1:].T)
    assert im_inf.dim == r_q, "inflation must be injective on H^1(Q)"
    if r_f:
        evals = chars_g[list(ext.fiber_basis)]  # (r_f, r_g)
    else:
        evals = np.zeros((0, r_g), dtype=np.int8)
    combos = kernel_basis(evals, p)  # coefficient vectors over H^1(G/K)
    if combos.shape[0]:
        vecs = np.mod(
            combos.astype(np.int16) @ chars_g[1:].astype(np.int16).T, p
        )
    else:
        vecs = np.zeros((0, m), dtype=np.int8)
    ker_res = Subspace(p, m, vecs)
    assert ker_res == im_inf, "exactness fails at H^1 of the total group"

    # --- node Hom(N/K, F_p): ker(trg) = im(res) ---------------------------
    im_res = Subspace(p, r_f, evals.T if r_f else None)
    trg_mat = ext.transgression_matrix()  # (r_f, ncoords of Q)
    ker_trg = Subspace(p, r_f, kernel_basis(trg_mat.T, p))
    assert ker_trg == im_res, "exactness fails at Hom(fiber)"

    # --- node H^2(Q): ker(inf) = im(trg) ----------------------------------
    space = H2Space(quot, max_order=h2_max_order)
    ctx_g = coboundary_context(gstar)
    if space.dim:
        rows = np.stack(
            [ctx_g.class_residue(inflate2(ext.pi, b)) for b in space.basis]
        )
        ker_inf2 = Subspace(p, space.dim, kernel_basis(rows.T, p))
    else:
        ker_inf2 = Subspace(p, 0)
    trg_rows = []
    for i in range(r_f):
        e = np.zeros(r_f, dtype=np.int8)
        e[i] = 1
        trg_rows.append(space.class_coords(ext.transgress(e)))
    im_trg = Subspace(p, space.dim, np.stack(trg_rows) if trg_rows else None)
    assert ker_inf2 == im_trg, "exactness fails at H^2 of the quotient"

    return {
        "h1_quot_dim": r_q,
        "h1_gstar_dim": r_g,
        "fiber_rank": r_f,
        "h2_quot_dim": space.dim,
        "ker_res_dim": ker_res.dim,
        "ker_trg_dim": ker_trg.dim,
        "ker_inf2_dim": ker_inf2.dim,
        "im_trg_dim": im_trg.dim,
    }
