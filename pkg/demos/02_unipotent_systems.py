"""Multiplicative systems and their unipotent groups.

A multiplicative system assigns a vector space to each cell (i, j) of a
strictly upper-triangular shape and a bilinear composition to each
composable pair of cells. Its unipotent group U(A) consists of formal
unitriangular matrices with those blocks. This demo walks the catalog of
small systems, shows the block arithmetic, and verifies the two structural
facts the rest of the library leans on: commutators add levels, and the
filtration of U(A) stops exactly at the rank.
"""

import numpy as np

from zassenhaus import catalog, group_from_system


def main():
    print("catalog of rank-2 systems over F_2, all spaces one-dimensional:")
    for system in catalog(2, 2, 1):
        print(f"    digest {system.digest[:12]}, dims "
              f"{ {k: v for k, v in sorted(system.dims.items())} }, "
              f"composition tensor sum {int(sum(t.sum() for t in system.tensors.values()))}")

    # pick the standard rank-3 system over F_2 and play with elements
    system = next(iter(catalog(2, 3, 1)))
    print(f"\nstandard rank-3 system over F_2: total dimension "
          f"{system.total_dim}, |U(A)| = {2 ** system.total_dim}")

    rng = np.random.default_rng(7)
    u = np.zeros(system.total_dim, dtype=np.int8)
    v = np.zeros(system.total_dim, dtype=np.int8)
    u[system.level_mask(1)] = rng.integers(0, 2, int(system.level_mask(1).sum()))
    v[system.level_mask(2)] = rng.integers(0, 2, int(system.level_mask(2).sum()))
    print(f"u has level {system.v_level(u)}, v has level {system.v_level(v)}")
    comm = system.u_comm(u, v)
    print(f"[u, v] has level {system.v_level(comm)} "
          f"(>= {system.v_level(u) + system.v_level(v)} as required)")
    sq = system.u_pow(u, 2)
    print(f"u^2 has level {system.v_level(sq)} (>= 2 * level(u))")

    # the finite group U(A) and its corner-free quotient
    u_grp = group_from_system(system)
    ubar = group_from_system(system, bar=True)
    fu = u_grp.zassenhaus_recursive()
    fb = ubar.zassenhaus_recursive()
    print(f"\nU(A): order {u_grp.order}, filtration orders {fu.orders()}")
    print(f"    term {system.n + 1} is trivial: {fu.term(system.n + 1) == (0,)}")
    print(f"U(A) mod corner: order {ubar.order}, filtration orders {fb.orders()}")
    print(f"    term {system.n} is trivial: {fb.term(system.n) == (0,)}")


if __name__ == "__main__":
    main()
