"""Computational algebra for p-Zassenhaus filtrations of finite p-groups.

The package verifies, at desk scale, that the (n+1)-st term of the
p-Zassenhaus filtration of a suitable finite p-group is exactly the
intersection of the kernels of all homomorphisms into unipotent groups of
rank-n multiplicative systems, and exercises the cohomological machinery
behind that statement: Massey products via defining systems, central
extensions with their transgression, and the layer pairing that drives
constructive separation.

Layers, bottom up:

  fplinalg     dense mod-p linear algebra, subspaces, span tracking
  groups       finite group tables, quotients, the three filtration routes
  magnus       truncated free-algebra construction of the test groups
  multsys      multiplicative systems, unipotent groups U(A), the catalog
  cohomology   normalized cochains, H^1/H^2, central extensions
  massey       defining systems, Massey classes, the representation map
  pairing      layer-vs-witnessed-span pairing, five-term checks
  verifier     kernel intersection, separation engine, theorem harness
  cli          command-line surface and workspace persistence
"""

from .cohomology import (
    CentralExtension,
    CoboundaryContext,
    H2Space,
    coboundary_context,
    cup,
    d1,
    d2,
    five_term_exactness,
    h1_basis,
    h2,
)
from .fplinalg import (
    BilinearMap,
    CapExceeded,
    SpanTracker,
    Subspace,
    enumerate_vectors,
    kernel_basis,
    rank,
    rref,
)
from .groups import Filtration, FiniteGroup, cyclic_group
from .magnus import TruncatedFreeAlgebra, build_magnus_group
from .massey import (
    DefiningSystem,
    PhiAccumulator,
    count_defining_systems,
    count_defining_systems_product_formula,
    enumerate_defining_systems,
    rep_to_defining_system,
    verify_rep,
)
from .multsys import (
    Embedding,
    MultSystem,
    catalog,
    embed_lower_rank,
    group_from_system,
    unipotent_group,
)
from .pairing import (
    PairingContext,
    coker_ker_pairing,
    harvest_standard_witnesses,
    layer_context,
)
from .verifier import (
    DEFAULT_BUDGET,
    Representation,
    SeparationEngine,
    SeparationResult,
    correspondence_check,
    count_homs_brute,
    enumerate_reps,
    generating_set,
    intersect_kernels,
    lift_defining_system,
    representation_from_json,
    run_theorem_harness,
)

__version__ = "0.1.0"

__all__ = [
    "BilinearMap",
    "CapExceeded",
    "CentralExtension",
    "CoboundaryContext",
    "DEFAULT_BUDGET",
    "DefiningSystem",
    "Embedding",
    "Filtration",
    "FiniteGroup",
    "H2Space",
    "MultSystem",
    "PairingContext",
    "PhiAccumulator",
    "Representation",
    "SeparationEngine",
    "SeparationResult",
    "SpanTracker",
    "Subspace",
    "TruncatedFreeAlgebra",
    "build_magnus_group",
    "catalog",
    "coboundary_context",
    "coker_ker_pairing",
    "correspondence_check",
    "count_defining_systems",
    "count_defining_systems_product_formula",
    "count_homs_brute",
    "cup",
    "cyclic_group",
    "d1",
    "d2",
    "embed_lower_rank",
    "enumerate_defining_systems",
    "enumerate_reps",
    "enumerate_vectors",
    "five_term_exactness",
    "generating_set",
    "group_from_system",
    "h1_basis",
    "h2",
    "harvest_standard_witnesses",
    "intersect_kernels",
    "kernel_basis",
    "layer_context",
    "lift_defining_system",
    "rank",
    "rep_to_defining_system",
    "representation_from_json",
    "rref",
    "run_theorem_harness",
    "unipotent_group",
    "verify_rep",
]
