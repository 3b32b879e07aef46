"""Tests for the kernel-intersection engine, separation, and harness.

Frozen counts (representation totals, kernel multisets, separation
tallies) were computed once from the implementation after cross-checking
each against an independent route: representation counts against the
cohomological census (vanishing Massey classes x corner-character
freedom), hom counts against brute-force generator-image search, and
kernel intersections against the recursively computed filtration.
"""

import json

import numpy as np
import pytest

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from collections import Counter

from zassenhaus.fplinalg import CapExceeded
from zassenhaus.groups import cyclic_group
from zassenhaus.magnus import build_magnus_group
from zassenhaus.massey import enumerate_defining_systems
from zassenhaus.multsys import MultSystem, catalog, unipotent_group
from zassenhaus.verifier import (
    SeparationEngine,
    correspondence_check,
    count_homs_brute,
    enumerate_reps,
    generating_set,
    intersect_kernels,
    lift_defining_system,
    representation_from_json,
    run_theorem_harness,
)


@pytest.fixture(scope="module")
def z4():
    return cyclic_group(2, 4)


@pytest.fixture(scope="module")
def m224():
    return build_magnus_group(2, 2, 4)


@pytest.fixture(scope="module")
def h27():
    return build_magnus_group(3, 2, 3)


# ---------------------------------------------------------------------------
# brute-force hom counting


def test_count_homs_brute_cyclic_endomorphisms(z4):
    # endomorphisms of Z/4 are x -> k*x, one per k
    assert count_homs_brute(z4, z4) == 4


def test_count_homs_brute_h27_endomorphisms(h27):
    # frozen: 729 endomorphisms of the order-27 exponent-3 group
    assert count_homs_brute(h27, h27) == 729


def test_count_homs_budget(z4, h27):
    with pytest.raises(CapExceeded):
        count_homs_brute(h27, h27, budget=10)
    assert count_homs_brute(z4, z4, budget=16) == 4


def test_generating_set_declared_and_greedy(z4, m224):
    assert generating_set(z4) == [1]
    gens = generating_set(m224)
    assert len(gens) == 2
    assert sorted(m224.closure(gens)) == list(range(m224.order))


# ---------------------------------------------------------------------------
# defining systems <-> Ubar homomorphisms


def test_correspondence_z4_standard(z4):
    cc = correspondence_check(z4, MultSystem.standard(2, 2))
    assert cc["defining_systems"] == 4
    assert cc["ubar_homs"] == 4
    assert cc["bijection"] is True
    assert cc["obstruction_dichotomy"] is True
    assert cc["massey_vanishing"] == 4
    assert cc["method"] == "batched"


def test_correspondence_fast_matches_reference(z4, h27):
    m222 = build_magnus_group(2, 2, 2)
    cells = [(z4, 2), (z4, 3), (m222, 2), (m222, 3), (h27, 2)]
    keys = [
        "defining_systems",
        "ubar_homs",
        "bijection",
        "obstruction_dichotomy",
        "massey_vanishing",
    ]
    for grp, n in cells:
        for sys_ in catalog(grp.p, n, 1):
            fast = correspondence_check(grp, sys_, method="fast")
            ref = correspondence_check(grp, sys_, method="reference")
            assert {k: fast[k] for k in keys} == {k: ref[k] for k in keys}


def test_correspondence_mixed_vanishing_counts():
    # frozen: the rank-3 catalog over F_2 on the order-8 magnus group
    # produces these (defining systems, vanishing) profiles: families
    # where the two level-two slots interact give strictly fewer
    # vanishing classes than defining systems.
    m222 = build_magnus_group(2, 2, 2)
    profiles = Counter()
    for sys_ in catalog(2, 3, 1):
        cc = correspondence_check(m222, sys_)
        assert cc["bijection"] and cc["obstruction_dichotomy"]
        profiles[(cc["defining_systems"], cc["massey_vanishing"])] += 1
    assert profiles == Counter(
        {
            (304, 112): 1,
            (1024, 1024): 1,
            (448, 448): 2,
            (1024, 448): 2,
            (448, 304): 2,
            (1024, 256): 1,
            (304, 304): 1,
        }
    )


def test_correspondence_h27_rank3_batched(h27):
    # the cell that is infeasible object-by-object: every rank-3 catalog
    # system over F_3 has 59049 defining systems, bijective with homs
    for sys_ in list(catalog(3, 3, 1))[:3]:
        cc = correspondence_check(h27, sys_)
        assert cc["defining_systems"] == 59049
        assert cc["ubar_homs"] == 59049
        assert cc["bijection"] and cc["obstruction_dichotomy"]
        assert cc["method"] == "batched"
        assert cc["deep_checked"] >= 2


def test_correspondence_method_validation(z4):
    with pytest.raises(ValueError):
        correspondence_check(z4, MultSystem.standard(2, 2), method="guess")


# ---------------------------------------------------------------------------
# representation enumeration


def test_enumerate_reps_z4_standard(z4):
    reps = list(enumerate_reps(z4, MultSystem.standard(2, 2)))
    assert len(reps) == 8
    for rep in reps:
        rep.validate()
    # frozen kernel census: two faithful, one trivial, five killing g^2
    census = Counter(rep.kernel() for rep in reps)
    assert census == Counter({(0,): 2, (0, 1, 2, 3): 1, (0, 2): 5})


def test_lift_of_all_zero_defining_system(z4):
    ds = next(iter(enumerate_defining_systems(z4, MultSystem.standard(2, 2))))
    rep = lift_defining_system(ds)
    assert rep is not None and not rep.any()


def test_representation_json_round_trip(z4):
    reps = list(enumerate_reps(z4, MultSystem.standard(2, 2)))
    rep = reps[3]
    back = representation_from_json(z4, rep.to_json())
    assert np.array_equal(back.matrix, rep.matrix)
    assert back.bar == rep.bar
    back.validate()


# ---------------------------------------------------------------------------
# kernel intersections


def test_intersect_kernels_z4(z4):
    report = intersect_kernels(z4, 2)
    assert report["intersection"] == [0]
    assert report["filtration_term"] == [0]
    assert report["match"] is True
    assert report["standard_sufficed"] is True
    assert report["reps_enumerated"] == 8
    assert report["truncated"] is False
    assert report["verdict"] == "established"


def test_intersect_kernels_rank1_equals_second_term():
    groups = [
        build_magnus_group(2, 2, 2),
        build_magnus_group(2, 2, 3),
        build_magnus_group(3, 2, 3),
        cyclic_group(2, 4),
        unipotent_group(2, 3),
    ]
    for grp in groups:
        report = intersect_kernels(grp, 1)
        assert report["match"] is True
        assert report["verdict"] == "established"
        term2 = sorted(grp.zassenhaus_recursive().term(2))
        assert report["intersection"] == term2


def test_intersect_kernels_budget_truncation(z4):
    report = intersect_kernels(z4, 2, budget=3)
    assert report["truncated"] is True
    assert report["match"] is False
    assert report["reps_enumerated"] == 3
    assert report["verdict"].startswith("inconclusive")
    # universal inclusion still holds on the partial intersection
    assert set(report["filtration_term"]) <= set(report["intersection"])


def test_intersect_kernels_universal_inclusion_over_catalog(m224):
    report = intersect_kernels(m224, 2)
    assert report["match"] is True
    assert len(report["intersection"]) == 4
    assert report["standard_sufficed"] is True
    assert report["reps_enumerated"] == 64


# ---------------------------------------------------------------------------
# separation


def test_separate_z4_all_elements(z4):
    engine = SeparationEngine(z4, 2)
    res1 = engine.separate(1)
    assert res1.status == "separated"
    assert res1.detail["route"] == "character"
    assert res1.representation is not None
    assert res1.representation.matrix[1].any()

    res2 = engine.separate(2)
    assert res2.status == "separated"
    assert res2.detail["route"] == "pairing"
    assert res2.detail["pairing_value"] == 1
    assert res2.representation.matrix[2].any()
    res2.representation.validate()

    tally = engine.separate_all()
    assert tally["elements_outside"] == 3
    assert tally["separated"] == 3
    assert tally["by_layer"] == {"1": 2, "2": 1}
    assert tally["all_separated"] is True


def test_separate_identity_and_deep_elements(m224):
    engine = SeparationEngine(m224, 2)
    assert engine.separate(0).status == "in_kernel"
    term3 = m224.zassenhaus_recursive().term(3)
    inner = [g for g in term3 if g != 0][0]
    res = engine.separate(inner)
    assert res.status == "in_kernel"
    assert "filtration term 3" in res.detail["reason"]


def test_separate_all_m224(m224):
    engine = SeparationEngine(m224, 2)
    tally = engine.separate_all()
    assert tally["elements_outside"] == 124
    assert tally["separated"] == 124
    assert tally["inconclusive"] == 0
    assert tally["by_layer"] == {"1": 96, "2": 28}
    assert tally["all_separated"] is True


# ---------------------------------------------------------------------------
# the full harness


def _strip_timings(doc):
    if isinstance(doc, dict):
        return {k: _strip_timings(v) for k, v in doc.items() if k != "timings"}
    if isinstance(doc, list):
        return [_strip_timings(v) for v in doc]
    return doc


def test_harness_m224(m224):
    report = run_theorem_harness(
        m224, 2, group_meta={"kind": "magnus", "p": 2, "d": 2, "m": 4}
    )
    assert report["verdict"] == "established"
    assert report["filtration"]["orders"] == [128, 32, 4, 1]
    assert report["filtration"]["three_way_agree"] is True
    assert report["hypothesis"]["status"] == "verified"
    assert report["kernels"]["1"]["reps_enumerated"] == 4
    assert report["kernels"]["2"]["reps_enumerated"] == 64
    assert report["kernels"]["2"]["match"] is True
    assert len(report["kernels"]["2"]["intersection"]) == 4
    assert report["kernel_side"] == "established"
    assert report["pairing_side"] == "established"
    pairing = report["pairings"]["2"]
    assert pairing["matrix"] == [[0, 0, 1], [1, 0, 0], [1, 1, 1]]
    assert pairing["witness_escalation"]["standard_sufficed"] is True
    assert pairing["five_term"]["im_trg_dim"] == 3
    assert report["separation"]["by_layer"] == {"1": 96, "2": 28}
    assert report["trg_sign"] == -1


def test_harness_h27(h27):
    report = run_theorem_harness(
        h27, 2, group_meta={"kind": "magnus", "p": 3, "d": 2, "m": 3}
    )
    assert report["verdict"] == "established"
    assert report["filtration"]["orders"] == [27, 3, 1]
    assert report["kernels"]["2"]["reps_enumerated"] == 729
    assert report["kernels"]["2"]["intersection"] == [0]
    assert report["separation"]["by_layer"] == {"1": 24, "2": 2}
    assert report["pairings"]["2"]["matrix"] == [[2]]
    assert report["hypothesis"]["status"] == "verified"


def test_harness_deterministic(z4):
    reports = [
        json.dumps(
            _strip_timings(
                run_theorem_harness(
                    cyclic_group(2, 4),
                    2,
                    group_meta={"kind": "cyclic", "p": 2, "order": 4},
                )
            ),
            sort_keys=True,
        ).encode()
        for _ in range(2)
    ]
    assert reports[0] == reports[1]


def test_harness_rejects_bad_rank(z4):
    with pytest.raises(ValueError):
        run_theorem_harness(z4, 0)
