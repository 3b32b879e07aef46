"""Tests for the command-line surface and workspace persistence."""

import json

import numpy as np
import pytest

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from zassenhaus.cli import (
    EXIT_CAP,
    EXIT_ESTABLISHED,
    EXIT_INCONCLUSIVE,
    EXIT_UNKNOWN_ID,
    EXIT_USAGE,
    UsageError,
    build_group_from_spec,
    canonical_group_spec,
    main,
    parse_element_word,
)
from zassenhaus.magnus import build_magnus_group


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def ws(tmp_path):
    return str(tmp_path / "ws")


def build(capsys, ws, *argv):
    code, out, err = run_cli(capsys, "group-build", *argv, "--workspace", ws)
    assert code == EXIT_ESTABLISHED, err
    return out.splitlines()[0].split()[1]  # digest prefix printed first


# ---------------------------------------------------------------------------
# specs and words


def test_canonical_spec_normalizes_and_validates():
    spec = canonical_group_spec({"kind": "magnus", "p": "2", "d": 2, "m": 4})
    assert spec == {"kind": "magnus", "p": 2, "d": 2, "m": 4}
    with pytest.raises(UsageError):
        canonical_group_spec({"kind": "nonsense"})
    with pytest.raises(UsageError):
        canonical_group_spec({"kind": "magnus", "p": 2, "d": 2})


def test_word_parser_products_powers_commutators():
    group = build_magnus_group(2, 2, 4)
    x1, x2 = group.generators
    assert parse_element_word(group, "x1") == x1
    assert parse_element_word(group, "x1*x2") == group.mul(x1, x2)
    assert parse_element_word(group, "x1 x2") == group.mul(x1, x2)
    assert parse_element_word(group, "x1^2") == group.power(x1, 2)
    assert parse_element_word(group, "x1^-1") == group.inverse(x1)
    assert parse_element_word(group, "[x1,x2]") == group.comm(x1, x2)
    assert parse_element_word(group, "(x1*x2)^2") == group.power(
        group.mul(x1, x2), 2
    )
    assert parse_element_word(group, "[x1,x2]*x1^2") == group.mul(
        group.comm(x1, x2), group.power(x1, 2)
    )
    assert parse_element_word(group, "x1^0") == 0


@pytest.mark.parametrize(
    "bad", ["", "x9", "[x1", "x1^x2", "x1)", "y1", "[x1,x2]]"]
)
def test_word_parser_rejects(bad):
    group = build_magnus_group(2, 2, 4)
    with pytest.raises(UsageError):
        parse_element_word(group, bad)


def test_build_group_from_spec_round_trip():
    spec = {"kind": "magnus", "p": 2, "d": 2, "m": 3}
    g1 = build_group_from_spec(spec)
    g2 = build_group_from_spec(canonical_group_spec(spec))
    assert g1._digest == g2._digest
    assert g1.order == 32


def test_matrix_unipotent_with_generators():
    spec = {
        "kind": "matrix-unipotent",
        "p": 2,
        "size": 3,
        "generators": [[[1, 0, 1], [0, 1, 0], [0, 0, 1]]],
    }
    group = build_group_from_spec(spec)
    assert group.order == 2  # the central element generates Z/2
    full = build_group_from_spec({"kind": "matrix-unipotent", "p": 2, "size": 3})
    assert full.order == 8


# ---------------------------------------------------------------------------
# commands, exit codes, persistence


def test_group_build_stores_content_addressed(capsys, ws):
    gid = build(capsys, ws, "--kind", "magnus", "--p", "2", "--gens", "2", "--trunc", "3")
    files = list((Path(ws) / "groups").glob("*.json"))
    assert len(files) == 1
    doc = json.loads(files[0].read_text())
    assert files[0].stem == doc["digest"]
    assert doc["digest"].startswith(gid)
    assert doc["spec"] == {"kind": "magnus", "p": 2, "d": 2, "m": 3}
    assert doc["filtration_orders"] == [32, 8, 1]
    # round-trip: the stored spec rebuilds to the same group
    assert build_group_from_spec(doc["spec"])._digest == doc["digest"]


def test_filtration_three_way_verdict(capsys, ws):
    gid = build(capsys, ws, "--kind", "magnus", "--p", "2", "--gens", "2", "--trunc", "3")
    code, out, _ = run_cli(capsys, "filtration", gid, "--workspace", ws)
    assert code == EXIT_ESTABLISHED
    assert "orders: [32, 8, 1]" in out
    assert "verdict: 3-way agree" in out
    # cached file exists and a rerun re-verifies against it
    cache = list((Path(ws) / "reports").glob("filtration-*.json"))
    assert len(cache) == 1
    code2, out2, _ = run_cli(capsys, "filtration", gid, "--workspace", ws)
    assert code2 == EXIT_ESTABLISHED and "3-way agree" in out2


def test_filtration_degree_needs_grading(capsys, ws):
    gid = build(capsys, ws, "--kind", "cyclic", "--p", "2", "--order", "4")
    code, _, err = run_cli(
        capsys, "filtration", gid, "--algorithm", "degree", "--workspace", ws
    )
    assert code == EXIT_USAGE and "graded" in err
    code, out, _ = run_cli(capsys, "filtration", gid, "--workspace", ws)
    assert code == EXIT_ESTABLISHED
    assert "2-way agree (degree route unavailable)" in out


def test_verify_cyclic_established(capsys, ws):
    gid = build(capsys, ws, "--kind", "cyclic", "--p", "2", "--order", "4")
    code, out, _ = run_cli(
        capsys, "verify", gid, "--rank-n", "2", "--format", "json", "--workspace", ws
    )
    assert code == EXIT_ESTABLISHED
    payload = json.loads(out)
    assert payload["verdict"] == "established"
    assert payload["kernels"]["2"]["intersection"] == [0]
    # report artifact reloads to the same value (round-trip invariant)
    reports = list((Path(ws) / "reports").glob("verify-*.json"))
    assert len(reports) == 1
    stored = json.loads(reports[0].read_text())
    assert stored["result"] == payload
    # systems used are persisted content-addressed
    systems = list((Path(ws) / "systems").glob("*.json"))
    assert systems, "verify must persist the systems it used"
    for f in systems:
        assert json.loads(f.read_text())  # valid JSON
        assert len(f.stem) == 64


def test_separate_commutator(capsys, ws):
    gid = build(capsys, ws, "--kind", "magnus", "--p", "2", "--gens", "2", "--trunc", "4")
    code, out, _ = run_cli(
        capsys,
        "separate", gid, "[x1,x2]", "--rank-n", "2",
        "--format", "json", "--workspace", ws,
    )
    assert code == EXIT_ESTABLISHED
    payload = json.loads(out)
    assert payload["status"] == "separated"
    assert any(payload["image_of_element"])
    assert payload["detail"]["route"] == "pairing"


def test_separate_element_inside_deep_term(capsys, ws):
    gid = build(capsys, ws, "--kind", "magnus", "--p", "2", "--gens", "2", "--trunc", "4")
    code, out, _ = run_cli(
        capsys,
        "separate", gid, "[[x1,x2],x1]", "--rank-n", "2",
        "--format", "json", "--workspace", ws,
    )
    assert code == EXIT_ESTABLISHED
    payload = json.loads(out)
    assert payload["status"] == "in_kernel"


def test_pairing_default_and_custom_layer(capsys, ws):
    gid = build(capsys, ws, "--kind", "magnus", "--p", "2", "--gens", "2", "--trunc", "4")
    code, out, _ = run_cli(
        capsys, "pairing", gid, "--rank-n", "2", "--format", "json", "--workspace", ws
    )
    assert code == EXIT_ESTABLISHED
    payload = json.loads(out)
    assert payload["matrix"] == [[0, 0, 1], [1, 0, 0], [1, 1, 1]]
    assert payload["left"] == "established"
    assert payload["right"] == "established"

    # custom layer: the normal subgroup generated by the third filtration
    # term together with x1^2 (one new layer dimension above term 3)
    code, out, _ = run_cli(
        capsys,
        "pairing", gid, "--rank-n", "2",
        "--subgroup", "[[x1,x2],x1];[[x1,x2],x2];x1^2",
        "--format", "json", "--workspace", ws,
    )
    assert code == EXIT_ESTABLISHED
    payload = json.loads(out)
    assert payload["layer_selector"]["kind"] == "custom"
    assert payload["layer_order"] == 8
    assert payload["layer_rank"] == 1
    assert payload["matrix"] == [[1]]

    # a non-normal custom subgroup is a precondition violation
    code, _, err = run_cli(
        capsys, "pairing", gid, "--rank-n", "2", "--subgroup", "x1^2",
        "--workspace", ws,
    )
    assert code == EXIT_USAGE and "normal" in err


def test_exit_codes_unknown_cap_usage(capsys, ws):
    Path(ws).mkdir(parents=True, exist_ok=True)
    code, _, err = run_cli(capsys, "filtration", "deadbeef", "--workspace", ws)
    assert code == EXIT_UNKNOWN_ID and "deadbeef" in err

    code, _, err = run_cli(
        capsys,
        "group-build", "--kind", "magnus", "--p", "2", "--gens", "3",
        "--trunc", "6", "--workspace", ws,
    )
    assert code == EXIT_CAP

    code, _, err = run_cli(capsys, "group-build", "--workspace", ws)
    assert code == EXIT_USAGE

    code, _, err = run_cli(
        capsys, "group-build", "--spec-json", '{"kind":"weird"}', "--workspace", ws
    )
    assert code == EXIT_USAGE

    gid = build(capsys, ws, "--kind", "cyclic", "--p", "2", "--order", "4")
    code, _, err = run_cli(
        capsys, "separate", gid, "x9", "--rank-n", "2", "--workspace", ws
    )
    assert code == EXIT_USAGE

    code, _, err = run_cli(
        capsys, "verify", gid, "--rank-n", "2", "--jobs", "0", "--workspace", ws
    )
    assert code == EXIT_USAGE


def test_ambiguous_group_prefix(capsys, ws):
    build(capsys, ws, "--kind", "cyclic", "--p", "2", "--order", "4")
    build(capsys, ws, "--kind", "cyclic", "--p", "2", "--order", "8")
    code, _, err = run_cli(capsys, "filtration", "", "--workspace", ws)
    assert code == EXIT_UNKNOWN_ID and "ambiguous" in err
