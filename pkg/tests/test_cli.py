import io
import json
import sys

import pytest

from rinehart import presets
from rinehart.cli import (
    ReportTable,
    SpecFileError,
    main,
    parse_spec,
    presentation_from_dict,
    serialize,
)
from rinehart.lie_rinehart import check_axioms


def run_cli(argv):
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


def test_round_trip_serialization():
    for alg in (presets.weyl(2), presets.lie("sl2"),
                presets.arrangement(["x", "y", "y-x", "y+x"])):
        data = serialize(alg)
        back = presentation_from_dict(data)
        assert back.vars == alg.vars
        assert back.basis == alg.basis
        assert back.weights == alg.weights
        assert back.anchor == alg.anchor
        assert back.structure == alg.structure


def test_spec_file_parsing(tmp_path):
    spec = {
        "vars": ["x"],
        "rank": 1,
        "basis": ["e"],
        "anchor": [["1"]],
        "bracket": {},
        "weights": {"x": 1, "e": 1},
    }
    path = tmp_path / "weyl.json"
    path.write_text(json.dumps(spec))
    alg = parse_spec(str(path))
    assert check_axioms(alg).ok
    assert alg.anchor[0].images[0] == alg.one()


def test_spec_file_sl2(tmp_path):
    spec = {
        "vars": [],
        "rank": 3,
        "basis": ["e", "f", "h"],
        "anchor": [[], [], []],
        "bracket": {"0,1": ["0", "0", "1"], "0,2": ["-2", "0", "0"], "1,2": ["0", "2", "0"]},
        "weights": {"e": 1, "f": 1, "h": 1},
    }
    path = tmp_path / "sl2.json"
    path.write_text(json.dumps(spec))
    alg = parse_spec(str(path))
    assert check_axioms(alg).ok


def test_malformed_diagonal_bracket_rejected():
    with pytest.raises(SpecFileError, match="antisymmetry"):
        presentation_from_dict({
            "vars": ["x"],
            "rank": 2,
            "basis": ["a", "b"],
            "anchor": [["0"], ["0"]],
            "bracket": {"1,1": ["1", "0"]},
        })


def test_exit_code_two_on_bad_input(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run_cli(["--spec-file", str(bad), "check"])
    assert code == 2
    code, _ = run_cli(["--algebra", "unknown(3)", "check"])
    assert code == 2


def test_exit_code_zero_on_passing_check():
    code, out = run_cli(["--algebra", "weyl(1)", "check", "--ruth-cap", "2"])
    assert code == 0
    payload = json.loads(out)
    assert all(c["ok"] for c in payload["checks"])


def test_exit_code_one_on_failing_check(tmp_path):
    # sl2 with a flipped sign fails Jacobi
    spec = {
        "vars": [],
        "rank": 3,
        "basis": ["e", "f", "h"],
        "anchor": [[], [], []],
        "bracket": {"0,1": ["0", "0", "1"], "0,2": ["2", "0", "0"], "1,2": ["0", "2", "0"]},
    }
    path = tmp_path / "bad_sl2.json"
    path.write_text(json.dumps(spec))
    code, out = run_cli(["--spec-file", str(path), "check"])
    assert code == 1
    payload = json.loads(out)
    assert any(not c["ok"] for c in payload["checks"])
    assert any("Jacobi" in c["detail"] for c in payload["checks"] if not c["ok"])


def test_cohomology_command_values():
    code, out = run_cli([
        "--algebra", "weyl(1)", "poisson-cohomology",
        "--max-weight", "8", "--max-degree", "2",
    ])
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["totals_by_degree"] == {"0": 1, "1": 0, "2": 0}


def test_homology_and_cyclic_commands():
    code, out = run_cli(["--algebra", "weyl(1)", "poisson-homology", "--max-weight", "8"])
    assert code == 0
    assert json.loads(out)["summary"]["totals_by_degree"] == {"0": 0, "1": 0, "2": 1}
    code, out = run_cli(["--algebra", "weyl(1)", "cyclic", "--max-weight", "8", "--u-cap", "3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["summary"]["stabilized"] is True
    totals = payload["summary"]["totals_by_degree"]
    assert totals.get("2") == 1 and totals.get("4") == 1 and "3" not in totals


def test_center_command():
    code, out = run_cli([
        "--algebra", "lie(sl2)", "center", "--filtration-cap", "2", "--max-weight", "2",
    ])
    assert code == 0
    assert json.loads(out)["summary"]["dimension"] == 2


def test_verify_pbw_command_deterministic():
    argv = ["--algebra", "weyl(1)", "--seed", "7", "verify", "pbw", "--samples", "20"]
    code1, out1 = run_cli(argv)
    code2, out2 = run_cli(argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_reports_byte_identical_across_runs():
    argv = ["--algebra", "lie(sl2)", "--seed", "3", "verify", "quasi", "--samples", "6"]
    outs = {run_cli(argv)[1] for _ in range(2)}
    assert len(outs) == 1


def test_csv_output_fixed_columns():
    code, out = run_cli([
        "--algebra", "weyl(1)", "--out", "csv", "poisson-cohomology",
        "--max-weight", "2", "--max-degree", "1",
    ])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "complex,weight,degree,dimension"
    assert lines[1].startswith("poisson-cochain,0,0,")


def test_ce_command_sl2():
    code, out = run_cli([
        "--algebra", "lie(sl2)", "ce", "--module", "trivial",
        "--max-weight", "0", "--max-degree", "3",
    ])
    assert code == 0
    rows = json.loads(out)["rows"]
    dims = {(r["weight"], r["degree"]): r["dimension"] for r in rows}
    assert [dims.get((0, m), 0) for m in range(4)] == [1, 0, 0, 1]
