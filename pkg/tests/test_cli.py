"""End-to-end tests for the command line interface.

Every test drives ``tensurf.cli.main`` directly with an argv list and
captures stdout, which keeps the tests fast and lets us assert on exit
codes without spawning subprocesses.
"""

from __future__ import annotations

import json

import pytest

from tensurf import fixture, load_instance, parse_surfform
from tensurf.cli import main


def run_cli(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out


def run_json(capsys, argv):
    rc, out = run_cli(capsys, argv)
    return rc, json.loads(out)


# ---------------------------------------------------------------------------
# analyze-points


def test_analyze_points_json_payload(capsys):
    rc, d = run_json(capsys, ["analyze-points", "fixture:skew4",
                              "--format", "json"])
    assert rc == 0
    assert d["r"] == 4
    assert d["generic"] is True
    assert d["partitions"]["first"] == [1, 1, 1, 1]
    assert d["partitions"]["first_conjugate"] == [4]
    assert d["hilbert"][0] == [1, 2, 3, 4, 4, 4]
    assert d["stabilization"] == {"row_of_column_0": 3,
                                  "column_of_row_0": 3}
    assert d["stabilized_formulas_ok"] is True


def test_analyze_points_text_mentions_r(capsys):
    rc, out = run_cli(capsys, ["analyze-points", "fixture:skew4"])
    assert rc == 0
    assert "4" in out
    # text mode is not JSON
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


def test_analyze_points_window(capsys):
    rc, d = run_json(capsys, ["analyze-points", "fixture:skew4",
                              "--format", "json", "--window", "3", "3"])
    assert rc == 0
    assert len(d["hilbert"]) == 4
    assert len(d["hilbert"][0]) == 4


def test_global_flags_before_or_after_subcommand(capsys):
    rc1, d1 = run_json(capsys, ["--format", "json",
                                "analyze-points", "fixture:skew4"])
    rc2, d2 = run_json(capsys, ["analyze-points", "fixture:skew4",
                                "--format", "json"])
    assert rc1 == rc2 == 0
    assert d1 == d2


# ---------------------------------------------------------------------------
# ideal-basis / mu-basis


def test_ideal_basis_skew4(capsys):
    rc, d = run_json(capsys, ["ideal-basis", "fixture:skew4",
                              "--format", "json"])
    assert rc == 0
    assert d["r"] == 4
    assert d["a"] == 2
    assert d["dimension"] == 2
    assert d["generator_degrees"] == [[2, 1], [2, 1]]
    assert len(d["basis"]) == 2


def test_mu_basis_r2a3(capsys):
    rc, d = run_json(capsys, ["mu-basis", "fixture:r2_a3",
                              "--format", "json"])
    assert rc == 0
    assert sorted(d["mu_degrees"]) == [2, 2]
    assert len(d["K1"]) == 4
    assert len(d["K2"]) == 4


# ---------------------------------------------------------------------------
# implicitize


def test_implicitize_matches_library(capsys, r2a3_out):
    rc, d = run_json(capsys, ["implicitize", "fixture:r2_a3",
                              "--format", "json"])
    assert rc == 0
    assert d["degree"] == 4
    assert sorted(d["mu_degrees"]) == [2, 2]
    got = parse_surfform(d["H"], d["degree"])
    assert got.normalized().terms == r2a3_out.result.H.normalized().terms
    assert d["verification"]["ok"] is True
    assert d["power_screen"]["suspect"] is False
    assert "timings_ms" not in d


def test_implicitize_same_seed_byte_identical(capsys):
    argv = ["implicitize", "fixture:r2_a3", "--format", "json"]
    rc1, out1 = run_cli(capsys, argv)
    rc2, out2 = run_cli(capsys, argv)
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_implicitize_timings_flag(capsys):
    rc, d = run_json(capsys, ["implicitize", "fixture:r2_a3",
                              "--format", "json", "--timings"])
    assert rc == 0
    assert "timings_ms" in d
    assert "determinant" in d["timings_ms"]


def test_implicitize_print_cap(capsys):
    rc, out = run_cli(capsys, ["implicitize", "fixture:r2_a3",
                               "--print-cap", "5"])
    assert rc == 0
    assert "suppressed" in out


def test_implicitize_out_then_verify(capsys, tmp_path):
    path = tmp_path / "result.json"
    rc, _ = run_cli(capsys, ["implicitize", "fixture:r2_a3",
                             "--out", str(path)])
    assert rc == 0
    data = json.loads(path.read_text())
    assert "H" in data and "degree" in data

    rc, _ = run_cli(capsys, ["verify", "fixture:r2_a3", str(path)])
    assert rc == 0

    # corrupt the stored equation; verification must now fail
    data["H"] = "X"
    data["degree"] = 1
    path.write_text(json.dumps(data))
    rc, _ = run_cli(capsys, ["verify", "fixture:r2_a3", str(path)])
    assert rc == 1


# ---------------------------------------------------------------------------
# membership


def test_membership_on_and_off(capsys):
    # image of the parameterization at ((1,2),(1,3))
    rc, d = run_json(capsys, ["membership", "fixture:r2_a3",
                              "--point", "11,24,-30,-2",
                              "--format", "json"])
    assert rc == 0
    assert d["verdict"] == "on_surface"

    rc, d = run_json(capsys, ["membership", "fixture:r2_a3",
                              "--point", "1,1,1,1",
                              "--format", "json"])
    assert rc == 0
    assert d["verdict"] == "off_surface"


def test_membership_bad_point(capsys):
    rc, _ = run_cli(capsys, ["membership", "fixture:r2_a3",
                             "--point", "1,2,three,4"])
    assert rc == 2
    rc, _ = run_cli(capsys, ["membership", "fixture:r2_a3",
                             "--point", "1,2,3"])
    assert rc == 2


# ---------------------------------------------------------------------------
# random-instance


def test_random_instance_roundtrip(capsys, tmp_path):
    path = tmp_path / "inst.json"
    rc, _ = run_cli(capsys, ["random-instance", "--r", "2", "--a", "3",
                             "--out", str(path)])
    assert rc == 0
    inst = load_instance(str(path))
    assert inst.a == 3
    assert len(inst.points) == 2


# ---------------------------------------------------------------------------
# bench


def test_bench_tiny_agreement(capsys):
    rc, d = run_json(capsys, ["bench", "--a", "1", "--r", "0",
                              "--format", "json"])
    assert rc == 0
    assert d["agree"] is True
    assert d["instance"] == {"r": 0, "a": 1}
    for name in ("alg1", "alg2"):
        assert "d1_ms" in d["methods"][name]
        assert "full_ms" in d["methods"][name]


def test_bench_requires_instance_or_a(capsys):
    rc, _ = run_cli(capsys, ["bench"])
    assert rc == 2


# ---------------------------------------------------------------------------
# error handling


def test_missing_instance_file(capsys):
    rc, _ = run_cli(capsys, ["analyze-points", "/nonexistent/inst.json"])
    assert rc == 2


def test_unknown_fixture(capsys):
    rc, _ = run_cli(capsys, ["analyze-points", "fixture:nope"])
    assert rc == 2


def test_non_generic_points_exit_one(capsys, tmp_path):
    # four collinear-type points: large enough a for a full subspace, so
    # the failure is the genericity check rather than a dimension error
    from tensurf import Instance, save_instance

    bad = Instance(points=fixture("diag4").points, a=3, seed=0)
    path = tmp_path / "bad.json"
    save_instance(bad, str(path))
    rc, _ = run_cli(capsys, ["implicitize", str(path)])
    assert rc == 1


def test_usage_error_raises_systemexit():
    with pytest.raises(SystemExit) as exc:
        main(["implicitize"])  # missing instance argument
    assert exc.value.code == 2


def test_unknown_subcommand_raises_systemexit():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
