"""Command-line contract: flags, exit codes, persisted artifacts."""

import json
import subprocess
import sys

import pytest

from unitrack.cli import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from unitrack.manifest import CSV_HEADER, load_manifest


@pytest.fixture(scope="module")
def cli_out(tmp_path_factory):
    """One persisted depth-3 run shared by the inspection tests."""
    out = tmp_path_factory.mktemp("cli_run")
    code = main(
        [
            "run",
            "--depth",
            "3",
            "--theta-max",
            "0.05",
            "--grid",
            "201",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    return out


# ---------------------------------------------------------------- artifacts


def test_run_writes_everything(cli_out):
    names = {p.name for p in cli_out.iterdir()}
    assert {f"depth_{d}.csv" for d in range(4)} <= names
    assert "manifest.json" in names
    assert "curves.svg" in names
    # report figures land next to the delimited output
    assert "curves.png" in names and "metrics.png" in names


def test_csv_schema(cli_out):
    lines = (cli_out / "depth_2.csv").read_text().splitlines()
    assert lines[0] == CSV_HEADER == "t,x,y,tx,ty,speed,curvature"
    man = load_manifest(cli_out / "manifest.json")
    assert len(lines) - 1 == man["metrics"][2]["sample_count"]
    for line in lines[1:6]:
        fields = line.split(",")
        assert len(fields) == 7
        t, x, y, tx, ty, speed, curv = map(float, fields)
        assert 0.0 <= t <= 1.0
        assert abs(tx * tx + ty * ty - 1.0) <= 1e-12
        assert speed > 0.0
        # 17 significant digits: formatting the parsed value reproduces the text
        for text, val in zip(fields, (t, x, y, tx, ty, speed, curv)):
            assert f"%.17g" % val == text


def test_manifest_contents(cli_out):
    man = load_manifest(cli_out / "manifest.json")
    cfg = man["config"]
    assert cfg["seed"] == {"kind": "finn_bump", "amplitude": 4.0, "power": 2}
    assert cfg["depth_max"] == 3
    assert cfg["theta_max"] == 0.05
    assert cfg["grid"] == 201
    assert man["csv_files"] == [f"depth_{d}.csv" for d in range(4)]
    assert len(man["metrics"]) == 4
    assert {r["claim_id"] for r in man["reports"]} == {
        r["claim_id"] for r in man["reports"]
    }
    assert len(man["reports"]) == 11
    assert len(man["wall_clock_seconds"]) == 4


def test_svg_structure(cli_out):
    svg = (cli_out / "curves.svg").read_text()
    for d in range(4):
        assert f'id="depth-{d}"' in svg
    assert svg.count("<path") == 4
    assert "<svg" in svg and svg.rstrip().endswith("</svg>")


def test_reruns_are_byte_identical(cli_out, tmp_path):
    again = tmp_path / "again"
    code = main(
        [
            "run",
            "--depth",
            "3",
            "--theta-max",
            "0.05",
            "--grid",
            "201",
            "--no-figures",
            "--out",
            str(again),
        ]
    )
    assert code == EXIT_OK
    for d in range(4):
        a = (cli_out / f"depth_{d}.csv").read_bytes()
        b = (again / f"depth_{d}.csv").read_bytes()
        assert a == b, f"depth_{d}.csv differs between runs"
    assert (cli_out / "curves.svg").read_bytes() == (again / "curves.svg").read_bytes()


def test_thread_env_does_not_change_artifacts(cli_out, tmp_path, monkeypatch):
    monkeypatch.setenv("UNITRACK_THREADS", "2")
    out = tmp_path / "threads2"
    code = main(
        [
            "run",
            "--depth",
            "3",
            "--theta-max",
            "0.05",
            "--grid",
            "201",
            "--no-figures",
            "--no-svg",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    for d in range(4):
        assert (out / f"depth_{d}.csv").read_bytes() == (
            cli_out / f"depth_{d}.csv"
        ).read_bytes()


def test_no_svg_and_no_figures(tmp_path):
    out = tmp_path / "bare"
    code = main(
        [
            "run",
            "--depth",
            "1",
            "--theta-max",
            "0.05",
            "--grid",
            "101",
            "--no-svg",
            "--no-figures",
            "--out",
            str(out),
        ]
    )
    assert code == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert "curves.svg" not in names
    assert "curves.png" not in names and "metrics.png" not in names
    assert "manifest.json" in names


# ---------------------------------------------------------------- verify command


def test_verify_from_manifest(cli_out, capsys):
    code = main(["verify", "--manifest", str(cli_out / "manifest.json")])
    assert code == EXIT_OK
    table = capsys.readouterr().out
    assert "A_length_monotone" in table
    assert "fail" not in table.replace("graph_fails", "")


def test_verify_from_flags(capsys):
    code = main(
        ["verify", "--seed", "straight", "--depth", "3", "--theta-max", "0.05"]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert "indeterminate" in out  # trivial run leaves vacuous claims open


def test_verify_corrupted_manifest(tmp_path, capsys):
    bad = tmp_path / "manifest.json"
    bad.write_text("{ not json")
    assert main(["verify", "--manifest", str(bad)]) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_verify_missing_manifest(tmp_path):
    assert main(["verify", "--manifest", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_verify_manifest_missing_keys(tmp_path):
    bad = tmp_path / "manifest.json"
    bad.write_text(json.dumps({"version": 1}))
    assert main(["verify", "--manifest", str(bad)]) == EXIT_CONFIG


def test_impossible_tolerance_fails_checks(cli_out, tmp_path, capsys):
    """Re-verifying under an absurd tolerance must FAIL honestly (exit 1):
    the recursion identity holds to ~1e-15, not to 1e-30."""
    man = json.loads((cli_out / "manifest.json").read_text())
    man["config"]["tolerances"]["algebraic"] = 1e-30
    edited = tmp_path / "strict.json"
    edited.write_text(json.dumps(man))
    code = main(["verify", "--manifest", str(edited)])
    assert code == EXIT_CHECK_FAILED
    assert "fail" in capsys.readouterr().out


# ---------------------------------------------------------------- exit codes


def test_depth_beyond_budget_is_numerical(capsys):
    code = main(["run", "--depth", "100", "--out", "/tmp/unused_unitrack"])
    assert code == EXIT_NUMERICAL
    err = capsys.readouterr().err
    assert "budget" in err


def test_bad_theta_is_config(capsys):
    code = main(["run", "--theta-max", "3.0", "--out", "/tmp/unused_unitrack"])
    assert code == EXIT_CONFIG


def test_unknown_flag_is_config(capsys):
    assert main(["run", "--frobnicate"]) == EXIT_CONFIG


def test_unknown_seed_is_config(capsys):
    assert main(["run", "--seed", "spiral"]) == EXIT_CONFIG


def test_custom_seed_runs(tmp_path):
    code = main(
        [
            "run",
            "--seed",
            "custom",
            "--power",
            "3",
            "--amplitude",
            "2.0",
            "--depth",
            "1",
            "--theta-max",
            "0.05",
            "--no-svg",
            "--no-figures",
            "--out",
            str(tmp_path / "custom"),
        ]
    )
    assert code == EXIT_OK
    man = load_manifest(tmp_path / "custom" / "manifest.json")
    assert man["config"]["seed"]["kind"] == "custom_bump"
    assert man["config"]["seed"]["power"] == 3


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "unitrack.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "run" in proc.stdout and "verify" in proc.stdout
