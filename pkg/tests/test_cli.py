import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from pmfix import catalog
from pmfix.cli import run

GOLDEN = Path(__file__).parent / "golden"
MALFORMED = Path(__file__).parent / "data" / "malformed"
EXAMPLE1 = str(resources.files("pmfix") / "data" / "example1.pmspec")
SQUARED = str(resources.files("pmfix") / "data" / "example3_squared.pmspec")


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog_lists_six_ids(capsys):
    code, out, _ = call(capsys, "catalog")
    assert code == 0
    assert [line.split("\t")[0] for line in out.splitlines()] == list(catalog.CATALOG_IDS)
    assert len(catalog.CATALOG_IDS) == 6


def test_pipeline_example1_final_line(capsys):
    code, out, _ = call(capsys, "pipeline", "example1", "--alpha", "0.75", "--epsilon1", "0.5")
    assert code == 0
    assert out.splitlines()[-1] == "verdict: unique-fixed-point-in-Up candidate: 0"


def test_conditions_example5_exit_2(capsys):
    code, out, _ = call(capsys, "conditions", "example5", "--alpha", "0.75")
    assert code == 2
    assert "condition_A:" in out and "verdict: pass" in out
    assert "verdict: not-found-within-cap" in out


@pytest.mark.parametrize("argv,code", [
    (["conditions", "example1", "--alpha", "0.75"], 0),
    (["conditions", "example3", "--alpha", "0.99"], 1),
    (["conditions", "example1", "--alpha", "0.75", "--contract", "eq6"], 1),
    (["solve", "example1", "--x0", "-1"], 0),
    (["solve", "example3", "--x0", "0"], 3),
    (["solve", "example4", "--x0", "0"], 4),
    (["solve", "example1", "--x0", "2"], 5),
    (["solve", "example3", "--x0", "0", "--power", "2"], 0),
    (["verify", "example1"], 0),
    (["orbit", "example1", "--x0", "-1", "--Q", "5"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["fuzz", "--trials", "0"],
    ["solve", "example1"],
    ["solve", "example1", "--x0", "-1", "--unknown"],
    ["solve", "example1", "--x0", "-1", "--max"],
    ["conditions", "example1", "--alpha", "1.5"],
    ["conditions", "example1", "--epsilon1", "-1"],
    ["conditions", "nowhere"],
    ["conditions"],
    ["conditions", "example1", "--config", EXAMPLE1],
    ["solve", "example1", "--x0", "nan"],
    ["solve", "example1", "--x0", "0", "--max-iter", "10"],
    ["verify", "--config", "/nonexistent/file.pmspec"],
])
def test_usage_errors(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 64 and out == "" and err


def test_config_errors_report_location(capsys):
    code, _, err = call(capsys, "verify", "--config", str(MALFORMED / "02_var_z.pmspec"))
    assert code == 65
    assert err.strip().endswith("2:22: pmetric may only use x, y; found 'z'")


def test_domain_error_exit_70(capsys):
    code, _, err = call(capsys, "solve", "example4", "--x0", "0.5")
    assert code == 70 and "outside the domain" in err


def test_config_runs_like_catalog(capsys):
    _, cfg, _ = call(capsys, "solve", "--config", EXAMPLE1, "--x0", "-1")
    _, cat, _ = call(capsys, "solve", "example1", "--x0", "-1")
    assert cfg == cat


def test_config_power_param(capsys):
    code, out, _ = call(capsys, "pipeline", "--config", SQUARED)
    assert code == 0
    assert out.splitlines()[-1] == "verdict: unique-fixed-point-in-Up candidate: 0"


def test_json_output_parses(capsys):
    code, out, _ = call(capsys, "solve", "example1", "--x0", "-1", "--json")
    data = json.loads(out)
    assert code == 0 and data["status"] == "FixedPointFound" and list(data)[0] == "start"


def test_orbit_diagnostics_with_alpha(capsys):
    code, out, _ = call(capsys, "orbit", "example1", "--x0", "-1", "--Q", "40", "--alpha", "0.75")
    assert code == 0 and "lemma1_ok: true" in out


def test_fuzz_small(capsys):
    code, out, _ = call(capsys, "fuzz", "--seed", "1", "--trials", "10")
    assert code == 0 and "implication_breaches: 0" in out


@pytest.mark.parametrize("name,argv", [
    ("pipeline_example1", ["pipeline", "example1", "--alpha", "0.75", "--epsilon1", "0.5"]),
    ("solve_example4", ["solve", "example4", "--x0", "0"]),
    ("conditions_example3", ["conditions", "example3", "--alpha", "0.5", "--Q", "4"]),
])
def test_golden_outputs(capsys, name, argv):
    _, out, _ = call(capsys, *argv)
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_console_entry_point_runs_in_fresh_process():
    proc = subprocess.run([sys.executable, "-m", "pmfix.cli", "catalog"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("example1\t")
