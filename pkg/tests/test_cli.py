from __future__ import annotations

import json
from pathlib import Path

import pytest

from qsd import Strategy
from qsd.cli import RunConfig, build_parser, config_from_args, execute, main


def run(argv: list[str], out: Path) -> tuple[int, dict]:
    cfg = config_from_args(build_parser().parse_args(argv + ["--out", str(out)]))
    return execute(cfg)


def files_of(run_dir: str) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(Path(run_dir).iterdir())}


def test_eigensolve_example(tmp_path):
    status, man = run(["eigensolve", "--mu", "1", "--k", "4"], tmp_path)
    assert status == 0
    d = Path(man["run_dir"])
    assert d.name.startswith("eigensolve-")
    ev = json.loads((d / "eigenvalues.json").read_text())
    assert ev["eigenvalues"] == pytest.approx([0.5, 1.5, 2.5, 3.5], abs=1e-6)
    assert ev["perturbation"]["passed"]


def test_wigner_first_state(tmp_path):
    status, man = run(["wigner", "--n", "1"], tmp_path)
    assert status == 0
    d = Path(man["run_dir"])
    assert (d / "phase.csv").read_text().startswith("x,y,f\n")
    regions = json.loads((d / "negative_regions.json").read_text())
    assert regions["count"] == 1
    assert regions["regions"][0]["shape"] == "disk"
    assert regions["regions"][0]["rho_hi"] == pytest.approx(0.707107, abs=1e-6)


def test_fit_malformed(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("log_price,side\n0.1,buy\nabc,sell\n")
    status, err = run(["fit", "--input", str(bad)], tmp_path)
    assert status == 1
    assert err["error"] == "MalformedRow"
    assert err["rows"][0]["row"] == 2
    assert json.loads((Path(err["run_dir"]) / "error.json").read_text())["error"] == "MalformedRow"


def test_fit_good(tmp_path):
    data = tmp_path / "t.csv"
    data.write_text("log_price,side\n0.0,buy\n0.5,sell\n2.0,buy\n1.5,sell\n")
    status, man = run(["fit", "--input", str(data), "--split-sides"], tmp_path)
    assert status == 0
    fit = json.loads((Path(man["run_dir"]) / "fit.json").read_text())
    assert fit["pooled"]["strategy"]["m"] == pytest.approx(1.0)
    assert fit["pooled"]["strategy"]["mu"] == pytest.approx(0.5 / (5 / 6))
    assert set(fit) == {"pooled", "buy", "sell"}


def test_fit_degenerate_side(tmp_path):
    data = tmp_path / "t.csv"
    data.write_text("log_price,side\n0.0,buy\n1.0,sell\n2.0,buy\n1.0,sell\n")
    status, err = run(["fit", "--input", str(data), "--split-sides"], tmp_path)
    assert status == 1 and err["error"] == "DegenerateRisk"


def test_numerical_failure_exit_2(tmp_path):
    status, err = run(["strategy", "--grid-span-sigmas", "1"], tmp_path)
    assert status == 2
    assert err["error"] == "DomainTooNarrow"


@pytest.mark.parametrize("argv", [
    ["eigensolve", "--k", "30"],
    ["strategy", "--mu", "-1"],
    ["montecarlo", "--trials", "50"],
    ["fit"],
    ["strategy", "--coeffs", "0.5,0.5"],
])
def test_validation_exit_1(tmp_path, argv):
    status, _ = run(argv, tmp_path)
    assert status == 1


def test_unknown_command_config(tmp_path):
    status, _ = execute(RunConfig("nope", {}, tmp_path))
    assert status == 1


@pytest.mark.parametrize("argv", [
    ["strategy", "--n", "2"],
    ["fisher", "--coeffs", "0.6,0.8"],
    ["duality", "--n", "3"],
    ["curves", "--n", "2"],
    ["montecarlo", "--trials", "200", "--seed", "5"],
])
def test_deterministic_artifacts(tmp_path, argv):
    _, a = run(argv, tmp_path / "a")
    _, b = run(argv, tmp_path / "b")
    fa, fb = files_of(a["run_dir"]), files_of(b["run_dir"])
    assert fa == fb


@pytest.mark.parametrize("command", ["strategy", "fisher", "eigensolve", "duality", "wigner", "curves"])
def test_manifest_lists_existing_files(tmp_path, command):
    status, man = run([command, "--n", "2", "--k", "3", "--plot"], tmp_path)
    assert status == 0
    d = Path(man["run_dir"])
    on_disk = {p.name for p in d.iterdir()} - {"manifest.json"}
    assert set(man["files"]) == on_disk
    assert any(name.endswith(".svg") for name in on_disk)
    stored = json.loads((d / "manifest.json").read_text())
    assert stored["parameters"]["n"] == 2
    assert {"numpy", "scipy", "qsd"} <= set(stored["versions"])
    assert stored["defaults"]["grid_points"] == 1024


def test_curves_giffen(tmp_path):
    _, man = run(["curves", "--n", "2"], tmp_path)
    g = json.loads((Path(man["run_dir"]) / "giffen.json").read_text())["curves"]
    assert g["supply"]["monotone"] and g["demand"]["monotone"]
    assert not g["conditional_demand"]["monotone"]
    assert json.loads((Path(man["run_dir"]) / "conditional_supply.json").read_text())["kind"] == "conditional_supply"


def test_strategy_descriptor_file(tmp_path):
    desc = tmp_path / "s.json"
    desc.write_text(Strategy(2.0, 0.5, (0.6, 0.8)).to_json())
    status, man = run(["strategy", "--strategy", str(desc)], tmp_path)
    assert status == 0
    stored = json.loads((Path(man["run_dir"]) / "strategy.json").read_text())
    assert stored["coeffs"] == [0.6, 0.8]


def test_env_out_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("QSD_OUT_DIR", str(tmp_path / "envroot"))
    assert main(["montecarlo", "--trials", "100", "--seed", "1"]) == 0
    printed = capsys.readouterr().out.strip()
    assert Path(printed).parent == tmp_path / "envroot"
    assert json.loads((Path(printed) / "report.json").read_text())["trials"] == 100


def test_main_error_to_stderr(tmp_path, capsys):
    assert main(["eigensolve", "--k", "0", "--out", str(tmp_path)]) == 1
    assert "error" in json.loads(capsys.readouterr().err)
