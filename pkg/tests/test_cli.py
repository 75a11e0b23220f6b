import csv
import json
import locale
import math
import time
import warnings
from pathlib import Path

import numpy as np
import pytest

from helicity_lab.cli import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_DIVERGED, EXIT_OK, RunConfig, load_config, main
from helicity_lab.errors import ConfigError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
HEADER = "t,energy,chi_mag,chi_el,chi_cs,eb_integral,n_diff"
# checks that cannot pass at desk scale; see the README section on the hopfion
KNOWN_RED = {"hopfion_null_eb", "hopfion_null_magnitude"}


def write_config(tmp_path, **overrides):
    cfg = {
        "grid": {"n": 8, "box_length": 2 * math.pi},
        "scenario": {"name": "circular_plane_wave", "parameters": {"m": [0, 1, 1]}},
        "evolution": {"dt": 0.1, "t_final": 1.0, "integrator": "exact"},
        "output": {"path": str(tmp_path / "out.csv"), "format": "csv"},
        "seed": 0,
    }
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_zero_scenario_gives_zero_columns(tmp_path):
    cfg = write_config(tmp_path, scenario={"name": "zero"})
    assert main(["run", "--config", str(cfg)]) == EXIT_OK
    header, data = read_csv(tmp_path / "out.csv")
    assert ",".join(header) == HEADER
    assert len(data) == 11
    assert np.all(data[:, 1:] == 0.0)


def test_circular_wave_chi_cs_column_is_constant(tmp_path):
    cfg = write_config(tmp_path, evolution={"dt": 0.5, "t_final": 50.0})
    assert main(["run", "--config", str(cfg)]) == EXIT_OK
    _, data = read_csv(tmp_path / "out.csv")
    chi = data[:, 4]
    assert np.max(np.abs(chi - chi[0])) <= 1e-12 * abs(chi[0])


@pytest.mark.parametrize("text", ["{not json", "[]", json.dumps({"grid": {"n": 8}})])
def test_malformed_config_exit_code(tmp_path, capsys, text):
    cfg = tmp_path / "bad.json"
    cfg.write_text(text)
    out = tmp_path / "out.csv"
    assert main(["run", "--config", str(cfg), "--output", str(out)]) == EXIT_CONFIG
    assert not out.exists()
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid": {"n": 7}},
        {"scenario": {"name": "no_such_scenario"}},
        {"scenario": {"name": "circular_plane_wave", "parameters": {"m": [0, 0, 0]}}},
        {"evolution": {"dt": -0.1, "t_final": 1.0}},
        {"evolution": {"dt": 0.1, "t_final": 1.0, "integrator": "leapfrog"}},
        {"diagnostics": ["energy", "enstrophy"]},
        {"output": {"format": "xml"}},
        {"colour": "blue"},
    ],
)
def test_invalid_config_values_exit_2_without_output(tmp_path, overrides):
    cfg = write_config(tmp_path, **overrides)
    assert main(["run", "--config", str(cfg), "--output", str(tmp_path / "x.csv")]) == EXIT_CONFIG
    assert not (tmp_path / "x.csv").exists()


def test_missing_config_file(tmp_path):
    assert main(["run", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG


def test_divergence_exit_code(tmp_path):
    cfg = write_config(
        tmp_path,
        grid={"n": 16},
        scenario={"name": "random_transverse", "parameters": {"cutoff": 7}},
        evolution={"dt": 2.0, "t_final": 2000.0, "integrator": "rk4"},
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert main(["run", "--config", str(cfg)]) == EXIT_DIVERGED
    assert not (tmp_path / "out.csv").exists()


def test_overrides_and_json_output(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "series.json"
    assert main(["run", "--config", str(cfg), "--output", str(out), "--format", "json"]) == EXIT_OK
    rows = json.loads(out.read_text())
    assert list(rows[0]) == HEADER.split(",")
    assert not (tmp_path / "out.csv").exists()


def test_csv_values_round_trip_at_full_precision(tmp_path):
    cfg = write_config(tmp_path, scenario={"name": "random_transverse", "parameters": {"seed": 3}})
    assert main(["run", "--config", str(cfg)]) == EXIT_OK
    from helicity_lab.cli import load_config
    from helicity_lab.evolution import run
    from helicity_lab.scenarios import build_scenario

    c = load_config(cfg)
    series = run(build_scenario(c.grid, c.scenario), c.evolution)
    _, data = read_csv(tmp_path / "out.csv")
    expected = np.array([[getattr(r, k) for k in HEADER.split(",")] for r in series])
    assert np.array_equal(data, expected)


def test_csv_ignores_comma_decimal_locale(tmp_path):
    for name in ("de_DE.UTF-8", "de_DE.utf8", "fr_FR.UTF-8"):
        try:
            old = locale.setlocale(locale.LC_ALL, name)
            break
        except locale.Error:
            continue
    else:
        pytest.skip("no comma-decimal locale installed")
    try:
        cfg = write_config(tmp_path)
        assert main(["run", "--config", str(cfg)]) == EXIT_OK
    finally:
        locale.setlocale(locale.LC_ALL, "C")
    header, data = read_csv(tmp_path / "out.csv")
    assert data.shape[1] == 7


def test_unrequested_diagnostics_are_nan(tmp_path):
    cfg = write_config(tmp_path, diagnostics=["energy", "chi_cs"])
    assert main(["run", "--config", str(cfg)]) == EXIT_OK
    _, data = read_csv(tmp_path / "out.csv")
    assert np.all(np.isfinite(data[:, [0, 1, 4]]))
    assert np.all(np.isnan(data[:, [2, 3, 5, 6]]))


@pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.json")))
def test_shipped_configs_round_trip(name):
    cfg = load_config(CONFIGS / name)
    again = RunConfig.from_dict(json.loads(json.dumps(cfg.to_dict())))
    assert again == cfg
    assert again.to_dict() == cfg.to_dict()


def test_config_rejects_non_integer_grid():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"grid": {"n": 16.0}, "scenario": {"name": "zero"}, "evolution": {"dt": 0.1, "t_final": 1}})


def _check(tmp_path, config, *extra):
    out = tmp_path / "report.json"
    start = time.perf_counter()
    code = main(["check", "--config", str(config), "--output", str(out), *extra])
    elapsed = time.perf_counter() - start
    return code, json.loads(out.read_text()), elapsed


@pytest.fixture(scope="module")
def default_check(tmp_path_factory):
    return _check(tmp_path_factory.mktemp("check"), CONFIGS / "check_default.json")


def test_check_default_config_all_pass(default_check):
    code, report, elapsed = default_check
    assert elapsed < 60
    failing = [(r["name"], r["residual"]) for r in report if r["status"] == "fail"]
    assert failing == [] and code == EXIT_OK


def test_check_report_contract(default_check):
    code, report, _ = default_check
    assert all(set(r) == {"name", "residual", "tolerance", "status"} for r in report)
    assert {r["status"] for r in report} <= {"pass", "fail"}
    failing = {r["name"] for r in report if r["status"] == "fail"}
    # only the hopfion null-field residuals are out of reach at this resolution
    assert failing <= KNOWN_RED
    assert code == (EXIT_CHECK_FAILED if failing else EXIT_OK)


def test_check_with_rk4_skips_exact_only_checks(tmp_path):
    code, report, _ = _check(tmp_path, CONFIGS / "check_rk4.json")
    by_name = {r["name"]: r for r in report}
    for name in ("exact_conserves_chi_cs", "exact_time_reversible", "omega_evolution_invariance"):
        assert by_name[name]["status"] == "skip"
    for name in ("budget_magnetic", "budget_electric", "budget_chi_cs_constant"):
        assert by_name[name]["status"] == "pass"
    assert 1e-3 < by_name["budget_magnetic"]["tolerance"] <= 0.1**2 * 1.01
    failing = {r["name"] for r in report if r["status"] == "fail"}
    assert failing <= KNOWN_RED


def test_check_verdicts_are_seed_robust(tmp_path):
    base = json.loads((CONFIGS / "check_default.json").read_text())
    verdicts = []
    for seed in range(1, 6):
        base["seed"] = seed
        path = tmp_path / f"seed{seed}.json"
        path.write_text(json.dumps(base))
        _, report, _ = _check(tmp_path, path)
        verdicts.append({r["name"]: r["status"] for r in report})
    assert all(v == verdicts[0] for v in verdicts)


def test_scan_columns(tmp_path):
    out = tmp_path / "scan.csv"
    code = main(["scan", "--config", str(CONFIGS / "scan_circular.json"), "--angles", "32", "--output", str(out)])
    assert code == EXIT_OK
    header, data = read_csv(out)
    assert header == ["theta", "chi_cs_rotated", "omega_residual", "alpha_gap"]
    assert len(data) == 32
    assert np.allclose(data[:, 0], np.linspace(0, 2 * math.pi, 32, endpoint=False), rtol=0, atol=1e-15)
    chi = data[:, 1]
    assert np.max(np.abs(chi - chi[0])) <= 1e-12 * abs(chi[0])


def test_scan_rejects_nonpositive_angle_count(tmp_path):
    out = tmp_path / "scan.csv"
    assert main(["scan", "--config", str(CONFIGS / "scan_circular.json"), "--angles", "0", "--output", str(out)]) == EXIT_CONFIG
    assert not out.exists()
