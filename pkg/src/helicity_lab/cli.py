"""Command-line driver: ``helicity-lab run|check|scan --config <path>``.

Exit codes: 0 success, 1 a check failed, 2 configuration error (nothing is
written), 3 the integration produced non-finite values.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import duality, helicity, symplectic
from .checks import alpha_gap, alpha_witness_variation, run_checks
from .errors import ConfigError, DivergenceError, HelicityLabError
from .evolution import EvolutionConfig, run
from .grid import GridSpec
from .scenarios import ScenarioSpec, build_scenario

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_DIVERGED = 0, 1, 2, 3
FORMATS = ("csv", "json")
SCAN_COLUMNS = ("theta", "chi_cs_rotated", "omega_residual", "alpha_gap")


@dataclass(frozen=True)
class OutputSpec:
    path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}, got {self.format!r}")

    def to_dict(self):
        return {"path": self.path, "format": self.format}


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec
    scenario: ScenarioSpec
    evolution: EvolutionConfig
    diagnostics: tuple = tuple(helicity.DIAGNOSTICS)
    output: OutputSpec = field(default_factory=OutputSpec)
    seed: int = 0

    def __post_init__(self):
        unknown = [d for d in self.diagnostics if d not in helicity.DIAGNOSTICS]
        if unknown:
            raise ConfigError(f"unknown diagnostics {unknown}; choose from {list(helicity.DIAGNOSTICS)}")

    def to_dict(self):
        return {
            "grid": {"n": self.grid.n, "box_length": self.grid.box_length},
            "scenario": self.scenario.to_dict(),
            "evolution": self.evolution.to_dict(),
            "diagnostics": list(self.diagnostics),
            "output": self.output.to_dict(),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        extra = set(d) - {"grid", "scenario", "evolution", "diagnostics", "output", "seed"}
        if extra:
            raise ConfigError(f"unknown configuration keys: {sorted(extra)}")
        try:
            g = _section(d, "grid")
            grid = GridSpec(_int(g.get("n"), "grid.n"), float(g.get("box_length", 2 * math.pi)))
            sc = _section(d, "scenario")
            params = sc.get("parameters", {})
            if not isinstance(params, dict):
                raise ConfigError("scenario.parameters must be an object")
            scenario = ScenarioSpec(sc.get("name"), dict(params))
            ev = _section(d, "evolution")
            evolution = EvolutionConfig(
                dt=float(ev["dt"]),
                t_final=float(ev["t_final"]),
                integrator=ev.get("integrator", "exact"),
                sample_every=ev.get("sample_every", 1),
            )
            diagnostics = d.get("diagnostics", list(helicity.DIAGNOSTICS))
            if not isinstance(diagnostics, list):
                raise ConfigError("diagnostics must be a list of names")
            out = d.get("output", {})
            if not isinstance(out, dict):
                raise ConfigError("output must be an object")
            output = OutputSpec(out.get("path"), out.get("format", "csv"))
            seed = _int(d.get("seed", 0), "seed")
        except KeyError as exc:
            raise ConfigError(f"missing configuration key {exc}") from None
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        return cls(grid, scenario, evolution, tuple(diagnostics), output, seed)


def _section(d, key):
    if key not in d:
        raise ConfigError(f"missing configuration section {key!r}")
    if not isinstance(d[key], dict):
        raise ConfigError(f"section {key!r} must be an object")
    return d[key]


def _int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return value


def load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration is not valid JSON: {exc}") from None
    return RunConfig.from_dict(data)


def _fmt(x):
    # '.17g' round-trips any double and ignores the locale
    return format(float(x), ".17g")


def render(rows, columns, fmt):
    if fmt == "json":
        return json.dumps([{c: _json_number(r[c]) for c in columns} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def _json_number(x):
    x = float(x)
    return x if math.isfinite(x) else None


def emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_run(cfg):
    s = build_scenario(cfg.grid, cfg.scenario)
    records = run(s, cfg.evolution, list(cfg.diagnostics))
    return [r.as_dict() for r in records], helicity.COLUMNS


def cmd_check(cfg):
    return run_checks(cfg.grid, cfg.seed, cfg.evolution)


def cmd_scan(cfg, n_angles):
    """Sweep the duality angle over [0, 2 pi) on the configured initial state.

    ``omega_residual`` pairs the generator direction with the electric-only
    variation (0, E); ``alpha_gap`` uses the same variation.
    """
    s = build_scenario(cfg.grid, cfg.scenario)
    v1 = duality.generator_direction(s)
    v2 = alpha_witness_variation(s)
    rows = []
    for theta in np.linspace(0.0, 2 * math.pi, n_angles, endpoint=False):
        rows.append({
            "theta": theta,
            "chi_cs_rotated": helicity.cs_helicity(duality.rotate_state(s, theta)),
            "omega_residual": symplectic.duality_invariance_residual(v1, v2, theta),
            "alpha_gap": alpha_gap(s, theta, v2)[0],
        })
    return rows, SCAN_COLUMNS


def build_parser():
    parser = argparse.ArgumentParser(prog="helicity-lab", description="Vacuum Maxwell helicity laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("run", "evolve a scenario and write the diagnostics time series"),
        ("check", "run the invariant battery and write a JSON report"),
        ("scan", "sweep the duality angle and write invariance residuals"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--output", help="output path ('-' for stdout); overrides the config")
        if name != "check":
            p.add_argument("--format", choices=FORMATS, help="output format; overrides the config")
        if name == "scan":
            p.add_argument("--angles", type=int, default=16, help="number of angles in [0, 2 pi)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        path = args.output if args.output is not None else cfg.output.path
        fmt = getattr(args, "format", None) or cfg.output.format
        if args.command == "scan" and args.angles < 1:
            raise ConfigError(f"--angles must be positive, got {args.angles}")
        if args.command == "run":
            rows, columns = cmd_run(cfg)
            emit(render(rows, columns, fmt), path)
            return EXIT_OK
        if args.command == "scan":
            rows, columns = cmd_scan(cfg, args.angles)
            emit(render(rows, columns, fmt), path)
            return EXIT_OK
        results = cmd_check(cfg)
        report = [
            {**r.as_dict(), "residual": _json_number(r.residual)} for r in results
        ]
        emit(json.dumps(report, indent=1) + "\n", path)
        return EXIT_CHECK_FAILED if any(r.status == "fail" for r in results) else EXIT_OK
    except DivergenceError as exc:
        print(f"error: integration diverged at t = {exc.t}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ConfigError, HelicityLabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
