"""Command-line front end: scenario runs, parameter sweeps, mode comparisons.

Configs are flat ``key = value`` text (``#`` starts a comment); unknown keys
are rejected by name.  Output is CSV with a ``#``-prefixed header block that
records the fully resolved configuration, or an equivalent JSON document.
Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from importlib import resources
from pathlib import Path

import numpy as np

from .decoherence import (
    DecoherenceSeries,
    cumulative_exponent,
    final_exponent,
    rho_ratio_series,
)
from .model import CouplingMode, ModelParams, ParameterError
from .quadrature import QuadratureBudgetError

__all__ = ["ScenarioConfig", "ConfigError", "parse_config", "render_config",
           "run_scenario", "run_sweep", "main"]


class ConfigError(ValueError):
    """Configuration text or values are invalid."""


_PARAM_KEYS = ("m", "omega0", "omega_c", "gamma", "Lambda", "Omega",
               "m_b", "m_r", "K", "d", "g", "dx", "dy")
_MODE_NAMES = {mode.value: mode for mode in CouplingMode}
_STRATEGIES = ("omega_analytic", "tau_grid", "both")
_FORMATS = ("csv", "json")

RUN_COLUMNS = ("t", "D1", "D2", "Danom1", "Danom2", "D_total", "rho_ratio")


@dataclass(frozen=True)
class ScenarioConfig:
    """Resolved scenario: physics parameters plus run controls."""

    params: ModelParams
    mode: CouplingMode | None = None
    t_max: float = 10.0
    t_points: int = 1001
    strategy: str = "omega_analytic"
    tol: float = 1e-6
    abs_floor: float = 1e-12
    max_panels: int = 100_000
    out: str | None = None
    format: str = "csv"

    def resolved_params(self) -> ModelParams:
        return self.params.with_mode(self.mode) if self.mode is not None else self.params

    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.t_points)

    def quad_kwargs(self) -> dict:
        return {"abs_floor": self.abs_floor, "max_panels": self.max_panels}


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"key '{key}': expected a number, got {text!r}") from None


def _parse_int(key, text):
    try:
        value = int(text)
    except ValueError:
        raise ConfigError(f"key '{key}': expected an integer, got {text!r}") from None
    return value


def _assignments_from_text(text, origin):
    assignments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: {line!r} is not a 'key = value' assignment")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"{origin}:{lineno}: {line!r} is not a 'key = value' assignment")
        assignments.append((key, value, f"{origin}:{lineno}"))
    return assignments


def _build_config(assignments) -> ScenarioConfig:
    param_values: dict[str, float] = {}
    explicit_coupling = []
    mode = None
    controls: dict[str, object] = {}
    for key, value, where in assignments:
        if key in _PARAM_KEYS:
            param_values[key] = _parse_float(key, value)
            if key in ("d", "g", "K"):
                explicit_coupling.append(key)
        elif key == "mode":
            if value not in _MODE_NAMES:
                raise ConfigError(f"{where}: key 'mode': expected one of "
                                  f"{sorted(_MODE_NAMES)}, got {value!r}")
            mode = _MODE_NAMES[value]
        elif key == "t_max":
            controls["t_max"] = _parse_float(key, value)
        elif key == "t_points":
            controls["t_points"] = _parse_int(key, value)
        elif key == "strategy":
            if value not in _STRATEGIES:
                raise ConfigError(f"{where}: key 'strategy': expected one of "
                                  f"{_STRATEGIES}, got {value!r}")
            controls["strategy"] = value
        elif key == "tol":
            controls["tol"] = _parse_float(key, value)
        elif key == "abs_floor":
            controls["abs_floor"] = _parse_float(key, value)
        elif key == "max_panels":
            controls["max_panels"] = _parse_int(key, value)
        elif key == "out":
            controls["out"] = value
        elif key == "format":
            if value not in _FORMATS:
                raise ConfigError(f"{where}: key 'format': expected one of "
                                  f"{_FORMATS}, got {value!r}")
            controls["format"] = value
        else:
            raise ConfigError(f"{where}: unknown key '{key}'")
    if mode is not None and explicit_coupling:
        raise ConfigError(f"key 'mode' conflicts with explicit "
                          f"{'/'.join(sorted(set(explicit_coupling)))}")
    try:
        params = ModelParams(**param_values)
        config = ScenarioConfig(params=params, mode=mode, **controls)
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    if config.t_max <= 0:
        raise ConfigError(f"key 't_max': must be > 0, got {config.t_max}")
    if config.t_points < 2:
        raise ConfigError(f"key 't_points': must be >= 2, got {config.t_points}")
    if not 0.0 < config.tol <= 1e-2:
        raise ConfigError(f"key 'tol': must be in (0, 1e-2], got {config.tol}")
    if config.abs_floor <= 0:
        raise ConfigError(f"key 'abs_floor': must be > 0, got {config.abs_floor}")
    if config.max_panels < 64:
        raise ConfigError(f"key 'max_panels': must be >= 64, got {config.max_panels}")
    return config


def parse_config(text: str, origin: str = "<config>", overrides=()) -> ScenarioConfig:
    """Parse config text plus ``key=value`` override strings."""
    assignments = _assignments_from_text(text, origin)
    if not assignments:
        raise ConfigError(f"{origin}: empty config, no keys defined")
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r} is not of the form key=value")
        key, _, value = item.partition("=")
        assignments.append((key.strip(), value.strip(), f"--set {item}"))
    return _build_config(assignments)


def render_config(config: ScenarioConfig) -> str:
    """Canonical text form; parsing it back yields an identical config."""
    lines = []
    for name in _PARAM_KEYS:
        lines.append(f"{name} = {getattr(config.params, name)!r}")
    if config.mode is not None:
        lines.append(f"mode = {config.mode.value}")
    lines.append(f"t_max = {config.t_max!r}")
    lines.append(f"t_points = {config.t_points}")
    lines.append(f"strategy = {config.strategy}")
    lines.append(f"tol = {config.tol!r}")
    lines.append(f"abs_floor = {config.abs_floor!r}")
    lines.append(f"max_panels = {config.max_panels}")
    if config.out is not None:
        lines.append(f"out = {config.out}")
    lines.append(f"format = {config.format}")
    return "\n".join(lines) + "\n"


def preset_names():
    root = resources.files("magbrownian").joinpath("presets")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_config(source: str, overrides=()) -> ScenarioConfig:
    """Load a config from a path, or from a bundled preset name."""
    path = Path(source)
    if path.is_file():
        return parse_config(path.read_text(), origin=str(path), overrides=overrides)
    candidate = resources.files("magbrownian").joinpath("presets", f"{source}.cfg")
    if candidate.is_file():
        return parse_config(candidate.read_text(), origin=f"preset:{source}",
                            overrides=overrides)
    raise ConfigError(f"config {source!r}: no such file or bundled preset "
                      f"(presets: {', '.join(preset_names())})")


def _fmt(value) -> str:
    return repr(float(value))


def _header_lines(config: ScenarioConfig, extra=()):
    lines = [f"# {line}" for line in render_config(config).rstrip("\n").splitlines()]
    lines.extend(f"# {item}" for item in extra)
    return lines


def _emit(out_path, text: str):
    if out_path is None:
        sys.stdout.write(text)
    else:
        Path(out_path).write_text(text)


def _csv_document(config, columns, rows, extra_header=()):
    lines = _header_lines(config, extra_header)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_document(config, columns, rows, extra_header=()):
    doc = {
        "config": {line.partition(" = ")[0]: line.partition(" = ")[2]
                   for line in render_config(config).rstrip("\n").splitlines()},
        "notes": list(extra_header),
        "columns": list(columns),
        "rows": [[float(v) for v in row] for row in rows],
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _document(config, columns, rows, extra_header=()):
    builder = _csv_document if config.format == "csv" else _json_document
    return builder(config, columns, rows, extra_header)


def _relative_difference(x, y):
    scale = np.maximum(np.abs(x), np.abs(y))
    with np.errstate(invalid="ignore", divide="ignore"):
        rel = np.where(scale > 1e-8, np.abs(x - y) / np.where(scale > 0, scale, 1.0), 0.0)
    return rel


def run_scenario(config: ScenarioConfig):
    """Compute the series for one scenario and emit the output document.

    Returns (series, text).  With strategy 'both' the primary columns come
    from the omega-analytic path and tau-grid columns plus their relative
    differences are appended.
    """
    params = config.resolved_params()
    t_grid = config.t_grid()
    strategy = config.strategy
    quad = config.quad_kwargs()
    if strategy == "both":
        primary = cumulative_exponent(params, t_grid, "omega_analytic", config.tol, **quad)
        alt = cumulative_exponent(params, t_grid, "tau_grid", config.tol, **quad)
        columns = list(RUN_COLUMNS)
        columns += [f"{name}_tau" for name in RUN_COLUMNS[1:]]
        columns += [f"{name}_reldiff" for name in ("D1", "D2", "Danom1", "Danom2")]
        rows = np.column_stack([
            primary.t_grid, primary.D1, primary.D2, primary.Danom1, primary.Danom2,
            primary.D_total, primary.rho_ratio,
            alt.D1, alt.D2, alt.Danom1, alt.Danom2, alt.D_total, alt.rho_ratio,
            _relative_difference(primary.D1, alt.D1),
            _relative_difference(primary.D2, alt.D2),
            _relative_difference(primary.Danom1, alt.Danom1),
            _relative_difference(primary.Danom2, alt.Danom2),
        ])
        series = primary
    else:
        series = cumulative_exponent(params, t_grid, strategy, config.tol, **quad)
        columns = list(RUN_COLUMNS)
        rows = np.column_stack([
            series.t_grid, series.D1, series.D2, series.Danom1, series.Danom2,
            series.D_total, series.rho_ratio,
        ])
    text = _document(config, columns, rows, extra_header=(f"strategy = {strategy}",))
    _emit(config.out, text)
    return series, text


def run_sweep(config: ScenarioConfig, param_name: str, values, workers: int = 1):
    """D_total at t_max per swept value; deterministic input ordering."""
    if param_name not in _PARAM_KEYS:
        raise ConfigError(f"sweep parameter must be one of {_PARAM_KEYS}, got {param_name!r}")
    base = config.resolved_params()
    t_grid = config.t_grid()
    strategy = "omega_analytic" if config.strategy == "both" else config.strategy

    def one(value):
        swept = replace(base, **{param_name: float(value)})
        return final_exponent(swept, t_grid, strategy, config.tol, **config.quad_kwargs())

    values = [float(v) for v in values]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            totals = list(pool.map(one, values))
    else:
        totals = [one(v) for v in values]
    rows = list(zip(values, totals))
    text = _document(config, (param_name, "D_total_at_tmax"), rows,
                     extra_header=(f"sweep = {param_name}", f"strategy = {strategy}"))
    _emit(config.out, text)
    return rows, text


def run_compare_modes(config: ScenarioConfig):
    """Run the three coupling presets on one parameter set side by side."""
    t_grid = config.t_grid()
    strategy = "omega_analytic" if config.strategy == "both" else config.strategy
    columns = ["t"]
    data = [t_grid]
    for mode in (CouplingMode.POSITION_ONLY, CouplingMode.MOMENTUM_ONLY, CouplingMode.BOTH):
        series = rho_ratio_series(config.params, mode, t_grid, strategy, config.tol,
                                  **config.quad_kwargs())
        columns += [f"D_total_{mode.value}", f"rho_ratio_{mode.value}"]
        data += [series.D_total, series.rho_ratio]
    rows = np.column_stack(data)
    text = _document(config, columns, rows, extra_header=(f"strategy = {strategy}",))
    _emit(config.out, text)
    return rows, text


def _parse_values(text: str):
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"--values: expected comma-separated numbers, got {text!r}") from None
    if not values:
        raise ConfigError("--values: no values given")
    return values


def build_parser():
    parser = argparse.ArgumentParser(
        prog="magbrownian",
        description="Decoherence of a magnetized Brownian oscillator in an Ohmic bath",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True,
                       help="config file path or bundled preset name")
        p.add_argument("--set", dest="sets", action="append", default=[],
                       metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=_FORMATS, default=None)
        p.add_argument("--strategy", choices=_STRATEGIES, default=None)
        p.add_argument("--tol", type=float, default=None,
                       help="factor-quadrature relative tolerance")

    p_run = sub.add_parser("run", help="compute one scenario series")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter, report D_total at t_max")
    common(p_sweep)
    p_sweep.add_argument("--param", required=True, help="ModelParams field to sweep")
    p_sweep.add_argument("--values", required=True, help="comma-separated sweep values")
    p_sweep.add_argument("--workers", type=int, default=1)

    p_cmp = sub.add_parser("compare-modes", help="run the three coupling presets")
    common(p_cmp)

    p_val = sub.add_parser("validate", help="parse and validate a config, print canonical form")
    common(p_val)
    return parser


def _apply_flag_overrides(config: ScenarioConfig, args) -> ScenarioConfig:
    updates = {}
    if args.out is not None:
        updates["out"] = args.out
    if args.format is not None:
        updates["format"] = args.format
    if args.strategy is not None:
        updates["strategy"] = args.strategy
    if args.tol is not None:
        if not 0.0 < args.tol <= 1e-2:
            raise ConfigError(f"--tol: must be in (0, 1e-2], got {args.tol}")
        updates["tol"] = args.tol
    return replace(config, **updates) if updates else config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _apply_flag_overrides(load_config(args.config, args.sets), args)
        if args.command == "run":
            run_scenario(config)
        elif args.command == "sweep":
            run_sweep(config, args.param, _parse_values(args.values), args.workers)
        elif args.command == "compare-modes":
            run_compare_modes(config)
        elif args.command == "validate":
            sys.stdout.write(render_config(config))
    except (ConfigError, ParameterError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QuadratureBudgetError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
