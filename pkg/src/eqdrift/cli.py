"""Command-line front end.

Subcommands map one-to-one onto the analysis modules:

    validate    derived quantities and configuration diagnostics
    surface     sampled free-surface profiles               -> surface.csv
    meanflow    mean velocities, bounds, direction flags    -> meanflow.csv
    stokes      Stokes drift on the (s, z0) grid            -> stokes.csv
    flux        truncated vertical-column flux at stations  -> flux.csv
    trajectory  one integrated particle path                -> trajectory.csv
    check       the full invariant suite

Exit codes: 0 success, 1 validation failure (bad configuration or a request
outside the solution's domain), 2 numerical failure (iteration or quadrature
did not converge), 3 I/O or scenario-parse failure.

CSV output is deterministic: same scenario and seed give byte-identical
files. Floats are written with 17 significant digits so a round trip
through the file reproduces the binary values exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from . import checks, field, geometry, massflux, meanflow
from .errors import ConvergenceError, DomainError, QuadratureError
from .model import PhysicalConstants, WaveConfig, validate_config


class ScenarioError(ValueError):
    """Scenario file is missing, malformed, or has unknown fields."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything a run needs, loadable from a small YAML file."""

    wavelength: float = 100.0
    r0: float = -5.0
    c0: float = 0.0
    omega: float = 7.3e-5
    g: float = 9.8
    earth_radius: float = 6.378e6
    beta: float | None = None
    s_grid: tuple[float, ...] = (0.0, 5.0e4)
    z0_grid: tuple[float, ...] = (-40.0, -25.0)
    depths: tuple[float, ...] = (500.0, 1000.0, 2000.0)
    stations: tuple = ("crest", "trough")
    r_lower_offset: float = 25.0
    x_start: float = 0.0
    z_start: float = -20.0
    periods: float = 1.0
    steps_per_period: int = 1000
    surface_samples: int = 257
    tol_scale: float = 1.0
    seed: int = 0
    out_dir: str = "out"


_FLOAT_FIELDS = {
    "wavelength", "r0", "c0", "omega", "g", "earth_radius",
    "r_lower_offset", "x_start", "z_start", "periods", "tol_scale",
}
_GRID_FIELDS = {"s_grid", "z0_grid", "depths"}


def load_scenario(path: str | Path | None) -> ScenarioConfig:
    """Read a scenario file; None gives the defaults."""
    if path is None:
        return ScenarioConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"cannot parse scenario {path}: {exc}") from exc
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise ScenarioError(f"scenario {path} must be a mapping, got {type(raw).__name__}")

    known = {f.name for f in dataclasses.fields(ScenarioConfig)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ScenarioError(f"scenario {path}: unknown fields {', '.join(unknown)}")

    kwargs = {}
    for key, value in raw.items():
        if key in _GRID_FIELDS:
            if not isinstance(value, (list, tuple)) or not value:
                raise ScenarioError(f"scenario field {key} must be a nonempty list")
            try:
                grid = tuple(float(v) for v in value)
            except (TypeError, ValueError) as exc:
                raise ScenarioError(f"scenario field {key}: {exc}") from exc
            if list(grid) != sorted(grid):
                raise ScenarioError(f"scenario field {key} must be sorted ascending")
            kwargs[key] = grid
        elif key == "stations":
            if not isinstance(value, (list, tuple)) or not value:
                raise ScenarioError("scenario field stations must be a nonempty list")
            st = []
            for v in value:
                if isinstance(v, str):
                    if v not in ("crest", "trough"):
                        raise ScenarioError(
                            f"station {v!r} not recognised (use a number, crest, or trough)"
                        )
                    st.append(v)
                else:
                    try:
                        st.append(float(v))
                    except (TypeError, ValueError) as exc:
                        raise ScenarioError(f"scenario field stations: {exc}") from exc
            kwargs[key] = tuple(st)
        elif key == "beta":
            kwargs[key] = None if value is None else float(value)
        elif key in _FLOAT_FIELDS:
            try:
                kwargs[key] = float(value)
            except (TypeError, ValueError) as exc:
                raise ScenarioError(f"scenario field {key}: {exc}") from exc
        elif key in ("steps_per_period", "surface_samples", "seed"):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ScenarioError(f"scenario field {key} must be an integer")
            kwargs[key] = value
        elif key == "out_dir":
            kwargs[key] = str(value)
    return ScenarioConfig(**kwargs)


def dump_scenario(scenario: ScenarioConfig) -> str:
    """YAML text that load_scenario reads back to an equal ScenarioConfig."""
    data = dataclasses.asdict(scenario)
    for key in (*_GRID_FIELDS, "stations"):
        data[key] = list(data[key])
    return yaml.safe_dump(data, sort_keys=True)


def wave_config(scenario: ScenarioConfig) -> WaveConfig:
    constants = PhysicalConstants(
        omega=scenario.omega,
        g=scenario.g,
        earth_radius=scenario.earth_radius,
        beta=scenario.beta,
    )
    return WaveConfig(
        wavelength=scenario.wavelength,
        r0=scenario.r0,
        c0=scenario.c0,
        constants=constants,
    )


def _fmt(value) -> str:
    if isinstance(value, bool) or isinstance(value, np.bool_):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path: Path, comments: list[str], header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def read_csv(path: str | Path):
    """Parse a file written by write_csv: (comments, header, rows of floats/strings)."""
    comments, header, rows = [], None, []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                comments.append(line[1:].strip())
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                continue
            parsed = []
            for cell in cells:
                try:
                    parsed.append(float(cell))
                except ValueError:
                    parsed.append(cell)
            rows.append(parsed)
    return comments, header, rows


def _comments(args, scenario: ScenarioConfig, extra: list[str] | None = None) -> list[str]:
    config = wave_config(scenario)
    base = [
        f"eqdrift {args.command}",
        f"seed = {scenario.seed}",
        (
            f"wavelength = {_fmt(scenario.wavelength)} m, r0 = {_fmt(scenario.r0)} m, "
            f"c0 = {_fmt(scenario.c0)} m/s, c = {_fmt(config.c)} m/s"
        ),
        f"t = {_fmt(args.t)} s",
    ]
    return base + (extra or [])


def _scenario_from_args(args) -> ScenarioConfig:
    scenario = load_scenario(args.config)
    updates = {}
    if args.out is not None:
        updates["out_dir"] = args.out
    if args.tol is not None:
        if args.tol <= 0.0:
            raise ScenarioError("--tol must be positive")
        updates["tol_scale"] = args.tol
    if args.seed is not None:
        updates["seed"] = args.seed
    return dataclasses.replace(scenario, **updates) if updates else scenario


def cmd_validate(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    problems = validate_config(config)
    print(f"wavelength      {_fmt(config.wavelength)} m")
    print(f"wavenumber      {_fmt(config.k)} 1/m")
    print(f"current c0      {_fmt(config.c0)} m/s")
    print(f"modified g      {_fmt(config.gamma)} m/s^2")
    print(f"phase speed     {_fmt(config.c)} m/s")
    if not problems:
        print(f"period          {_fmt(config.period)} s")
        region = geometry.trapping_region(config)
        if region.kind == geometry.ALL_LATITUDES:
            print("trapping        all latitudes")
        else:
            print(f"trapping        |s| < {_fmt(region.s_max)} m")
        print("configuration valid")
        return 0
    for p in problems:
        print(f"invalid: {p}")
    return 1


def cmd_surface(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    config.require_valid()
    rows = []
    for s in scenario.s_grid:
        prof = geometry.surface_profile(s, args.t, config, n=scenario.surface_samples)
        for q, x, eta in zip(prof.q, prof.x, prof.eta):
            rows.append((s, q, x, eta))
    write_csv(
        Path(scenario.out_dir) / "surface.csv",
        _comments(args, scenario),
        ["s [m]", "q [m]", "x [m]", "eta [m]"],
        rows,
    )
    print(f"wrote {Path(scenario.out_dir) / 'surface.csv'} ({len(rows)} rows)")
    return 0


_MEANFLOW_HEADER = [
    "s [m]", "z0 [m]", "mean_lagrangian [m/s]", "mean_eulerian [m/s]",
    "err [m/s]", "stokes [m/s]", "lower [m/s]", "upper [m/s]",
    "westward_sufficient [bool]", "eastward_sufficient [bool]",
]


def cmd_meanflow(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    config.require_valid()
    tol = 1e-12 * config.c * scenario.tol_scale
    rows = []
    for s in scenario.s_grid:
        for z0 in scenario.z0_grid:
            rep = meanflow.mean_flow_report(s, z0, config, t=args.t, tol=tol)
            rows.append(
                (
                    rep.s, rep.z0, rep.mean_lagrangian, rep.mean_eulerian.value,
                    rep.mean_eulerian.error_estimate, rep.stokes_drift,
                    rep.bounds.lower, rep.bounds.upper,
                    rep.westward_sufficient, rep.eastward_sufficient,
                )
            )
    write_csv(
        Path(scenario.out_dir) / "meanflow.csv",
        _comments(args, scenario, [f"quadrature tol = {_fmt(tol)} m/s"]),
        _MEANFLOW_HEADER,
        rows,
    )
    print(f"wrote {Path(scenario.out_dir) / 'meanflow.csv'} ({len(rows)} rows)")
    return 0


def cmd_stokes(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    config.require_valid()
    tol = 1e-12 * config.c * scenario.tol_scale
    rows = []
    for s in scenario.s_grid:
        for z0 in scenario.z0_grid:
            drift = meanflow.stokes_drift(s, z0, config, t=args.t, tol=tol)
            rows.append((s, z0, drift))
    write_csv(
        Path(scenario.out_dir) / "stokes.csv",
        _comments(args, scenario),
        ["s [m]", "z0 [m]", "stokes [m/s]"],
        rows,
    )
    print(f"wrote {Path(scenario.out_dir) / 'stokes.csv'} ({len(rows)} rows)")
    return 0


def cmd_flux(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    config.require_valid()
    rows = []
    for s in scenario.s_grid:
        r0s = geometry.surface_label(s, config)
        r_lower = r0s - scenario.r_lower_offset
        tol = 1e-10 * config.c * max(1.0, abs(r0s - r_lower)) * scenario.tol_scale
        for station in scenario.stations:
            if station == "crest":
                x0 = massflux.crest_station(config, args.t)
            elif station == "trough":
                x0 = massflux.trough_station(config, args.t)
            else:
                x0 = float(station)
            req = massflux.FluxRequest(x0=x0, s=s, t=args.t, r_lower=r_lower)
            res = massflux.truncated_flux(req, config, tol=tol)
            regime = massflux.flux_sign_condition(r_lower, s, config)
            rows.append(
                (_fmt(station) if isinstance(station, float) else station,
                 s, r_lower, res.value, res.error_estimate, regime)
            )
    write_csv(
        Path(scenario.out_dir) / "flux.csv",
        _comments(args, scenario),
        ["station [m or name]", "s [m]", "r_lower [m]",
         "value [m^2/s]", "err [m^2/s]", "regime [-]"],
        rows,
    )
    print(f"wrote {Path(scenario.out_dir) / 'flux.csv'} ({len(rows)} rows)")
    return 0


def cmd_trajectory(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    config.require_valid()
    s = scenario.s_grid[0]
    dt = config.period / scenario.steps_per_period
    span = scenario.periods * config.period
    start = field.EulerianQuery(x=scenario.x_start, z=scenario.z_start, s=s, t=args.t)
    traj = field.integrate_particle(start, args.t + span, dt, config)
    rows = [
        (
            traj.ts[i], traj.xs[i], traj.zs[i], traj.us[i], traj.ws[i],
            traj.labels_q[i], traj.labels_r[i], traj.xs[i] - traj.xs[0],
        )
        for i in range(len(traj.ts))
    ]
    write_csv(
        Path(scenario.out_dir) / "trajectory.csv",
        _comments(args, scenario, [f"s = {_fmt(s)} m, dt = {_fmt(dt)} s"]),
        ["t [s]", "x [m]", "z [m]", "u [m/s]", "w [m/s]",
         "q [m]", "r [m]", "displacement [m]"],
        rows,
    )
    print(f"wrote {Path(scenario.out_dir) / 'trajectory.csv'} ({len(rows)} rows)")
    return 0


def cmd_check(args) -> int:
    scenario = _scenario_from_args(args)
    config = wave_config(scenario)
    results = checks.run_all(config, tol_scale=scenario.tol_scale, seed=scenario.seed)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += not r.passed
        print(f"{status}  {r.name:<{width}}  {r.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eqdrift",
        description="numerical laboratory for an equatorially trapped wave on a uniform current",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    handlers = {
        "validate": cmd_validate,
        "surface": cmd_surface,
        "meanflow": cmd_meanflow,
        "stokes": cmd_stokes,
        "flux": cmd_flux,
        "trajectory": cmd_trajectory,
        "check": cmd_check,
    }
    for name, fn in handlers.items():
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", default=None,
                       help="scenario YAML (defaults apply when omitted)")
        p.add_argument("--out", metavar="DIR", default=None,
                       help="output directory (overrides scenario)")
        p.add_argument("--tol", metavar="FLOAT", type=float, default=None,
                       help="tolerance scale factor, 1.0 = documented defaults")
        p.add_argument("--seed", metavar="INT", type=int, default=None,
                       help="seed recorded in outputs and used by check sweeps")
        p.add_argument("--t", metavar="FLOAT", type=float, default=0.0,
                       help="evaluation time in seconds")
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, QuadratureError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (DomainError, ValueError) as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
