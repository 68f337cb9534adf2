"""Command-line front end: scenarios, CSV contracts, exit codes."""

import math

import pytest

from eqdrift import cli, field, geometry
from eqdrift.errors import ConvergenceError, DomainError, QuadratureError
from eqdrift.model import WaveConfig


def run(argv, capsys):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


# ---------------------------------------------------------------- scenarios


def test_scenario_defaults_without_file():
    scenario = cli.load_scenario(None)
    assert scenario == cli.ScenarioConfig()
    assert scenario.wavelength == 100.0
    assert scenario.stations == ("crest", "trough")


def test_scenario_dump_load_roundtrip(tmp_path):
    scenario = cli.ScenarioConfig(
        wavelength=80.0,
        c0=-0.4,
        beta=1.1e-11,
        s_grid=(0.0, 1.0e4, 5.0e4),
        stations=("crest", 12.5, "trough"),
        steps_per_period=400,
        seed=3,
        out_dir="elsewhere",
    )
    path = tmp_path / "scenario.yaml"
    path.write_text(cli.dump_scenario(scenario))
    assert cli.load_scenario(path) == scenario


@pytest.mark.parametrize(
    "text, needle",
    [
        ("wavelngth: 100.0\n", "unknown fields"),
        ("- 1\n- 2\n", "must be a mapping"),
        ("s_grid: 5\n", "nonempty list"),
        ("s_grid: []\n", "nonempty list"),
        ("z0_grid: [-10.0, -20.0]\n", "sorted ascending"),
        ("stations: [peak]\n", "not recognised"),
        ("seed: true\n", "must be an integer"),
        ("steps_per_period: 3.5\n", "must be an integer"),
        ("wavelength: [1, 2]\n", "wavelength"),
        ("c0: {a: 1}\n", "c0"),
    ],
)
def test_scenario_rejects_bad_fields(tmp_path, text, needle):
    path = tmp_path / "bad.yaml"
    path.write_text(text)
    with pytest.raises(cli.ScenarioError, match=needle):
        cli.load_scenario(path)


def test_scenario_missing_file():
    with pytest.raises(cli.ScenarioError, match="cannot read"):
        cli.load_scenario("/nonexistent/scenario.yaml")


def test_scenario_unparseable_file(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("stations: [crest\n")
    with pytest.raises(cli.ScenarioError, match="cannot parse"):
        cli.load_scenario(path)


def test_empty_scenario_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert cli.load_scenario(path) == cli.ScenarioConfig()


# ----------------------------------------------------------------- validate


def test_validate_default_config(capsys):
    rc, out, _ = run(["validate"], capsys)
    assert rc == 0
    assert "configuration valid" in out
    assert "all latitudes" in out
    assert "phase speed" in out


def test_validate_reports_finite_band(tmp_path, capsys):
    path = tmp_path / "band.yaml"
    path.write_text("c0: 3.0\n")
    rc, out, _ = run(["validate", "--config", str(path)], capsys)
    assert rc == 0
    assert "|s| <" in out


def test_validate_rejects_strong_eastward_current(tmp_path, capsys):
    path = tmp_path / "strong.yaml"
    path.write_text("c0: 8.0\n")
    rc, out, _ = run(["validate", "--config", str(path)], capsys)
    assert rc == 1
    assert "invalid:" in out
    assert "eastward current too strong" in out


# ------------------------------------------------------------- CSV writers


def test_surface_rows_and_header(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, out, _ = run(["surface", "--out", str(out_dir)], capsys)
    assert rc == 0
    comments, header, rows = cli.read_csv(out_dir / "surface.csv")
    assert header == ["s [m]", "q [m]", "x [m]", "eta [m]"]
    scenario = cli.ScenarioConfig()
    assert len(rows) == len(scenario.s_grid) * scenario.surface_samples
    assert comments[0] == "eqdrift surface"
    assert any(c.startswith("seed = ") for c in comments)


def test_meanflow_rows_header_and_flags(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, _, _ = run(["meanflow", "--out", str(out_dir)], capsys)
    assert rc == 0
    _, header, rows = cli.read_csv(out_dir / "meanflow.csv")
    assert header == [
        "s [m]", "z0 [m]", "mean_lagrangian [m/s]", "mean_eulerian [m/s]",
        "err [m/s]", "stokes [m/s]", "lower [m/s]", "upper [m/s]",
        "westward_sufficient [bool]", "eastward_sufficient [bool]",
    ]
    assert len(rows) == 4
    for row in rows:
        # c0 = 0: westward mean, eastward flag cannot fire
        assert row[3] < 0.0
        assert row[8] == "true"
        assert row[9] == "false"


def test_stokes_rows_all_positive_without_current(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, _, _ = run(["stokes", "--out", str(out_dir)], capsys)
    assert rc == 0
    _, header, rows = cli.read_csv(out_dir / "stokes.csv")
    assert header == ["s [m]", "z0 [m]", "stokes [m/s]"]
    assert len(rows) == 4
    assert all(row[2] > 0.0 for row in rows)


def test_flux_rows_header_and_regime(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, _, _ = run(["flux", "--out", str(out_dir)], capsys)
    assert rc == 0
    _, header, rows = cli.read_csv(out_dir / "flux.csv")
    assert header == [
        "station [m or name]", "s [m]", "r_lower [m]",
        "value [m^2/s]", "err [m^2/s]", "regime [-]",
    ]
    assert len(rows) == 4
    for row in rows:
        assert row[0] in ("crest", "trough")
        assert row[5] == "normal"
        assert abs(row[4]) < abs(row[3])
    # crest columns carry more flux than trough columns at the same s
    by_station = {(row[0], row[1]): row[3] for row in rows}
    for s in (0.0, 5.0e4):
        assert by_station[("crest", s)] > 0.0 > by_station[("trough", s)]


def test_trajectory_rows_and_drift(tmp_path, capsys):
    scenario_path = tmp_path / "drift.yaml"
    scenario_path.write_text("c0: 0.6\n")
    out_dir = tmp_path / "out"
    rc, _, _ = run(
        ["trajectory", "--config", str(scenario_path), "--out", str(out_dir)],
        capsys,
    )
    assert rc == 0
    _, header, rows = cli.read_csv(out_dir / "trajectory.csv")
    assert header == [
        "t [s]", "x [m]", "z [m]", "u [m/s]", "w [m/s]",
        "q [m]", "r [m]", "displacement [m]",
    ]
    assert len(rows) == 1001
    config = WaveConfig(wavelength=100.0, r0=-5.0, c0=0.6)
    drift = rows[-1][7]
    assert math.isclose(drift, -0.6 * config.period, abs_tol=1e-6 * 100.0)


def test_trajectory_csv_reparses_bit_exactly(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, _, _ = run(["trajectory", "--out", str(out_dir)], capsys)
    assert rc == 0
    _, _, rows = cli.read_csv(out_dir / "trajectory.csv")
    scenario = cli.ScenarioConfig()
    config = cli.wave_config(scenario)
    dt = config.period / scenario.steps_per_period
    start = field.EulerianQuery(x=0.0, z=-20.0, s=0.0, t=0.0)
    traj = field.integrate_particle(start, config.period, dt, config)
    for i in (0, 1, 500, 1000):
        assert rows[i][0] == traj.ts[i]
        assert rows[i][1] == traj.xs[i]
        assert rows[i][2] == traj.zs[i]
        assert rows[i][5] == traj.labels_q[i]
        assert rows[i][6] == traj.labels_r[i]


def test_identical_invocations_are_byte_identical(tmp_path, capsys):
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    assert cli.main(["meanflow", "--out", str(dir_a), "--seed", "5"]) == 0
    assert cli.main(["meanflow", "--out", str(dir_b), "--seed", "5"]) == 0
    capsys.readouterr()
    bytes_a = (dir_a / "meanflow.csv").read_bytes()
    bytes_b = (dir_b / "meanflow.csv").read_bytes()
    assert bytes_a == bytes_b
    assert b"\r" not in bytes_a


def test_seed_recorded_in_comments(tmp_path, capsys):
    out_dir = tmp_path / "out"
    rc, _, _ = run(["stokes", "--out", str(out_dir), "--seed", "7"], capsys)
    assert rc == 0
    comments, _, _ = cli.read_csv(out_dir / "stokes.csv")
    assert "seed = 7" in comments


# -------------------------------------------------------------------- check


def test_check_default_config_passes(capsys):
    rc, out, _ = run(["check"], capsys)
    assert rc == 0
    assert "FAIL" not in out
    summary = out.strip().splitlines()[-1]
    passed, total = summary.split()[0].split("/")
    assert passed == total


def test_check_mutation_hook_trips_the_suite(capsys, monkeypatch):
    monkeypatch.setenv("EQDRIFT_MUTATE", "jacobian-determinant")
    rc, out, _ = run(["check"], capsys)
    assert rc == 1
    assert "FAIL  jacobian-determinant" in out


def test_check_tightened_tolerance_fails_documented_subset(capsys):
    # the two checks documented as tolerance-limited trip at 100x tightening
    rc, out, _ = run(["check", "--tol", "0.01"], capsys)
    assert rc == 1
    assert "FAIL  divergence-magnitude" in out
    assert "FAIL  surface-riding" in out
    assert "PASS  jacobian-determinant" in out


# --------------------------------------------------------------- exit codes


def test_exit_code_scenario_error(capsys):
    rc, _, err = run(["validate", "--config", "/nonexistent/s.yaml"], capsys)
    assert rc == 3
    assert "error:" in err


def test_exit_code_nonpositive_tol(capsys):
    rc, _, err = run(["validate", "--tol", "0"], capsys)
    assert rc == 3
    assert "--tol must be positive" in err


def test_exit_code_invalid_config_for_writers(tmp_path, capsys):
    path = tmp_path / "neg.yaml"
    path.write_text("wavelength: -5.0\n")
    rc, _, err = run(["surface", "--config", str(path), "--out", str(tmp_path)], capsys)
    assert rc == 1
    assert "validation failure" in err


def test_exit_code_domain_error(tmp_path, capsys):
    # a start point above the crest line is a domain violation
    path = tmp_path / "high.yaml"
    path.write_text("z_start: 7.0\n")
    rc, _, err = run(
        ["trajectory", "--config", str(path), "--out", str(tmp_path / "out")],
        capsys,
    )
    assert rc == 1
    assert "validation failure" in err


def test_exit_code_numerical_failure(tmp_path, capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise QuadratureError("node budget exhausted")

    monkeypatch.setattr(cli.meanflow, "mean_flow_report", boom)
    rc, _, err = run(["meanflow", "--out", str(tmp_path / "out")], capsys)
    assert rc == 2
    assert "numerical failure" in err


def test_exit_code_convergence_failure(tmp_path, capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise ConvergenceError("iteration stalled")

    monkeypatch.setattr(cli.geometry, "surface_profile", boom)
    rc, _, err = run(["surface", "--out", str(tmp_path / "out")], capsys)
    assert rc == 2
    assert "numerical failure" in err


def test_exit_code_io_failure(tmp_path, capsys):
    blocker = tmp_path / "blocker"
    blocker.write_text("occupied")
    rc, _, err = run(["stokes", "--out", str(blocker / "sub")], capsys)
    assert rc == 3
    assert "i/o failure" in err
