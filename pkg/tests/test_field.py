"""Eulerian reconstruction: inversion, velocity sampling, trajectories."""

import math

import numpy as np
import pytest

from eqdrift.errors import DomainError
from eqdrift.field import (
    EulerianQuery,
    Trajectory,
    divergence,
    eulerian_velocity,
    integrate_particle,
    invert_map,
    kinematic_surface_residual,
    surface_height,
)
from eqdrift.geometry import crest_trough, surface_elevation
from eqdrift.model import FlowSample, LagrangianLabel, label_to_position, label_velocity


def test_surface_height_matches_the_labelled_surface(cfg):
    # pick a point by mapping a surface label forward, then ask for it back
    x, eta = surface_elevation(17.0, 0.0, 0.8, cfg)
    assert surface_height(x, 0.0, 0.8, cfg) == pytest.approx(eta, abs=1e-11)


def test_invert_map_round_trip(cfg, rng):
    for _ in range(25):
        lab = LagrangianLabel(
            q=float(rng.uniform(-50.0, 150.0)),
            r=float(rng.uniform(-45.0, -5.5)),
            s=float(rng.uniform(-1e5, 1e5)),
        )
        t = float(rng.uniform(0.0, 20.0))
        x, _, z = label_to_position(lab, t, cfg)
        q, r = invert_map(EulerianQuery(x=x, z=z, s=lab.s, t=t), cfg)
        x2, _, z2 = label_to_position(LagrangianLabel(q=q, r=r, s=lab.s), t, cfg)
        assert abs(x2 - x) <= 1e-10
        assert abs(z2 - z) <= 1e-10


def test_invert_map_rejects_points_above_the_surface(cfg):
    x, eta = surface_elevation(40.0, 0.0, 0.0, cfg)
    with pytest.raises(DomainError, match="above surface"):
        invert_map(EulerianQuery(x=x, z=eta + 0.01, s=0.0, t=0.0), cfg)


def test_eulerian_velocity_agrees_with_label_velocity(cfg, rng):
    for _ in range(10):
        lab = LagrangianLabel(
            q=float(rng.uniform(0.0, 100.0)),
            r=float(rng.uniform(-40.0, -6.0)),
            s=0.0,
        )
        t = float(rng.uniform(0.0, 9.0))
        x, _, z = label_to_position(lab, t, cfg)
        u_lab, _, w_lab = label_velocity(lab, t, cfg)
        u, w = eulerian_velocity(EulerianQuery(x=x, z=z, s=0.0, t=t), cfg)
        assert u == pytest.approx(u_lab, abs=1e-10)
        assert w == pytest.approx(w_lab, abs=1e-10)


def test_velocity_field_is_divergence_free(cfg, rng):
    _, trough = crest_trough(0.0, cfg)
    for _ in range(6):
        query = EulerianQuery(
            x=float(rng.uniform(0.0, 100.0)),
            z=trough - float(rng.uniform(1.0, 20.0)),
            s=0.0,
            t=float(rng.uniform(0.0, 8.0)),
        )
        assert abs(divergence(query, cfg)) <= 1e-6 * cfg.c * cfg.k


def test_divergence_shrinks_at_second_order(cfg):
    _, trough = crest_trough(0.0, cfg)
    query = EulerianQuery(x=37.0, z=trough - 4.0, s=0.0, t=0.6)
    h = 1e-3 / cfg.k
    d1 = abs(divergence(query, cfg, h=h))
    d2 = abs(divergence(query, cfg, h=h / 2.0))
    assert d1 / d2 == pytest.approx(4.0, abs=1.0)


def test_kinematic_surface_condition(cfg, cfg_adverse, rng):
    for config in (cfg, cfg_adverse):
        for _ in range(4):
            x = float(rng.uniform(-30.0, 130.0))
            t = float(rng.uniform(0.0, 10.0))
            resid = kinematic_surface_residual(x, 1e4, t, config)
            assert abs(resid) <= 1e-6 * config.c


def test_trajectory_closes_without_current(cfg):
    _, trough = crest_trough(0.0, cfg)
    start = EulerianQuery(x=10.0, z=trough - 3.0, s=0.0, t=0.0)
    tr = integrate_particle(start, cfg.period, cfg.period / 1000.0, cfg)
    assert isinstance(tr, Trajectory)
    # no current: the orbit is closed to integrator accuracy
    assert abs(tr.xs[-1] - tr.xs[0]) <= 1e-9
    assert abs(tr.zs[-1] - tr.zs[0]) <= 1e-9


def test_trajectory_drifts_with_the_current():
    from eqdrift.model import WaveConfig

    config = WaveConfig(wavelength=100.0, r0=-5.0, c0=0.8)
    _, trough = crest_trough(0.0, config)
    start = EulerianQuery(x=0.0, z=trough - 5.0, s=0.0, t=0.0)
    tr = integrate_particle(start, config.period, config.period / 1000.0, config)
    drift = tr.xs[-1] - tr.xs[0]
    assert drift == pytest.approx(-config.c0 * config.period, abs=1e-6 * 100.0)


def test_trajectory_labels_are_material(cfg):
    _, trough = crest_trough(0.0, cfg)
    start = EulerianQuery(x=3.0, z=trough - 2.0, s=0.0, t=0.0)
    tr = integrate_particle(start, 3.0 * cfg.period, cfg.period / 500.0, cfg)
    assert np.ptp(tr.labels_q) <= 1e-8 / cfg.k
    assert np.ptp(tr.labels_r) <= 1e-8 / cfg.k


def test_trajectory_error_drops_at_fourth_order(cfg):
    _, trough = crest_trough(0.0, cfg)
    start = EulerianQuery(x=10.0, z=trough - 3.0, s=0.0, t=0.0)
    T = cfg.period

    def endpoint_gap(steps):
        tr = integrate_particle(start, T, T / steps, cfg)
        return math.hypot(tr.xs[-1] - tr.xs[0], tr.zs[-1] - tr.zs[0])

    e1, e2 = endpoint_gap(250), endpoint_gap(500)
    assert e1 / e2 == pytest.approx(16.0, rel=0.35)


def test_trajectory_sampling_layout(cfg):
    _, trough = crest_trough(0.0, cfg)
    start = EulerianQuery(x=5.0, z=trough - 3.0, s=2e4, t=1.5)
    dt = cfg.period / 300.0
    tr = integrate_particle(start, 1.5 + 60.0 * dt, dt, cfg)
    assert len(tr.ts) == 61
    assert tr.ts[0] == 1.5
    assert tr.ts[-1] == pytest.approx(1.5 + 60.0 * dt, rel=1e-15)
    assert tr.dt == dt
    assert tr.s == 2e4
    samples = tr.samples
    assert len(samples) == 61
    assert isinstance(samples[0], FlowSample)
    assert samples[0].x == tr.xs[0] and samples[0].t == tr.ts[0]
    assert samples[0].y == 2e4 and samples[0].v == 0.0


def test_trajectory_step_validation(cfg):
    _, trough = crest_trough(0.0, cfg)
    start = EulerianQuery(x=0.0, z=trough - 3.0, s=0.0, t=0.0)
    with pytest.raises(ValueError, match="dt"):
        integrate_particle(start, cfg.period, cfg.period / 100.0, cfg)
    with pytest.raises(ValueError, match="dt"):
        integrate_particle(start, cfg.period, -1.0, cfg)
    with pytest.raises(ValueError, match="multiple"):
        integrate_particle(start, cfg.period, cfg.period / 300.7, cfg)
    with pytest.raises(ValueError):
        integrate_particle(start, 0.0, cfg.period / 300.0, cfg)


def test_trajectory_start_must_be_submerged(cfg):
    x, eta = surface_elevation(12.0, 0.0, 0.0, cfg)
    with pytest.raises(DomainError):
        integrate_particle(
            EulerianQuery(x=x, z=eta + 0.5, s=0.0, t=0.0),
            cfg.period,
            cfg.period / 300.0,
            cfg,
        )
