"""Configuration, dispersion, flow map, and Jacobian."""

import math

import numpy as np
import pytest

from eqdrift.errors import DomainError
from eqdrift.model import (
    FlowSample,
    LagrangianLabel,
    PhysicalConstants,
    WaveConfig,
    decay_f,
    flow_sample,
    jacobian,
    label_to_position,
    label_velocity,
    modified_gravity,
    phase_speed,
    validate_config,
)

# frozen reference values: tests/oracle_gen.py
BETA_DEFAULT = 2.2891188460332393e-11
C_REF = 12.487707036027010
K_REF = 0.062831853071795865
PERIOD_REF = 8.0078752417477604
DET_REF = 0.53166158191236404


def test_beta_derived_from_rotation_and_radius():
    consts = PhysicalConstants()
    assert consts.beta == pytest.approx(BETA_DEFAULT, rel=1e-15)
    assert consts.beta == pytest.approx(2.0 * consts.omega / consts.earth_radius, rel=0)


def test_beta_override_close_to_derived_is_quiet(recwarn):
    PhysicalConstants(beta=2.28e-11)
    assert not recwarn.list


def test_beta_override_far_from_derived_warns():
    with pytest.warns(UserWarning):
        PhysicalConstants(beta=3.0e-11)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"omega": 0.0},
        {"omega": -1e-5},
        {"g": 0.0},
        {"earth_radius": -1.0},
        {"beta": 0.0},
    ],
)
def test_constants_must_be_positive(kwargs):
    with pytest.raises(ValueError):
        PhysicalConstants(**kwargs)


def test_modified_gravity_value():
    consts = PhysicalConstants()
    assert modified_gravity(0.0, consts) == consts.g
    assert modified_gravity(2.0, consts) == pytest.approx(
        consts.g + 4.0 * consts.omega, rel=0
    )


def test_modified_gravity_rejects_strong_adverse_current():
    consts = PhysicalConstants()
    with pytest.raises(ValueError, match="modified gravity"):
        modified_gravity(-consts.g / (2.0 * consts.omega) - 1.0, consts)


def test_phase_speed_reference_value():
    consts = PhysicalConstants()
    c = phase_speed(K_REF, consts.g, consts)
    assert c == pytest.approx(C_REF, rel=1e-15)


def test_phase_speed_solves_dispersion(rng):
    consts = PhysicalConstants()
    for _ in range(25):
        L = float(rng.uniform(5.0, 5000.0))
        c0 = float(rng.uniform(-3.0, 3.0))
        k = 2.0 * math.pi / L
        gamma = modified_gravity(c0, consts)
        c = phase_speed(k, gamma, consts)
        assert abs(k * c * c + 2.0 * consts.omega * c - gamma) <= 1e-12 * gamma


def test_phase_speed_survives_vanishing_rotation():
    # as omega -> 0 the dispersion degenerates to c^2 = g/k; the stable
    # formula must not cancel catastrophically
    consts = PhysicalConstants(omega=1e-13)
    c = phase_speed(K_REF, consts.g, consts)
    assert c == pytest.approx(12.488868813069398, rel=1e-12)


def test_config_derived_quantities(cfg):
    assert cfg.k == pytest.approx(K_REF, rel=1e-15)
    assert cfg.gamma == pytest.approx(9.8, rel=1e-15)
    assert cfg.c == pytest.approx(C_REF, rel=1e-15)
    assert cfg.period == pytest.approx(PERIOD_REF, rel=1e-15)


def test_config_construction_never_raises():
    # diagnosis happens in validate_config, not the constructor
    bad = WaveConfig(wavelength=-4.0, r0=3.0, c0=0.0)
    problems = validate_config(bad)
    assert len(problems) >= 2


@pytest.mark.parametrize(
    "kwargs, needle",
    [
        ({"wavelength": 0.0}, "wavelength"),
        ({"r0": 0.0}, "r0"),
        ({"r0": 1.5}, "r0"),
        ({"c0": -67200.0}, "gravity"),
        ({"c0": 10.0}, "eastward current too strong"),
    ],
)
def test_validate_config_names_each_violation(kwargs, needle):
    base = dict(wavelength=100.0, r0=-5.0, c0=0.0)
    base.update(kwargs)
    problems = validate_config(WaveConfig(**base))
    assert any(needle in p for p in problems)


def test_validate_config_clean_reference(cfg):
    assert validate_config(cfg) == []
    cfg.require_valid()


def test_require_valid_raises_with_reasons():
    bad = WaveConfig(wavelength=100.0, r0=2.0, c0=0.0)
    with pytest.raises(ValueError, match="invalid configuration"):
        bad.require_valid()


def test_decay_scale_at_hundred_kilometres():
    # at L = 100 m the meridional decay reaches ~0.145 m by s = 100 km
    consts = PhysicalConstants(beta=2.28e-11)
    config = WaveConfig(wavelength=100.0, r0=-5.0, c0=0.0, constants=consts)
    # frozen: tests/oracle_gen.py
    assert decay_f(1.0e5, config) == pytest.approx(0.14526516348031420, rel=1e-13)


def test_decay_scale_even_and_increasing(cfg):
    assert decay_f(0.0, cfg) == 0.0
    assert decay_f(-7e4, cfg) == decay_f(7e4, cfg)
    assert decay_f(2e5, cfg) == pytest.approx(4.0 * decay_f(1e5, cfg), rel=1e-14)


def test_flow_map_at_phase_zero(cfg):
    # with theta = 0 the map displaces purely vertically
    lab = LagrangianLabel(q=0.0, r=-9.0, s=0.0)
    x, y, z = label_to_position(lab, 0.0, cfg)
    assert x == 0.0
    assert y == 0.0
    assert z == pytest.approx(-9.0 + math.exp(cfg.k * -9.0) / cfg.k, rel=1e-15)


def test_flow_map_translates_at_phase_speed(cfg):
    lab = LagrangianLabel(q=13.0, r=-8.0, s=4e4)
    x0, _, z0 = label_to_position(lab, 0.0, cfg)
    x1, _, z1 = label_to_position(lab, cfg.period, cfg)
    assert z1 == pytest.approx(z0, abs=1e-12)
    assert x1 - x0 == pytest.approx(-cfg.c0 * cfg.period, abs=1e-9)


def test_flow_map_requires_label_below_critical_level(cfg):
    with pytest.raises(DomainError, match="r < f\\(s\\)"):
        label_to_position(LagrangianLabel(q=0.0, r=1.0, s=0.0), 0.0, cfg)
    with pytest.raises(DomainError):
        label_velocity(LagrangianLabel(q=0.0, r=0.0, s=0.0), 0.0, cfg)


def test_velocity_is_time_derivative_of_position(cfg, rng):
    h = 1e-6
    for _ in range(10):
        lab = LagrangianLabel(
            q=float(rng.uniform(0, 100)),
            r=float(rng.uniform(-30, -6)),
            s=float(rng.uniform(-1e5, 1e5)),
        )
        t = float(rng.uniform(0, 10))
        xp, _, zp = label_to_position(lab, t + h, cfg)
        xm, _, zm = label_to_position(lab, t - h, cfg)
        u, v, w = label_velocity(lab, t, cfg)
        assert u == pytest.approx((xp - xm) / (2 * h), abs=1e-7)
        assert w == pytest.approx((zp - zm) / (2 * h), abs=1e-7)
        assert v == 0.0


def test_deep_labels_drift_with_the_current(cfg_adverse):
    lab = LagrangianLabel(q=50.0, r=-700.0, s=0.0)
    u, v, w = label_velocity(lab, 1.0, cfg_adverse)
    assert u == pytest.approx(-cfg_adverse.c0, abs=1e-15)
    assert w == pytest.approx(0.0, abs=1e-15)


def test_flow_sample_bundles_position_and_velocity(cfg):
    lab = LagrangianLabel(q=7.0, r=-12.0, s=3e4)
    sample = flow_sample(lab, 2.5, cfg)
    assert isinstance(sample, FlowSample)
    assert sample.t == 2.5
    assert sample.y == lab.s
    assert sample.v == 0.0
    x, _, z = label_to_position(lab, 2.5, cfg)
    assert (sample.x, sample.z) == (x, z)


def test_jacobian_determinant_frozen_value(cfg):
    lab = LagrangianLabel(q=3.0, r=-6.0, s=5e4)
    _, det = jacobian(lab, 0.7, cfg)
    assert det == pytest.approx(DET_REF, rel=1e-14)


def test_jacobian_determinant_matches_numeric_and_ignores_time(cfg, rng):
    for _ in range(20):
        lab = LagrangianLabel(
            q=float(rng.uniform(0, 100)),
            r=float(rng.uniform(-40, -5.5)),
            s=float(rng.uniform(-2e5, 2e5)),
        )
        dets = []
        for t in (0.0, 2.3, 17.9):
            J, det = jacobian(lab, t, cfg)
            assert np.linalg.det(J) == pytest.approx(det, rel=1e-12)
            dets.append(det)
        assert dets[0] == dets[1] == dets[2]
        assert 0.0 < dets[0] < 1.0


def test_jacobian_matches_finite_differences(cfg):
    lab = LagrangianLabel(q=11.0, r=-9.0, s=6e4)
    t = 1.3
    J, _ = jacobian(lab, t, cfg)
    h = 1e-6

    def pos(q, r, s):
        return np.array(label_to_position(LagrangianLabel(q=q, r=r, s=s), t, cfg))

    # row i of J differentiates (x, y, z) along the i-th label axis (q, s, r)
    fd = np.vstack(
        [
            (pos(lab.q + h, lab.r, lab.s) - pos(lab.q - h, lab.r, lab.s)) / (2 * h),
            (pos(lab.q, lab.r, lab.s + h) - pos(lab.q, lab.r, lab.s - h)) / (2 * h),
            (pos(lab.q, lab.r + h, lab.s) - pos(lab.q, lab.r - h, lab.s)) / (2 * h),
        ]
    )
    assert np.allclose(J, fd, atol=1e-7)
