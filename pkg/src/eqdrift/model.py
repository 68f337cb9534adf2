"""Wave parameters and the closed-form pieces of the trapped-wave flow.

Everything is SI (metres, seconds, radians) on an equatorial tangent-plane
with x east, y north, z up and z = 0 at the undisturbed surface level of
the reference latitude. A particle is identified by its label (q, r, s);
the flow map below sends labels to positions at time t. The map is an
explicit formula, so this module needs no iteration; the implicit inverses
live in geometry.py and field.py.

Symbols used throughout the package:

    k      wavenumber, 2*pi/wavelength
    c0     uniform underlying current (eastward positive)
    gamma  modified gravity 2*omega*c0 + g
    c      eastward phase speed, positive root of k*c^2 + 2*omega*c = gamma
    f(s)   meridional decay offset c*beta*s^2/(2*gamma)
    xi     k*(r - f(s)), negative everywhere in the fluid
    theta  k*(q - c*t), the travelling phase
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhysicalConstants:
    """Rotation rate and gravity, plus the derived equatorial beta.

    beta defaults to 2*omega/earth_radius; passing it explicitly is allowed
    (e.g. a rounded literature value) but a warning is raised when it
    differs from the derived value by more than 1%.
    """

    omega: float = 7.3e-5          # planetary angular speed, rad/s
    g: float = 9.8                 # gravitational acceleration, m/s^2
    earth_radius: float = 6.378e6  # m
    beta: float | None = None      # 1/(m*s), derived when omitted

    def __post_init__(self):
        for name in ("omega", "g", "earth_radius"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        derived = 2.0 * self.omega / self.earth_radius
        if self.beta is None:
            object.__setattr__(self, "beta", derived)
        elif not self.beta > 0.0:
            raise ValueError("beta must be strictly positive")
        elif abs(self.beta - derived) > 0.01 * derived:
            warnings.warn(
                f"beta={self.beta:.6g} differs from 2*omega/earth_radius"
                f"={derived:.6g} by more than 1%",
                stacklevel=2,
            )


def modified_gravity(c0: float, constants: PhysicalConstants) -> float:
    """Effective restoring acceleration 2*omega*c0 + g seen by the wave."""
    gamma = 2.0 * constants.omega * c0 + constants.g
    if gamma <= 0.0:
        raise ValueError(
            "modified gravity 2*omega*c0 + g must be positive "
            "(requires c0 > -g/(2*omega))"
        )
    return gamma


def phase_speed(k: float, gamma: float, constants: PhysicalConstants) -> float:
    """Eastward phase speed: the positive root of k*c^2 + 2*omega*c - gamma = 0.

    Evaluated as gamma/(omega + sqrt(omega^2 + k*gamma)), which is the same
    root rationalized to avoid cancellation when k*gamma << omega^2.
    """
    if k <= 0.0:
        raise ValueError("wavenumber k must be positive")
    if gamma <= 0.0:
        raise ValueError("gamma must be positive")
    om = constants.omega
    return gamma / (om + math.sqrt(om * om + k * gamma))


@dataclass(frozen=True)
class WaveConfig:
    """Wave, current and domain parameters with cached derived quantities.

    wavelength : spatial period in x, m
    r0         : surface label at the equator (s = 0), m; negative in any
                 valid configuration
    c0         : underlying uniform current, m/s (eastward positive)

    Construction never rejects physically inadmissible values; the derived
    fields k, gamma, c are NaN where undefined. Use validate_config (or
    require_valid) to interrogate a candidate configuration. All solvers in
    this package assume a configuration with no violations.
    """

    wavelength: float
    r0: float
    c0: float = 0.0
    constants: PhysicalConstants = PhysicalConstants()
    k: float = field(init=False)
    gamma: float = field(init=False)
    c: float = field(init=False)

    def __post_init__(self):
        k = TWO_PI / self.wavelength if self.wavelength > 0.0 else math.nan
        gamma = 2.0 * self.constants.omega * self.c0 + self.constants.g
        if k > 0.0 and gamma > 0.0:
            c = phase_speed(k, gamma, self.constants)
        else:
            c = math.nan
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "c", c)

    @property
    def period(self) -> float:
        """Temporal period wavelength/c, s."""
        return self.wavelength / self.c

    def require_valid(self):
        violations = validate_config(self)
        if violations:
            raise ValueError("invalid configuration: " + "; ".join(violations))
        return self


def validate_config(config: WaveConfig) -> list[str]:
    """Collect admissibility violations; an empty list means valid.

    Checks, in order: k > 0, r0 < 0, gamma > 0, c > 0, and for an adverse
    (eastward) current the strong-current bound c0 < c*exp(2*k*r0) that the
    existence of a trapping region requires.
    """
    v = []
    if not config.k > 0.0:
        v.append("wavelength must be positive so that k = 2*pi/wavelength > 0")
    if not config.r0 < 0.0:
        v.append("surface label r0 must be negative")
    if not config.gamma > 0.0:
        v.append(
            "modified gravity gamma = 2*omega*c0 + g must be positive "
            "(requires c0 > -g/(2*omega))"
        )
    if not config.c > 0.0:
        v.append("phase speed c must be positive")
    if config.c0 > 0.0 and config.c > 0.0 and config.k > 0.0:
        if not config.c0 < config.c * math.exp(2.0 * config.k * config.r0):
            v.append(
                "eastward current too strong: requires c0 < c*exp(2*k*r0)"
            )
    return v


@dataclass(frozen=True)
class LagrangianLabel:
    """Particle label: q tracks phase, r depth, s latitude."""

    q: float
    r: float
    s: float


@dataclass(frozen=True)
class FlowSample:
    """Position and velocity of one particle at one instant."""

    t: float
    x: float
    y: float
    z: float
    u: float
    v: float
    w: float


def decay_f(s: float, config: WaveConfig) -> float:
    """Meridional decay offset f(s) = c*beta*s^2/(2*gamma)."""
    return config.c * config.constants.beta * s * s / (2.0 * config.gamma)


def _phase(label: LagrangianLabel, t: float, config: WaveConfig):
    xi = config.k * (label.r - decay_f(label.s, config))
    theta = config.k * (label.q - config.c * t)
    return xi, theta


def label_to_position(
    label: LagrangianLabel, t: float, config: WaveConfig
) -> tuple[float, float, float]:
    """Position (x, y, z) of the particle with the given label at time t.

    The map is

        x = q - c0*t - exp(xi)*sin(theta)/k
        y = s
        z = r + exp(xi)*cos(theta)/k

    and is only defined for xi = k*(r - f(s)) < 0; labels at or above that
    level raise DomainError.
    """
    xi, theta = _phase(label, t, config)
    if not xi < 0.0:
        raise DomainError(
            f"label r={label.r:g}, s={label.s:g} outside the admissible "
            "domain: the flow map requires r < f(s)"
        )
    amp = math.exp(xi) / config.k
    x = label.q - config.c0 * t - amp * math.sin(theta)
    y = label.s
    z = label.r + amp * math.cos(theta)
    return x, y, z


def label_velocity(
    label: LagrangianLabel, t: float, config: WaveConfig
) -> tuple[float, float, float]:
    """Velocity (u, v, w) of the particle with the given label at time t.

    u = c*exp(xi)*cos(theta) - c0, v = 0, w = c*exp(xi)*sin(theta); in the
    deep limit r -> -inf this tends to (-c0, 0, 0).
    """
    xi, theta = _phase(label, t, config)
    if not xi < 0.0:
        raise DomainError(
            f"label r={label.r:g}, s={label.s:g} outside the admissible "
            "domain: the flow map requires r < f(s)"
        )
    ce = config.c * math.exp(xi)
    return ce * math.cos(theta) - config.c0, 0.0, ce * math.sin(theta)


def flow_sample(label: LagrangianLabel, t: float, config: WaveConfig) -> FlowSample:
    """Bundle position and velocity of one labelled particle at time t."""
    x, y, z = label_to_position(label, t, config)
    u, v, w = label_velocity(label, t, config)
    return FlowSample(t=t, x=x, y=y, z=z, u=u, v=v, w=w)


def jacobian(
    label: LagrangianLabel, t: float, config: WaveConfig
) -> tuple[np.ndarray, float]:
    """Derivative of position with respect to the label, and its determinant.

    Returns
    -------
    J : (3, 3) ndarray
        Row i holds the derivatives of position (x, y, z) with respect to
        the i-th label component in the order (q, s, r).
    det : float
        The analytic determinant 1 - exp(2*xi). It is independent of t and
        of q, so the map preserves volume along every trajectory.
    """
    xi, theta = _phase(label, t, config)
    if not xi < 0.0:
        raise DomainError(
            f"label r={label.r:g}, s={label.s:g} outside the admissible "
            "domain: the flow map requires r < f(s)"
        )
    e = math.exp(xi)
    sn = math.sin(theta)
    cs = math.cos(theta)
    # d f/d s = c*beta*s/gamma
    fs = config.c * config.constants.beta * label.s / config.gamma
    J = np.array(
        [
            [1.0 - e * cs, 0.0, -e * sn],
            [fs * e * sn, 1.0, -fs * e * cs],
            [-e * sn, 0.0, 1.0 + e * cs],
        ]
    )
    return J, 1.0 - e * e
