"""Implicit relations fixing the wave's geometry.

Four questions are answered here, all by bracketed scalar solves on
strictly monotone residuals: at which latitudes does the wave exist
(trapping_region), which label surface is the free surface there
(surface_label), how high do crest and trough sit (crest_trough,
surface_elevation), and which label sits at a prescribed depth below the
trough (depth_label, with its horizontal slope).

The s-dependent terms all cancel at s = 0, so the margin and surface
residuals are written with expm1 to stay accurate near the equator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .model import WaveConfig, decay_f
from .rootfind import expand_down, newton_bisect

ALL_LATITUDES = "all-latitudes"
FINITE_BAND = "finite-band"


@dataclass(frozen=True)
class TrappingRegion:
    """Latitude band where the wave exists: every s, or |s| < s_max."""

    kind: str
    s_max: float | None = None

    def contains(self, s: float) -> bool:
        if self.kind == ALL_LATITUDES:
            return True
        return abs(s) < self.s_max


def existence_margin(s: float, config: WaveConfig) -> float:
    """Margin G(s) of the trapping inequality; negative means the wave exists.

    G(s) = (exp(2k(r0 - f(s))) - exp(2k r0))/(2k) + c0*beta*s^2/(2*gamma),
    evaluated via expm1 because the two exponentials agree to O(s^2). The
    equator is the marginal case G(0) = 0 and is always inside the band.
    """
    k = config.k
    fs = decay_f(s, config)
    decay_term = math.exp(2.0 * k * config.r0) * math.expm1(-2.0 * k * fs) / (2.0 * k)
    return decay_term + config.c0 * config.constants.beta * s * s / (2.0 * config.gamma)


def in_trapping_region(s: float, config: WaveConfig) -> bool:
    """True where the free-surface equation has a solution (strictly, or s=0)."""
    return s == 0.0 or existence_margin(s, config) < 0.0


def _margin_tol(config: WaveConfig) -> float:
    # natural size of the margin's constituent terms
    return 1e-13 * max(1.0, math.exp(2.0 * config.k * config.r0) / (2.0 * config.k))


def trapping_region(config: WaveConfig) -> TrappingRegion:
    """Latitude band of existence; a finite band only under an eastward current.

    For c0 <= 0 the margin is negative at every s != 0. For c0 > 0 it turns
    positive at a finite half-width s_max, located here by geometric growth
    and then a bracketed solve driving |G(s_max)| below 1e-13 in the units
    of G's own terms.
    """
    config.require_valid()
    if config.c0 <= 0.0:
        return TrappingRegion(kind=ALL_LATITUDES)

    def g(s):
        return existence_margin(s, config)

    def dg(s):
        # dG/ds = (beta*s/gamma) * (c0 - c*exp(2k(r0 - f(s))))
        fs = decay_f(s, config)
        b = config.constants.beta
        return (b * s / config.gamma) * (
            config.c0 - config.c * math.exp(2.0 * config.k * (config.r0 - fs))
        )

    lo = 1.0
    while g(lo) >= 0.0:
        lo *= 0.25
        if lo < 1e-12:
            raise ConvergenceError(
                "no interior latitude with negative margin found; "
                "configuration is marginal"
            )
    hi = lo
    while g(hi) < 0.0:
        hi *= 2.0
        if hi > 1e15:
            raise ConvergenceError("existence margin never turns positive")
    s_max = newton_bisect(g, dg, lo, hi, tol=_margin_tol(config))
    return TrappingRegion(kind=FINITE_BAND, s_max=s_max)


def _surface_residual(s: float, config: WaveConfig):
    """Residual F(d) of the surface-label equation in d = r - r0, and F'."""
    k = config.k
    fs = decay_f(s, config)
    e2kr0 = math.exp(2.0 * k * config.r0)
    s_term = config.c0 * config.constants.beta * s * s / (2.0 * config.gamma)

    def f(d):
        return e2kr0 * math.expm1(2.0 * k * (d - fs)) / (2.0 * k) - d + s_term

    def df(d):
        return e2kr0 * math.exp(2.0 * k * (d - fs)) - 1.0

    return f, df


def surface_label(s: float, config: WaveConfig) -> float:
    """Label r0(s) of the free surface at latitude s.

    The unique root of the surface equation below the critical level; it
    equals r0 exactly at the equator and decreases away from it. Outside
    the trapping band there is no root and DomainError is raised.
    """
    config.require_valid()
    if s == 0.0:
        return config.r0
    if not in_trapping_region(s, config):
        raise DomainError(
            f"latitude s={s:g} outside the trapping band: no free surface there"
        )
    f, df = _surface_residual(s, config)
    # f(0) = G(s) < 0 and f is strictly decreasing in d, so the root is below
    lo, hi = expand_down(f, 0.0, 10.0 / config.k)
    # seed with the Newton step from d = 0
    d0 = -f(0.0) / df(0.0)
    d = newton_bisect(
        f, df, lo, hi, x0=d0, tol=1e-13 * max(1.0, abs(config.r0))
    )
    return config.r0 + d


def crest_trough(s: float, config: WaveConfig) -> tuple[float, float]:
    """Crest and trough levels (z_plus, z_minus) = r0(s) +- exp(xi_s)/k."""
    r0s = surface_label(s, config)
    amp = math.exp(config.k * (r0s - decay_f(s, config))) / config.k
    return r0s + amp, r0s - amp


@dataclass(frozen=True)
class SurfaceProfile:
    """One spatial period of the free surface at fixed latitude and time."""

    s: float
    t: float
    r0_s: float
    z_plus: float
    z_minus: float
    q: np.ndarray
    x: np.ndarray
    eta: np.ndarray


def surface_elevation(q, s: float, t: float, config: WaveConfig):
    """Parametric surface point(s) (x, eta) for phase label(s) q.

    q may be a scalar or an array; x and eta come back with the same shape.
    The surface is the image of the label line r = r0(s), so sampling q
    over one wavelength traces one spatial period.
    """
    r0s = surface_label(s, config)
    k = config.k
    e = math.exp(k * (r0s - decay_f(s, config)))
    qa = np.asarray(q, dtype=float)
    th = k * (qa - config.c * t)
    x = qa - config.c0 * t - e * np.sin(th) / k
    eta = r0s + e * np.cos(th) / k
    if qa.ndim == 0:
        return float(x), float(eta)
    return x, eta


def surface_profile(s: float, t: float, config: WaveConfig, n: int = 257) -> SurfaceProfile:
    """Sample one period of the surface into a SurfaceProfile."""
    z_plus, z_minus = crest_trough(s, config)
    q = np.linspace(0.0, config.wavelength, n)
    x, eta = surface_elevation(q, s, t, config)
    return SurfaceProfile(
        s=s,
        t=t,
        r0_s=surface_label(s, config),
        z_plus=z_plus,
        z_minus=z_minus,
        q=q,
        x=x,
        eta=eta,
    )


def depth_label(q: float, s: float, z0: float, t: float, config: WaveConfig) -> float:
    """Label R on the vertical line of constant depth z0 at phase label q.

    z0 must lie strictly below the trough at latitude s; the constant-depth
    line then stays inside the fluid for every q and the defining equation
    R + exp(k(R - f(s)))*cos(k(q - c t))/k = z0 has exactly one root.
    """
    config.require_valid()
    _, z_minus = crest_trough(s, config)
    if not z0 < z_minus:
        raise DomainError(
            f"depth z0={z0:g} not below the trough z={z_minus:g} at s={s:g}"
        )
    fs = decay_f(s, config)
    tol = 1e-13 * max(1.0, abs(z0))
    r = kernels.solve_depth(
        np.array([q], dtype=float), t, z0, fs, config.k, config.c, tol
    )
    return float(r[0])


def depth_label_slope(q: float, s: float, z0: float, t: float, config: WaveConfig) -> float:
    """Horizontal slope dR/dq of the constant-depth label line.

    Differentiating the defining equation gives
    dR/dq = exp(xi)*sin(theta) / (1 + exp(xi)*cos(theta)) at R(q).
    """
    r = depth_label(q, s, z0, t, config)
    e = math.exp(config.k * (r - decay_f(s, config)))
    th = config.k * (q - config.c * t)
    return e * math.sin(th) / (1.0 + e * math.cos(th))
