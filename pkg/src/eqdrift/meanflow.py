"""Period-averaged horizontal velocities and their directional conditions.

The Lagrangian mean (following a particle) is exactly -c0. The Eulerian
mean at a fixed point below the trough is a wavelength average computed in
label form: with R(q) the constant-depth label line, xi = k*(R - f(s)) and
theta = k*(q - c*t),

    <u>_E = -(1/L) * int_0^L [ c*e^{2 xi} + c0*(1 - e^{2 xi})/(1 + e^{xi} cos theta) ] dq.

The difference of the two means is the drift of particles relative to the
fixed-point average. Bounds follow from 1 - e^{xi} <= (1 - e^{2 xi})/(1 +
e^{xi} cos theta) <= 1 + e^{xi}; the sufficient conditions for a westward
or eastward mean compare c0 against extrema of the pointwise ratios, which
this module computes along two independent routes (extrema located
analytically at the phases where dR/dq = 0, and by direct grid scan) and
cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceError, DomainError
from .geometry import crest_trough, in_trapping_region
from .model import WaveConfig, decay_f
from .quadrature import QuadResult, integrate
from .rootfind import newton_bisect


def mean_lagrangian(config: WaveConfig) -> float:
    """Period average of u following any particle: exactly -c0.

    At fixed label the oscillatory parts of position and velocity are
    T-periodic, so only the uniform -c0*t drift survives; no quadrature.
    """
    config.require_valid()
    return -config.c0


def _check_line(s: float, z0: float, config: WaveConfig) -> float:
    """Validate the constant-depth line (s, z0); return f(s)."""
    config.require_valid()
    if not in_trapping_region(s, config):
        raise DomainError(
            f"latitude s={s:g} outside the trapping band: no wave there"
        )
    _, z_minus = crest_trough(s, config)
    if not z0 < z_minus:
        raise DomainError(
            f"depth z0={z0:g} not below the trough z={z_minus:g} at s={s:g}"
        )
    return decay_f(s, config)


def _depth_tol(z0: float) -> float:
    return 1e-14 * max(1.0, abs(z0))


def mean_eulerian(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0, tol: float | None = None
) -> QuadResult:
    """Wavelength average of u at fixed depth z0 below the trough.

    tol is the absolute tolerance on the returned mean (default 1e-12*c).
    The result is t-independent; t only shifts the integrand's phase.
    """
    fs = _check_line(s, z0, config)
    if tol is None:
        tol = 1e-12 * config.c
    k, c, c0, L = config.k, config.c, config.c0, config.wavelength
    dtol = _depth_tol(z0)

    def integrand(qs):
        r = kernels.solve_depth(qs, t, z0, fs, k, c, dtol)
        e = np.exp(k * (r - fs))
        e2 = e * e
        th = k * (qs - c * t)
        return -c * e2 - c0 * (1.0 - e2) / (1.0 + e * np.cos(th))

    raw = integrate(integrand, 0.0, L, tol=tol * L)
    return QuadResult(raw.value / L, raw.error_estimate / L, raw.nodes)


def stokes_drift(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0, tol: float | None = None
) -> float:
    """Drift of particles relative to the fixed-depth average: <u>_L - <u>_E."""
    return mean_lagrangian(config) - mean_eulerian(s, z0, config, t=t, tol=tol).value


def _decay_moments(
    s: float, z0: float, config: WaveConfig, t: float, tol: float
) -> tuple[float, float]:
    """Wavelength averages of e^{xi} and e^{2 xi} along the depth line."""
    fs = decay_f(s, config)
    k, c, L = config.k, config.c, config.wavelength
    dtol = _depth_tol(z0)

    def m1(qs):
        r = kernels.solve_depth(qs, t, z0, fs, k, c, dtol)
        return np.exp(k * (r - fs))

    def m2(qs):
        r = kernels.solve_depth(qs, t, z0, fs, k, c, dtol)
        return np.exp(2.0 * k * (r - fs))

    a = integrate(m1, 0.0, L, tol=tol * L).value / L
    b = integrate(m2, 0.0, L, tol=tol * L).value / L
    return a, b


@dataclass(frozen=True)
class EulerianBounds:
    """Envelope of the fixed-depth mean: pointwise at (s, z0), and global.

    lower/upper bracket <u>_E at the requested line; global_lower and
    global_upper bracket it over every admissible latitude and depth.
    """

    lower: float
    upper: float
    global_lower: float
    global_upper: float


def eulerian_bounds(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0, tol: float | None = None
) -> EulerianBounds:
    """Bounds on the fixed-depth mean from the decay moments.

    With a = <e^{xi}> and b = <e^{2 xi}> the mean is -c*b - c0*M for some
    M in [1 - a, 1 + a], giving the pointwise envelope. The global interval
    for c0 >= 0 is (-c*(1 - e^{3 k r0})/(1 - e^{k r0}), 0); under a westward
    current the mean can be positive and the interval becomes
    (-c*e^{2 k r0}, -c0*(1 + e^{k r0})).
    """
    _check_line(s, z0, config)
    if tol is None:
        tol = 1e-12 * config.c
    a, b = _decay_moments(s, z0, config, t, tol)
    c, c0 = config.c, config.c0
    base = -c * b
    if config.c0 >= 0.0:
        lower = base - c0 * (1.0 + a)
        upper = base - c0 * (1.0 - a)
    else:
        lower = base - c0 * (1.0 - a)
        upper = base - c0 * (1.0 + a)
    x = math.exp(config.k * config.r0)
    if c0 >= 0.0:
        glo = -c * (1.0 + x + x * x)
        ghi = 0.0
    else:
        glo = -c * x * x
        ghi = -c0 * (1.0 + x)
    return EulerianBounds(lower=lower, upper=upper, global_lower=glo, global_upper=ghi)


def _west_ratio(e):
    # e^{2 xi} * (1 - e^{xi}) / (1 - e^{2 xi}), simplified
    return e * e / (1.0 + e)


def _east_ratio(e):
    # e^{2 xi} * (1 + e^{xi}) / (1 - e^{2 xi}), simplified
    return e * e / (1.0 - e)


def _extreme_decay(
    s: float, z0: float, config: WaveConfig, t: float
) -> tuple[float, float]:
    """Extrema (e_min, e_max) of e^{xi} along the depth line, two ways.

    Analytically the extrema of R(q) sit where sin(theta) = 0: the label
    solves R +- e^{k(R - fs)}/k = z0. A 256-node scan of the line with
    local refinement must agree with the analytic route to 1e-10; any
    disagreement means a solver bug, reported as ConvergenceError.
    """
    fs = decay_f(s, config)
    k, c = config.k, config.c
    dtol = _depth_tol(z0)
    inv_k = 1.0 / k
    lo, hi = z0 - inv_k, min(z0 + inv_k, fs)

    def make(sign):
        def g(rr):
            return rr + sign * math.exp(k * (rr - fs)) * inv_k - z0

        def dg(rr):
            return 1.0 + sign * math.exp(k * (rr - fs))

        return g, dg

    g_lo, dg_lo = make(+1.0)   # theta = 0: deepest point of the line
    g_hi, dg_hi = make(-1.0)   # theta = pi: shallowest point
    r_min = newton_bisect(g_lo, dg_lo, lo, hi, x0=z0, tol=dtol)
    r_max = newton_bisect(g_hi, dg_hi, lo, hi, x0=z0, tol=dtol)
    e_min = math.exp(k * (r_min - fs))
    e_max = math.exp(k * (r_max - fs))

    # independent route: scan the line and refine around each extremum
    L = config.wavelength
    qs = c * t + np.linspace(0.0, L, 256, endpoint=False)
    r = kernels.solve_depth(qs, t, z0, fs, k, c, dtol)

    def refine(q_center, want_max):
        width = L / 256.0
        best = None
        for _ in range(12):
            grid = np.linspace(q_center - width, q_center + width, 33)
            rr = kernels.solve_depth(grid, t, z0, fs, k, c, dtol)
            idx = int(np.argmax(rr)) if want_max else int(np.argmin(rr))
            val = float(rr[idx])
            q_center = float(grid[idx])
            if best is not None and abs(val - best) <= 1e-14 * max(1.0, abs(val)):
                best = val
                break
            best = val
            width /= 8.0
        return best

    scan_min = refine(float(qs[np.argmin(r)]), want_max=False)
    scan_max = refine(float(qs[np.argmax(r)]), want_max=True)
    e_min_scan = math.exp(k * (scan_min - fs))
    e_max_scan = math.exp(k * (scan_max - fs))
    if abs(e_min - e_min_scan) > 1e-10 or abs(e_max - e_max_scan) > 1e-10:
        raise ConvergenceError(
            "decay extrema routes disagree: "
            f"analytic ({e_min:.15g}, {e_max:.15g}) vs "
            f"scan ({e_min_scan:.15g}, {e_max_scan:.15g})"
        )
    return e_min, e_max


def direction_thresholds(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0
) -> tuple[float, float]:
    """Current thresholds (west, east) for the two sufficient conditions.

    The fixed-depth mean is guaranteed westward when c0 > west and
    guaranteed eastward when c0 < east; both thresholds are negative.
    """
    _check_line(s, z0, config)
    e_min, e_max = _extreme_decay(s, z0, config, t)
    c = config.c
    return -c * _west_ratio(e_min), -c * _east_ratio(e_max)


def westward_sufficient(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0
) -> bool:
    """True when c0 exceeds the westward threshold, forcing <u>_E < 0."""
    west, _ = direction_thresholds(s, z0, config, t=t)
    return config.c0 > west


def eastward_sufficient(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0
) -> bool:
    """True when c0 lies below the eastward threshold, forcing <u>_E > 0."""
    _, east = direction_thresholds(s, z0, config, t=t)
    return config.c0 < east


@dataclass(frozen=True)
class MeanFlowReport:
    """Everything the mean-flow analysis knows about one depth line."""

    s: float
    z0: float
    t: float
    mean_lagrangian: float
    mean_eulerian: QuadResult
    stokes_drift: float
    bounds: EulerianBounds
    westward_sufficient: bool
    eastward_sufficient: bool


def mean_flow_report(
    s: float, z0: float, config: WaveConfig, *, t: float = 0.0, tol: float | None = None
) -> MeanFlowReport:
    """Assemble means, drift, bounds and direction flags for one line."""
    ml = mean_lagrangian(config)
    me = mean_eulerian(s, z0, config, t=t, tol=tol)
    west, east = direction_thresholds(s, z0, config, t=t)
    return MeanFlowReport(
        s=s,
        z0=z0,
        t=t,
        mean_lagrangian=ml,
        mean_eulerian=me,
        stokes_drift=ml - me.value,
        bounds=eulerian_bounds(s, z0, config, t=t, tol=tol),
        westward_sufficient=config.c0 > west,
        eastward_sufficient=config.c0 < east,
    )
