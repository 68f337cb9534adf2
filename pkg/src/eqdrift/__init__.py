"""Exact equatorially trapped wave on a uniform current: flow map, mean
drift, mass transport, and Eulerian field reconstruction."""

from .errors import ConvergenceError, DomainError, QuadratureError
from .field import (
    EulerianQuery,
    Trajectory,
    divergence,
    eulerian_velocity,
    integrate_particle,
    invert_map,
    kinematic_surface_residual,
    surface_height,
)
from .geometry import (
    SurfaceProfile,
    TrappingRegion,
    crest_trough,
    depth_label,
    depth_label_slope,
    existence_margin,
    in_trapping_region,
    surface_elevation,
    surface_label,
    surface_profile,
    trapping_region,
)
from .massflux import (
    FluxRequest,
    crest_station,
    fixed_x_label,
    flux_depth_slope,
    flux_sign_condition,
    full_flux_divergence,
    gamma_r,
    gamma_t,
    period_averaged_flux,
    trough_station,
    truncated_flux,
)
from .meanflow import (
    EulerianBounds,
    MeanFlowReport,
    direction_thresholds,
    eastward_sufficient,
    eulerian_bounds,
    mean_eulerian,
    mean_flow_report,
    mean_lagrangian,
    stokes_drift,
    westward_sufficient,
)
from .model import (
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
from .quadrature import QuadResult, integrate

__version__ = "0.1.0"
