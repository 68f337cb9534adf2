"""Adaptive composite integration by uniform interval halving.

The driver evaluates the integrand in whole-grid batches (the integrands in
this package are vectorized and each evaluation hides a root solve, so
batching matters), reuses every node when the grid is halved, and takes the
embedded Simpson value as both result and error estimate: with T_n the
n-panel trapezoid sum, S_n = (4*T_2n - T_n)/3 is composite Simpson and
|S_n - S_{n/2}| is the reported error. For the smooth periodic integrands
produced here the trapezoid rule is spectrally accurate, so the loop
terminates after a handful of doublings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadResult:
    """Integral value with its error estimate and node expenditure."""

    value: float
    error_estimate: float
    nodes: int


def integrate(
    f,
    a: float,
    b: float,
    tol: float,
    max_nodes: int = 2**20,
    min_doublings: int = 2,
) -> QuadResult:
    """Integrate the vectorized callable f over [a, b] to absolute tol.

    f maps an ndarray of abscissae to an ndarray of values. Raises
    QuadratureError when max_nodes evaluations do not bring the error
    estimate under tol.
    """
    if not b > a:
        raise ValueError(f"empty integration interval [{a:g}, {b:g}]")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    n = 16
    xs = np.linspace(a, b, n + 1)
    fs = np.asarray(f(xs), dtype=float)
    nodes = n + 1
    h = (b - a) / n
    trap = h * (0.5 * (fs[0] + fs[-1]) + float(fs[1:-1].sum()))
    simpson_prev = None
    doublings = 0
    while nodes <= max_nodes:
        mids = a + h * (np.arange(n) + 0.5)
        fm = np.asarray(f(mids), dtype=float)
        nodes += n
        trap_fine = 0.5 * trap + 0.5 * h * float(fm.sum())
        simpson = (4.0 * trap_fine - trap) / 3.0
        doublings += 1
        if simpson_prev is not None:
            err = abs(simpson - simpson_prev)
            if err <= tol and doublings >= min_doublings:
                return QuadResult(value=simpson, error_estimate=err, nodes=nodes)
        simpson_prev = simpson
        trap = trap_fine
        n *= 2
        h *= 0.5
    raise QuadratureError(
        f"error estimate still above tol={tol:g} after {nodes} nodes"
    )
