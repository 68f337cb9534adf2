"""Bracketed scalar root finding.

Newton steps taken inside a maintained sign-change bracket, falling back to
bisection whenever a step leaves the bracket, the derivative degenerates,
or the residual stops shrinking. Every solve in this package has an
analytic derivative and a monotone residual on its bracket, so the Newton
path is the common case and bisection is pure insurance.
"""

from __future__ import annotations

import math

from .errors import ConvergenceError


def newton_bisect(
    f,
    df,
    lo: float,
    hi: float,
    x0: float | None = None,
    tol: float = 1e-12,
    maxiter: int = 200,
) -> float:
    """Solve f(x) = 0 for x in [lo, hi] to residual tolerance tol.

    f(lo) and f(hi) must differ in sign (either endpoint may be an exact
    root). x0, when given, seeds the first Newton step; it is clamped into
    the bracket. Raises ConvergenceError if the bracket is invalid or the
    residual never reaches tol.
    """
    if not lo < hi:
        raise ConvergenceError(f"empty bracket [{lo:g}, {hi:g}]")
    flo = f(lo)
    if abs(flo) <= tol:
        return lo
    fhi = f(hi)
    if abs(fhi) <= tol:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ConvergenceError(
            f"root not bracketed: f({lo:g})={flo:g}, f({hi:g})={fhi:g}"
        )
    # orient so that f < 0 on the lo side
    flip = flo > 0.0

    x = 0.5 * (lo + hi) if x0 is None else min(max(x0, lo), hi)
    fx = f(x)
    fprev = abs(flo) + abs(fhi)
    for _ in range(maxiter):
        if abs(fx) <= tol:
            return x
        if (fx < 0.0) != flip:
            lo = x
        else:
            hi = x
        d = df(x)
        step_ok = d != 0.0 and math.isfinite(d)
        if step_ok:
            xn = x - fx / d
            # reject steps that escape the bracket or stall the residual
            step_ok = lo < xn < hi and abs(fx) < 0.75 * fprev
        if not step_ok:
            xn = 0.5 * (lo + hi)
        fprev = abs(fx)
        x = xn
        fx = f(x)
        if x == lo or x == hi:
            # bracket collapsed to adjacent floats; x is as good as it gets
            return x
    raise ConvergenceError(
        f"no convergence after {maxiter} iterations: |f({x:g})|={abs(fx):g} > {tol:g}"
    )


def expand_down(f, hi: float, width: float, maxgrow: int = 60):
    """Grow a bracket [hi - w, hi] downward geometrically until f flips sign.

    Assumes f(hi) is on one side of zero; returns (lo, hi) with a sign
    change between them.
    """
    fhi = f(hi)
    side = fhi > 0.0
    w = width
    for _ in range(maxgrow):
        lo = hi - w
        if (f(lo) > 0.0) != side:
            return lo, hi
        w *= 2.0
    raise ConvergenceError(f"no sign change below {hi:g} within width {w:g}")


def expand_up(f, lo: float, width: float, maxgrow: int = 60):
    """Grow a bracket [lo, lo + w] upward geometrically until f flips sign."""
    flo = f(lo)
    side = flo > 0.0
    w = width
    for _ in range(maxgrow):
        hi = lo + w
        if (f(hi) > 0.0) != side:
            return lo, hi
        w *= 2.0
    raise ConvergenceError(f"no sign change above {lo:g} within width {w:g}")
