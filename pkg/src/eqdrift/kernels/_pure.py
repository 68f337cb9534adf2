"""NumPy implementation of the hot kernels.

Installs also ship a compiled twin (_fast, generated from _fast.pyx) with
identical signatures; eqdrift.kernels picks one at import time. Keep the
two in lock step: the parity tests compare them element by element.

All solvers here are bracketed Newton iterations on strictly monotone
residuals. Callers are responsible for domain preconditions (labels below
the critical level r = f(s); depth targets below the trough); the kernels
only guard the degeneracies that would break monotonicity.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConvergenceError, DomainError

BACKEND = "pure"

_MAXIT = 100


def solve_depth(q, t, z0, fs, k, c, tol):
    """Depth labels R(q): solve R + exp(k*(R - fs))*cos(k*(q - c*t))/k = z0.

    The residual is strictly increasing in R on (-inf, fs), and for
    z0 below the trough the root lies in [z0 - 1/k, z0 + 1/k] with
    z0 + 1/k < fs, so the bracket never touches the degeneracy.
    """
    q = np.ascontiguousarray(q, dtype=float)
    cth = np.cos(k * (q - c * t))
    inv_k = 1.0 / k
    lo = np.full_like(q, z0 - inv_k)
    hi = np.full_like(q, min(z0 + inv_k, fs))
    # one functional iteration from R = z0 lands close to the root
    x = z0 - (math.exp(k * (z0 - fs)) * inv_k) * cth
    x = np.clip(x, lo + 1e-3 * inv_k, hi - 1e-3 * inv_k)
    for _ in range(_MAXIT):
        e = np.exp(k * (x - fs))
        g = x + e * inv_k * cth - z0
        done = np.abs(g) <= tol
        if done.all():
            return x
        live = ~done
        pos = g > 0.0
        np.copyto(hi, x, where=live & pos)
        np.copyto(lo, x, where=live & ~pos)
        xn = x - g / (1.0 + e * cth)
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        x = np.where(done, x, xn)
    worst = float(np.max(np.abs(g)))
    raise ConvergenceError(
        f"depth-label solve stalled: worst residual {worst:g} > {tol:g}"
    )


def solve_fixed_x(r, t, x0, fs, k, c, c0, tol):
    """Column labels q(r): solve q - exp(k*(r - fs))*sin(k*(q - c*t))/k = x0 + c0*t.

    Monotone in q since the derivative 1 - exp(k*(r - fs))*cos(...) is
    positive for r < fs; the root lies within 1/k of x0 + c0*t.
    """
    r = np.ascontiguousarray(r, dtype=float)
    if np.any(r >= fs):
        raise DomainError("label at or above the critical level r = f(s)")
    e = np.exp(k * (r - fs))
    inv_k = 1.0 / k
    base = x0 + c0 * t
    lo = np.full_like(r, base - inv_k)
    hi = np.full_like(r, base + inv_k)
    x = base + e * inv_k * np.sin(k * (base - c * t))
    for _ in range(_MAXIT):
        sth = np.sin(k * (x - c * t))
        g = x - e * inv_k * sth - base
        done = np.abs(g) <= tol
        if done.all():
            return x
        live = ~done
        pos = g > 0.0
        np.copyto(hi, x, where=live & pos)
        np.copyto(lo, x, where=live & ~pos)
        cth = np.cos(k * (x - c * t))
        xn = x - g / (1.0 - e * cth)
        bad = ~np.isfinite(xn) | (xn <= lo) | (xn >= hi)
        xn = np.where(bad, 0.5 * (lo + hi), xn)
        x = np.where(done, x, xn)
    worst = float(np.max(np.abs(g)))
    raise ConvergenceError(
        f"fixed-x label solve stalled: worst residual {worst:g} > {tol:g}"
    )


def _invert_arrays(x, z, t, fs, k, c, c0, tol, q, r, maxit, q_lo, q_hi, r_lo, r_hi):
    # projected Newton: the solution labels satisfy |q - (x + c0*t)| <= 1/k
    # and |r - z| <= 1/k with r < fs, so iterates are confined to a box that
    # excludes the degenerate edge, and each step backtracks until the
    # residual actually drops
    inv_k = 1.0 / k
    res = None
    for _ in range(maxit):
        e = np.exp(k * (r - fs))
        th = k * (q - c * t)
        sth = np.sin(th)
        cth = np.cos(th)
        f1 = q - c0 * t - e * inv_k * sth - x
        f2 = r + e * inv_k * cth - z
        res = np.maximum(np.abs(f1), np.abs(f2))
        done = res <= tol
        if done.all():
            return q, r, res
        det = 1.0 - e * e
        dq = -((1.0 + e * cth) * f1 + e * sth * f2) / det
        dr = -(e * sth * f1 + (1.0 - e * cth) * f2) / det
        alpha = np.ones_like(q)
        qn = np.clip(q + dq, q_lo, q_hi)
        rn = np.clip(r + dr, r_lo, r_hi)
        for _ in range(50):
            en = np.exp(k * (rn - fs))
            thn = k * (qn - c * t)
            f1n = qn - c0 * t - en * inv_k * np.sin(thn) - x
            f2n = rn + en * inv_k * np.cos(thn) - z
            worse = ~done & (np.maximum(np.abs(f1n), np.abs(f2n)) > res)
            if not worse.any():
                break
            alpha = np.where(worse, 0.5 * alpha, alpha)
            qn = np.where(worse, np.clip(q + alpha * dq, q_lo, q_hi), qn)
            rn = np.where(worse, np.clip(r + alpha * dr, r_lo, r_hi), rn)
        q = np.where(done, q, qn)
        r = np.where(done, r, rn)
    return q, r, res


def invert(x, z, t, fs, k, c, c0, tol):
    """Labels (q, r) of the particles occupying positions (x, z) at time t.

    Two-dimensional Newton on the flow map, projected into the label box
    the solution is known to occupy. The caller guarantees the positions
    are inside the fluid (below the free surface); there the map is a
    diffeomorphism and the iteration contracts.
    """
    x = np.ascontiguousarray(x, dtype=float)
    z = np.ascontiguousarray(z, dtype=float)
    inv_k = 1.0 / k
    rcap = fs - 1e-9 / k
    q0 = x + c0 * t
    q_lo, q_hi = q0 - 1.001 * inv_k, q0 + 1.001 * inv_k
    r_lo = z - 1.001 * inv_k
    r_hi = np.minimum(z + 1.001 * inv_k, rcap)
    r0 = np.minimum(z, 0.5 * (r_lo + r_hi))
    q, r, res = _invert_arrays(
        x, z, t, fs, k, c, c0, tol, q0.copy(), r0.copy(), 2 * _MAXIT,
        q_lo, q_hi, r_lo, r_hi,
    )
    if np.all(res <= tol):
        return q, r
    worst = float(np.max(res))
    raise ConvergenceError(
        f"flow-map inversion stalled: worst residual {worst:g} > {tol:g}"
    )


def _invert_scalar(x, z, t, qg, rg, fs, k, c, c0, tol, rcap):
    inv_k = 1.0 / k
    base = x + c0 * t
    q_lo, q_hi = base - 1.001 * inv_k, base + 1.001 * inv_k
    r_lo = z - 1.001 * inv_k
    r_hi = min(z + 1.001 * inv_k, rcap)
    q = min(max(qg, q_lo), q_hi)
    r = min(max(rg, r_lo), r_hi)
    for _ in range(2 * _MAXIT):
        e = math.exp(k * (r - fs))
        th = k * (q - c * t)
        sth = math.sin(th)
        cth = math.cos(th)
        f1 = q - c0 * t - e * inv_k * sth - x
        f2 = r + e * inv_k * cth - z
        res = max(abs(f1), abs(f2))
        if res <= tol:
            return q, r
        det = 1.0 - e * e
        dq = -((1.0 + e * cth) * f1 + e * sth * f2) / det
        dr = -(e * sth * f1 + (1.0 - e * cth) * f2) / det
        alpha = 1.0
        qn = min(max(q + dq, q_lo), q_hi)
        rn = min(max(r + dr, r_lo), r_hi)
        for _ in range(50):
            en = math.exp(k * (rn - fs))
            thn = k * (qn - c * t)
            f1n = qn - c0 * t - en * inv_k * math.sin(thn) - x
            f2n = rn + en * inv_k * math.cos(thn) - z
            if max(abs(f1n), abs(f2n)) <= res:
                break
            alpha *= 0.5
            qn = min(max(q + alpha * dq, q_lo), q_hi)
            rn = min(max(r + alpha * dr, r_lo), r_hi)
        q = qn
        r = rn
    raise ConvergenceError(
        f"flow-map inversion stalled at x={x:g}, z={z:g}: residual {res:g} > {tol:g}"
    )


def advect(x0, z0, t0, dt, nsteps, fs, k, c, c0, r_stop, tol):
    """Integrate one particle path dx/dt = u(x, z, t) with classic RK4.

    Each stage inverts the flow map at the stage position (warm-started
    with the running label; the true label is a constant of the motion, so
    the inversion converges in a couple of iterations). Returns the sampled
    path and label history (xs, zs, us, ws, qs, rs), arrays of length
    nsteps + 1. Raises DomainError if an accepted step puts the particle
    label above r_stop.
    """
    rcap = fs - 1e-9 / k

    def vel(px, pz, pt, qg, rg):
        q, r = _invert_scalar(px, pz, pt, qg, rg, fs, k, c, c0, tol, rcap)
        e = math.exp(k * (r - fs))
        th = k * (q - c * pt)
        return c * e * math.cos(th) - c0, c * e * math.sin(th), q, r

    xs = np.empty(nsteps + 1)
    zs = np.empty(nsteps + 1)
    us = np.empty(nsteps + 1)
    ws = np.empty(nsteps + 1)
    qs = np.empty(nsteps + 1)
    rs = np.empty(nsteps + 1)
    x, z, t = x0, z0, t0
    qg, rg = x0 + c0 * t0, min(z0, rcap)
    for i in range(nsteps):
        u1, w1, qg, rg = vel(x, z, t, qg, rg)
        xs[i], zs[i], us[i], ws[i], qs[i], rs[i] = x, z, u1, w1, qg, rg
        if rg > r_stop:
            raise DomainError(
                f"left admissible domain at t={t:g}: label r={rg:g} above {r_stop:g}"
            )
        h2 = 0.5 * dt
        u2, w2, qg, rg = vel(x + h2 * u1, z + h2 * w1, t + h2, qg, rg)
        u3, w3, qg, rg = vel(x + h2 * u2, z + h2 * w2, t + h2, qg, rg)
        u4, w4, qg, rg = vel(x + dt * u3, z + dt * w3, t + dt, qg, rg)
        x += dt * (u1 + 2.0 * u2 + 2.0 * u3 + u4) / 6.0
        z += dt * (w1 + 2.0 * w2 + 2.0 * w3 + w4) / 6.0
        t = t0 + (i + 1) * dt
    u1, w1, qg, rg = vel(x, z, t, qg, rg)
    xs[nsteps], zs[nsteps], us[nsteps], ws[nsteps] = x, z, u1, w1
    qs[nsteps], rs[nsteps] = qg, rg
    if rg > r_stop:
        raise DomainError(
            f"left admissible domain at t={t:g}: label r={rg:g} above {r_stop:g}"
        )
    return xs, zs, us, ws, qs, rs
