# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twin of the pure-Python kernels.

Same signatures, same bracketed-Newton algorithms; scalar C loops instead
of vectorized array passes. Keep in lock step with _pure.py — the parity
tests compare the two element by element.
"""

from libc.math cimport INFINITY, cos, exp, fabs, sin

import numpy as np

from ..errors import ConvergenceError, DomainError

BACKEND = "compiled"

cdef int MAXIT = 100


cdef int _depth_one(double cth, double z0, double fs, double k,
                    double tol, double guess, double* out) noexcept nogil:
    cdef double inv_k = 1.0 / k
    cdef double lo = z0 - inv_k
    cdef double hi = z0 + inv_k
    cdef double x, e, g, xn
    cdef int i
    if hi > fs:
        hi = fs
    x = guess
    if not (lo < x < hi):
        x = 0.5 * (lo + hi)
    for i in range(MAXIT):
        e = exp(k * (x - fs))
        g = x + e * inv_k * cth - z0
        if fabs(g) <= tol:
            out[0] = x
            return 0
        if g > 0.0:
            hi = x
        else:
            lo = x
        xn = x - g / (1.0 + e * cth)
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        x = xn
    out[0] = x
    return 1


def solve_depth(q, double t, double z0, double fs, double k, double c, double tol):
    """Depth labels R(q): solve R + exp(k*(R - fs))*cos(k*(q - c*t))/k = z0."""
    cdef double[::1] qv = np.ascontiguousarray(q, dtype=np.float64)
    cdef Py_ssize_t n = qv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double e0 = exp(k * (z0 - fs)) / k
    cdef double cth, guess
    cdef Py_ssize_t i
    cdef int bad = 0
    with nogil:
        for i in range(n):
            cth = cos(k * (qv[i] - c * t))
            guess = z0 - e0 * cth
            if _depth_one(cth, z0, fs, k, tol, guess, &ov[i]) != 0:
                bad = 1
                break
    if bad:
        raise ConvergenceError(
            f"depth-label solve stalled: residual above {tol:g}"
        )
    return out


cdef int _fixed_x_one(double e, double base, double t, double k, double c,
                      double tol, double* out) noexcept nogil:
    cdef double inv_k = 1.0 / k
    cdef double lo = base - inv_k
    cdef double hi = base + inv_k
    cdef double x = base + e * inv_k * sin(k * (base - c * t))
    cdef double g, xn
    cdef int i
    if not (lo < x < hi):
        x = 0.5 * (lo + hi)
    for i in range(MAXIT):
        g = x - e * inv_k * sin(k * (x - c * t)) - base
        if fabs(g) <= tol:
            out[0] = x
            return 0
        if g > 0.0:
            hi = x
        else:
            lo = x
        xn = x - g / (1.0 - e * cos(k * (x - c * t)))
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        x = xn
    out[0] = x
    return 1


def solve_fixed_x(r, double t, double x0, double fs, double k, double c,
                  double c0, double tol):
    """Column labels q(r): solve q - exp(k*(r - fs))*sin(k*(q - c*t))/k = x0 + c0*t."""
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef Py_ssize_t n = rv.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double base = x0 + c0 * t
    cdef Py_ssize_t i
    cdef int bad = 0
    cdef int domain = 0
    with nogil:
        for i in range(n):
            if rv[i] >= fs:
                domain = 1
                break
            if _fixed_x_one(exp(k * (rv[i] - fs)), base, t, k, c, tol, &ov[i]) != 0:
                bad = 1
                break
    if domain:
        raise DomainError("label at or above the critical level r = f(s)")
    if bad:
        raise ConvergenceError(
            f"fixed-x label solve stalled: residual above {tol:g}"
        )
    return out


cdef inline double _clip(double v, double lo, double hi) noexcept nogil:
    if v < lo:
        return lo
    if v > hi:
        return hi
    return v


cdef int _invert_one(double x, double z, double t, double fs, double k,
                     double c, double c0, double tol, double rcap,
                     double* qio, double* rio) noexcept nogil:
    # projected Newton: the solution labels satisfy |q - (x + c0*t)| <= 1/k
    # and |r - z| <= 1/k with r < fs, so iterates are confined to a box that
    # excludes the degenerate edge, and each step backtracks until the
    # residual actually drops
    cdef double inv_k = 1.0 / k
    cdef double base = x + c0 * t
    cdef double q_lo = base - 1.001 * inv_k
    cdef double q_hi = base + 1.001 * inv_k
    cdef double r_lo = z - 1.001 * inv_k
    cdef double r_hi = z + 1.001 * inv_k
    cdef double q, r, e, th, sth, cth, f1, f2, res, det, dq, dr
    cdef double alpha, qn, rn, en, thn, f1n, f2n, resn
    cdef int i, j
    if r_hi > rcap:
        r_hi = rcap
    q = _clip(qio[0], q_lo, q_hi)
    r = _clip(rio[0], r_lo, r_hi)
    for i in range(2 * MAXIT):
        e = exp(k * (r - fs))
        th = k * (q - c * t)
        sth = sin(th)
        cth = cos(th)
        f1 = q - c0 * t - e * inv_k * sth - x
        f2 = r + e * inv_k * cth - z
        res = fabs(f1)
        if fabs(f2) > res:
            res = fabs(f2)
        if res <= tol:
            qio[0] = q
            rio[0] = r
            return 0
        det = 1.0 - e * e
        dq = -((1.0 + e * cth) * f1 + e * sth * f2) / det
        dr = -(e * sth * f1 + (1.0 - e * cth) * f2) / det
        alpha = 1.0
        qn = _clip(q + dq, q_lo, q_hi)
        rn = _clip(r + dr, r_lo, r_hi)
        for j in range(50):
            en = exp(k * (rn - fs))
            thn = k * (qn - c * t)
            f1n = qn - c0 * t - en * inv_k * sin(thn) - x
            f2n = rn + en * inv_k * cos(thn) - z
            resn = fabs(f1n)
            if fabs(f2n) > resn:
                resn = fabs(f2n)
            if resn <= res:
                break
            alpha *= 0.5
            qn = _clip(q + alpha * dq, q_lo, q_hi)
            rn = _clip(r + alpha * dr, r_lo, r_hi)
        q = qn
        r = rn
    qio[0] = q
    rio[0] = r
    return 1


def invert(x, z, double t, double fs, double k, double c, double c0, double tol):
    """Labels (q, r) of the particles occupying positions (x, z) at time t."""
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[::1] zv = np.ascontiguousarray(z, dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0]
    qo = np.empty(n, dtype=np.float64)
    ro = np.empty(n, dtype=np.float64)
    cdef double[::1] qv = qo
    cdef double[::1] rv = ro
    cdef double rcap = fs - 1e-9 / k
    cdef double inv_k = 1.0 / k
    cdef double r_hi
    cdef Py_ssize_t i
    cdef int bad = 0
    with nogil:
        for i in range(n):
            qv[i] = xv[i] + c0 * t
            # seed at the box midpoint in r unless z itself is deeper
            r_hi = zv[i] + 1.001 * inv_k
            if r_hi > rcap:
                r_hi = rcap
            rv[i] = zv[i]
            if rv[i] > 0.5 * (zv[i] - 1.001 * inv_k + r_hi):
                rv[i] = 0.5 * (zv[i] - 1.001 * inv_k + r_hi)
            if _invert_one(xv[i], zv[i], t, fs, k, c, c0, tol, rcap,
                           &qv[i], &rv[i]) != 0:
                bad = 1
                break
    if bad:
        raise ConvergenceError(
            f"flow-map inversion stalled: residual above {tol:g}"
        )
    return qo, ro


cdef int _stage(double px, double pz, double pt, double fs, double k, double c,
                double c0, double tol, double rcap, double* q, double* r,
                double* u, double* w) noexcept nogil:
    cdef double e, th
    if _invert_one(px, pz, pt, fs, k, c, c0, tol, rcap, q, r) != 0:
        return 1
    e = exp(k * (r[0] - fs))
    th = k * (q[0] - c * pt)
    u[0] = c * e * cos(th) - c0
    w[0] = c * e * sin(th)
    return 0


def advect(double x0, double z0, double t0, double dt, Py_ssize_t nsteps,
           double fs, double k, double c, double c0, double r_stop, double tol):
    """Integrate one particle path dx/dt = u(x, z, t) with classic RK4.

    Per-stage flow-map inversions are warm-started with the running label.
    Returns (xs, zs, us, ws, qs, rs) arrays of length nsteps + 1; raises
    DomainError if an accepted step puts the label above r_stop.
    """
    xs = np.empty(nsteps + 1, dtype=np.float64)
    zs = np.empty(nsteps + 1, dtype=np.float64)
    us = np.empty(nsteps + 1, dtype=np.float64)
    ws = np.empty(nsteps + 1, dtype=np.float64)
    qs = np.empty(nsteps + 1, dtype=np.float64)
    rs = np.empty(nsteps + 1, dtype=np.float64)
    cdef double[::1] xv = xs
    cdef double[::1] zv = zs
    cdef double[::1] uv = us
    cdef double[::1] wv = ws
    cdef double[::1] qv = qs
    cdef double[::1] rv = rs
    cdef double rcap = fs - 1e-9 / k
    cdef double x = x0, z = z0, t = t0
    cdef double q = x0 + c0 * t0
    cdef double r = z0 if z0 < rcap else rcap
    cdef double h2 = 0.5 * dt
    cdef double u1, w1, u2, w2, u3, w3, u4, w4, e, th
    cdef double bad_t = t0
    cdef Py_ssize_t i
    cdef int status = 0
    with nogil:
        for i in range(nsteps + 1):
            if _invert_one(x, z, t, fs, k, c, c0, tol, rcap,
                           &q, &r) != 0:
                status = 1
                bad_t = t
                break
            e = exp(k * (r - fs))
            th = k * (q - c * t)
            u1 = c * e * cos(th) - c0
            w1 = c * e * sin(th)
            xv[i] = x
            zv[i] = z
            uv[i] = u1
            wv[i] = w1
            qv[i] = q
            rv[i] = r
            if r > r_stop:
                status = 2
                bad_t = t
                break
            if i == nsteps:
                break
            if _stage(x + h2 * u1, z + h2 * w1, t + h2, fs, k, c, c0, tol,
                      rcap, &q, &r, &u2, &w2) != 0:
                status = 1
                bad_t = t
                break
            if _stage(x + h2 * u2, z + h2 * w2, t + h2, fs, k, c, c0, tol,
                      rcap, &q, &r, &u3, &w3) != 0:
                status = 1
                bad_t = t
                break
            if _stage(x + dt * u3, z + dt * w3, t + dt, fs, k, c, c0, tol,
                      rcap, &q, &r, &u4, &w4) != 0:
                status = 1
                bad_t = t
                break
            x = x + dt * (u1 + 2.0 * u2 + 2.0 * u3 + u4) / 6.0
            z = z + dt * (w1 + 2.0 * w2 + 2.0 * w3 + w4) / 6.0
            t = t0 + (i + 1) * dt
    if status == 1:
        raise ConvergenceError(f"flow-map inversion stalled at t={bad_t:g}")
    if status == 2:
        raise DomainError(
            f"left admissible domain at t={bad_t:g}: label r={r:g} above {r_stop:g}"
        )
    return xs, zs, us, ws, qs, rs
