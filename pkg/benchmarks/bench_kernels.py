"""Timing comparison of the pure-Python and compiled kernel backends.

Run from the repository root:

    python3 benchmarks/bench_kernels.py [--repeat N]

The two backends implement the same bracketed-Newton solvers; the compiled
one exists because flux quadrature and trajectory stepping call them inside
tight loops. This script reports per-call medians for both and the ratio,
plus a cross-check that the answers agree to rounding.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import eqdrift.kernels as selected
import eqdrift.kernels._pure as pure
from eqdrift.model import WaveConfig


def median_time(fn, repeat: int) -> float:
    samples = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        samples.append(time.perf_counter() - t0)
    return float(np.median(samples))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    cfg = WaveConfig(wavelength=100.0, r0=-5.0, c0=0.3)
    k, c, c0 = cfg.k, cfg.c, cfg.c0
    rng = np.random.default_rng(11)

    if selected.BACKEND == "pure":
        print("compiled backend unavailable; timing the pure backend against itself")
    backends = [("pure", pure), ("selected:" + selected.BACKEND, selected)]

    n = 20_000
    q = rng.uniform(0.0, cfg.wavelength, n)
    x = rng.uniform(0.0, cfg.wavelength, n)
    r = cfg.r0 - 1.0 - rng.exponential(3.0, n)
    # keep Eulerian probe points below the trough so raw inversion is well posed
    trough = cfg.r0 - np.exp(k * cfg.r0) / k
    z = trough - 0.5 - rng.exponential(3.0, n)
    tol_d = 1e-14 * 25.0
    tol_q = 1e-13 * cfg.wavelength

    cases = {
        f"solve_depth   n={n}": lambda b: b.solve_depth(q, 0.7, -25.0, 0.0, k, c, tol_d),
        f"solve_fixed_x n={n}": lambda b: b.solve_fixed_x(r, 0.7, 12.3, 0.0, k, c, c0, tol_q),
        f"invert        n={n}": lambda b: b.invert(x, z, 0.7, 0.0, k, c, c0, tol_q),
        "advect  2000 steps  ": lambda b: b.advect(
            3.0, -12.0, 0.0, cfg.period / 500.0, 2000, 0.0, k, c, c0, cfg.r0 + 0.3, tol_q
        ),
    }

    print(f"{'case':<22} {'pure [ms]':>10} {'fast [ms]':>10} {'speedup':>8}")
    for label, run in cases.items():
        times = {}
        results = {}
        for name, backend in backends:
            times[name] = median_time(lambda: run(backend), args.repeat)
            results[name] = run(backend)
        a, b = results["pure"], results["selected:" + selected.BACKEND]
        a0 = a[0] if isinstance(a, tuple) else a
        b0 = b[0] if isinstance(b, tuple) else b
        assert np.allclose(a0, b0, rtol=0.0, atol=1e-10), f"backend mismatch in {label}"
        t_pure = times["pure"] * 1e3
        t_fast = times["selected:" + selected.BACKEND] * 1e3
        print(f"{label:<22} {t_pure:>10.3f} {t_fast:>10.3f} {t_pure / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
