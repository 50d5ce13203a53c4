"""Benchmark the chain RK4 stepper: numba-jitted loops vs pure numpy.

The jitted path is what ``integrate_chain`` uses by default; setting
NLWAVES_DISABLE_NUMBA=1 switches it to the numpy fallback.  This script times
both implementations directly in one process and checks they agree.

Run:  python3 benchmarks/bench_chain.py
"""

import time

import numpy as np

from nlwaves.lattice import (
    NUMBA_ENABLED,
    _rk4_chain_step_loops,
    _rk4_chain_step_numpy,
    make_chain,
)


def time_stepper(step, u, ut, delta, coef, n, dt, n_steps, repeats=3):
    best = np.inf
    for _ in range(repeats):
        uu, vv = u.copy(), ut.copy()
        start = time.perf_counter()
        for _ in range(n_steps):
            uu, vv = step(uu, vv, delta, coef, n, dt)
        best = min(best, time.perf_counter() - start)
    return best, uu


def main():
    epsilon, n = 0.1, 1
    coef = epsilon**n
    half_length = 20.0
    n_steps = 400

    print(f"numba available and enabled: {NUMBA_ENABLED}")
    print(f"{'sites':>7} {'numpy ms/step':>14} {'jit ms/step':>12} {'speedup':>8} {'max|diff|':>10}")

    for sites in (256, 1024, 4096, 16384):
        chain = make_chain(
            {"shape": "gaussian", "a": 0.5, "b": 2.0},
            {"shape": "gaussian", "a": 0.5, "b": 2.0},
            half_length,
            sites,
        )
        dt = 0.25 * chain.delta
        # warm the JIT outside the timed region
        _rk4_chain_step_loops(chain.strain, chain.velocity, chain.delta, coef, n, dt)

        t_np, u_np = time_stepper(
            _rk4_chain_step_numpy, chain.strain, chain.velocity,
            chain.delta, coef, n, dt, n_steps,
        )
        t_jit, u_jit = time_stepper(
            _rk4_chain_step_loops, chain.strain, chain.velocity,
            chain.delta, coef, n, dt, n_steps,
        )
        diff = float(np.max(np.abs(u_np - u_jit)))
        print(
            f"{sites:>7} {1e3 * t_np / n_steps:>14.4f} {1e3 * t_jit / n_steps:>12.4f} "
            f"{t_np / t_jit:>8.2f} {diff:>10.2e}"
        )


if __name__ == "__main__":
    main()
