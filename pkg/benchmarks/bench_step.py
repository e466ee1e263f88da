"""Benchmark the numba step kernel against the pure-numpy fallback.

Run with:  python3 benchmarks/bench_step.py [nr] [steps]
(The numba path must be enabled, i.e. BLOWUPLAB_DISABLE_NUMBA unset.)
"""

import sys
import time

import numpy as np

from blowuplab import kernels


def drive(advance, u, u_prev, v, forcing, h, steps):
    # stable configuration (dt below the h/sqrt(N) origin limit, sources
    # mild) so the timed loop never leaves the finite regime
    dt = 0.5 * h
    t = 0.0
    for _ in range(steps):
        u_next, v_next = advance(
            u, u_prev, v, forcing, t, dt, dt, h, 3, 0.5, 1.0, 1.0, 1.9, 2.2, u.shape[0] - 2
        )
        u_prev, u, v = u, u_next, v_next
        t += dt
    return u


def main():
    nr = int(sys.argv[1]) if len(sys.argv) > 1 else 4000
    steps = int(sys.argv[2]) if len(sys.argv) > 2 else 2000
    h = 20.0 / nr
    r = np.arange(nr + 1) * h
    u0 = 0.1 * np.exp(-(r**2))
    v0 = u0.copy()
    forcing = np.zeros(nr + 1)

    impls = [("numpy", kernels.advance_numpy)]
    if kernels.advance_numba is not None:
        drive(kernels.advance_numba, u0, u0, v0, forcing, h, 2)  # JIT warmup
        impls.append(("numba", kernels.advance_numba))

    print(f"grid cells: {nr}, steps: {steps}")
    results = {}
    for name, fn in impls:
        t0 = time.perf_counter()
        out = drive(fn, u0, u0.copy(), v0.copy(), forcing, h, steps)
        dt = time.perf_counter() - t0
        results[name] = (dt, out)
        rate = nr * steps / dt / 1e6
        print(f"{name:>6}: {dt:8.3f} s   {rate:8.1f} Mcell-updates/s")
    if len(results) == 2:
        gap = np.max(np.abs(results["numpy"][1] - results["numba"][1]))
        print(f"speedup: {results['numpy'][0] / results['numba'][0]:.1f}x, "
              f"max |difference|: {gap:.3e}")


if __name__ == "__main__":
    main()
