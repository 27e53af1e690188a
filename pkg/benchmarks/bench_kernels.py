"""Compare the compiled and numpy RK4 backends on a PT trajectory.

    python benchmarks/bench_kernels.py [--steps 20000] [--repeat 3]
"""
import argparse
import math
import time

import numpy as np

from ptentangle import dynamics as dyn
from ptentangle import kernels


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    p = dyn.PTParams(1.0, math.pi / 4)
    rho0 = dyn.damped_state(1.0)
    cases = {"pt": dyn.PT(p), "damping": dyn.AmplitudeDamping(1.0)}
    print(f"backends: {sorted(kernels.BACKENDS)} (default {kernels.BACKEND}); {args.steps} RK4 steps")
    for name, spec in cases.items():
        a, jumps = dyn.generator(spec)
        results, timings = {}, {}
        for backend in sorted(kernels.BACKENDS):
            best = math.inf
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                out = kernels.rk4_trajectory(rho0, a, jumps, 1e-4, args.steps // 10, 11, backend=backend)
                best = min(best, time.perf_counter() - t0)
            results[backend], timings[backend] = out, best
            print(f"  {name:8s} {backend:7s} {best * 1e3:9.2f} ms  {best / args.steps * 1e6:7.3f} us/step")
        if len(results) == 2:
            diff = np.max(np.abs(results["cython"] - results["python"]))
            print(f"  {name:8s} speedup {timings['python'] / timings['cython']:.1f}x, max |diff| {diff:.1e}")


if __name__ == "__main__":
    main()
