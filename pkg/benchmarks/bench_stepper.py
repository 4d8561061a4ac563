"""Time the RK4 stepping kernel: compiled extension vs. pure numpy.

Run from the repository root after installing the package:

    python benchmarks/bench_stepper.py --n-points 4001 --steps 2000
"""

import argparse
import json
import time

import numpy as np

from nnlstep import pde, profiles


def run_backend(backend, q0, h, dt, steps, repeats):
    kern = pde._kernel(backend)
    best = float("inf")
    out = None
    for _ in range(repeats):
        q = q0.copy()
        t0 = time.perf_counter()
        q, done, blew = kern.rk4_run(q, h, dt, steps, check_every=10 ** 9,
                                     blow_threshold=1e12)
        elapsed = time.perf_counter() - t0
        if done != steps or blew:
            raise RuntimeError(f"{backend} backend aborted the run")
        best = min(best, elapsed)
        out = q
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-points", type=int, default=4001)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--L", type=float, default=40.0)
    ap.add_argument("--json", action="store_true",
                    help="machine-readable output")
    args = ap.parse_args()

    prof = profiles.smoothed_step(1.0)
    state = pde.initial_state(prof, args.L, args.n_points)
    h = state.h
    dt = 0.2 * h * h
    node_steps = args.n_points * args.steps

    results = {}
    for backend in pde.available_backends():
        best, out = run_backend(backend, state.q, h, dt, args.steps,
                                args.repeats)
        results[backend] = {
            "seconds": best,
            "node_steps_per_s": node_steps / best,
            "checksum": float(np.abs(out).sum()),
        }

    if args.json:
        print(json.dumps({"n_points": args.n_points, "steps": args.steps,
                          "dt": dt, "results": results}, indent=1))
        return

    print(f"grid {args.n_points} points, {args.steps} steps, dt={dt:.3e}")
    for backend, r in results.items():
        print(f"  {backend:7s} {r['seconds']:8.3f} s "
              f"({r['node_steps_per_s']:.3e} node-steps/s, "
              f"checksum {r['checksum']:.12f})")
    if len(results) == 2:
        ratio = results["python"]["seconds"] / results["cython"]["seconds"]
        agree = abs(results["python"]["checksum"]
                    - results["cython"]["checksum"])
        print(f"  speedup x{ratio:.1f}, checksum gap {agree:.3e}")


if __name__ == "__main__":
    main()
