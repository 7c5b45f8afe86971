"""Optimise N planes in G(4, 2) under the chordal and geodesic metrics.

Prints the best squared minimal distance per N next to the simplex bound.

    python3 scripts/reproduce_planes_g42.py --restarts 20 --geodesic-restarts 50
"""
import argparse
import time

from grasspack.bounds import bound
from grasspack.optimizer import OptimConfig, optimize


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=20)
    ap.add_argument("--geodesic-restarts", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--max-N", type=int, default=6)
    ap.add_argument("--max-N-geodesic", type=int, default=3)
    args = ap.parse_args()

    print(f"{'metric':>9} {'N':>3} {'d^2':>10} {'bound d_c^2':>11} {'sec':>6}")
    for metric, top, restarts in (("chordal", args.max_N, args.restarts),
                                  ("geodesic", args.max_N_geodesic, args.geodesic_restarts)):
        for N in range(2, top + 1):
            t0 = time.perf_counter()
            cfg = OptimConfig(metric=metric, restarts=restarts, seed=args.seed, workers=args.workers)
            r = optimize(4, 2, N, cfg)
            print(f"{metric:>9} {N:>3} {r.min_dist ** 2:10.6f} {bound(4, 2, N):11.6f} "
                  f"{time.perf_counter() - t0:6.1f}", flush=True)


if __name__ == "__main__":
    main()
