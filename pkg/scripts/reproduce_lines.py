"""Optimise N lines in R^3 and print the best minimal angle for each N.

    python3 scripts/reproduce_lines.py --restarts 50 --seed 1
"""
import argparse
import time

from grasspack.bounds import audit
from grasspack.core import line_angle_degrees
from grasspack.optimizer import OptimConfig, optimize

REFERENCE = {2: 90.0, 3: 90.0, 4: 70.5288, 5: 63.4349, 6: 63.4349, 7: 54.7356}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--restarts", type=int, default=50)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--max-N", type=int, default=7)
    args = ap.parse_args()

    print(f"{'N':>3} {'angle':>9} {'reference':>9} {'ratio':>9} {'sec':>6}")
    for N in range(2, args.max_N + 1):
        t0 = time.perf_counter()
        r = optimize(3, 1, N, OptimConfig(restarts=args.restarts, seed=args.seed, workers=args.workers))
        ref = REFERENCE.get(N)
        ref_s = f"{ref:9.4f}" if ref is not None else f"{'-':>9}"
        print(f"{N:>3} {line_angle_degrees(r.min_dist):9.4f} {ref_s} "
              f"{audit(r.packing).ratio:9.6f} {time.perf_counter() - t0:6.1f}", flush=True)


if __name__ == "__main__":
    main()
