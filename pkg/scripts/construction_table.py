"""Audit every registered algebraic construction against the bounds."""
from grasspack.bounds import audit
from grasspack.constructions import CONSTRUCTIONS, construct

# extra parameter choices beyond the registry defaults
EXTRA = [("conference", 9), ("conference", 13), ("diplo", 2), ("diplo", 9)]


def main():
    print(f"{'construction':<22} {'m':>3} {'n':>2} {'N':>4} {'d_c^2':>10} {'bound':>10} {'ratio':>9} meets")
    jobs = [(name, ()) for name in CONSTRUCTIONS] + [(name, (arg,)) for name, arg in EXTRA]
    for name, args in jobs:
        r = audit(construct(name, *args))
        label = name + (f"({args[0]})" if args else "")
        print(f"{label:<22} {r.m:>3} {r.n:>2} {r.N:>4} {r.achieved:10.6f} {r.bound:10.6f} "
              f"{r.ratio:9.6f} {'yes' if r.meets else 'no'}")


if __name__ == "__main__":
    main()
