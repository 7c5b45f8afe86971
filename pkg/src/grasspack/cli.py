"""Command line front end: ``grasspack <command> ...``.

Exit status is 0 on success, 2 on invalid input and 3 when a matching with
the requested minimal distance does not exist.
"""
from __future__ import annotations

import argparse
import math
import sys
from collections import Counter

import numpy as np

from . import io
from .analysis import embed_points, embedding_dimension, tour
from .binocular import BinocularPair, best_matching, packing_from_lr, packing_to_lr, solve_matching
from .bounds import audit
from .constructions import CONSTRUCTIONS, construct
from .core import line_angle_degrees, min_distance, pairwise_angles, pairwise_distances
from .errors import GrassPackError
from .optimizer import OptimConfig, optimize

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3


def _say(text: str = "", stream=None) -> None:
    (stream or sys.stdout).write(text + "\n")


def _fmt_angles(thetas) -> str:
    return " ".join(f"{math.degrees(t):.4f}" for t in thetas)


def cmd_optimize(args) -> int:
    cfg = OptimConfig(metric=args.metric, restarts=args.restarts, seed=args.seed,
                      steps_per_epoch=args.steps, workers=args.workers)
    res = optimize(args.m, args.n, args.N, cfg)
    p = res.packing
    if args.out in (None, "-"):
        io.write(p)
        stream = sys.stderr
    else:
        io.write(p, args.out)
        stream = sys.stdout
    _say(f"G({args.m},{args.n}) N={args.N} metric={args.metric} restarts={args.restarts} "
         f"seed={args.seed} best_restart={res.restart_index}", stream)
    _say(f"min distance  {res.min_dist:.12f}", stream)
    _say(f"min distance^2 {res.min_dist ** 2:.12f}", stream)
    if args.n == 1 and args.metric == "chordal":
        _say(f"min angle     {line_angle_degrees(res.min_dist):.4f}", stream)
    return EXIT_OK


def cmd_eval(args) -> int:
    p = io.parse(args.file)
    if p.N < 2:
        raise GrassPackError("eval needs N >= 2 planes")
    metric = args.metric or p.metric
    d, (i, j) = min_distance(p, metric)
    _say(f"G({p.m},{p.n}) N={p.N} metric={metric}")
    _say(f"min distance   {d:.12f}")
    _say(f"min distance^2 {d * d:.12f}")
    _say(f"closest pair   {i} {j}")
    A = pairwise_angles(p.gens)
    _say(f"principal angles of closest pair (deg): {_fmt_angles(A[i, j])}")
    if p.n == 1:
        dc, _ = min_distance(p, "chordal")
        _say(f"min angle      {line_angle_degrees(dc):.4f}")
    D = pairwise_distances(p, metric)
    iu = np.triu_indices(p.N, 1)
    counts = Counter(np.round(D[iu] ** 2, 8).tolist())
    _say("distance^2 distribution:")
    for v in sorted(counts):
        _say(f"  {v:.8f} x {counts[v]}")
    return EXIT_OK


def cmd_audit(args) -> int:
    p = io.parse(args.file)
    if p.N < 2:
        raise GrassPackError("audit needs N >= 2 planes")
    r = audit(p)
    _say(f"m={r.m} n={r.n} N={r.N} D={r.D}")
    _say(f"simplex bound   {r.simplex_bound:.14f}")
    _say("orthoplex bound " + ("-" if r.orthoplex_bound is None else f"{r.orthoplex_bound:.14f}"))
    _say(f"achieved        {r.achieved:.14f}")
    _say(f"bound ({r.which}) {r.bound:.14f}")
    _say(f"ratio {r.ratio:.14f}")
    _say(f"meets {'yes' if r.meets else 'no'}")
    return EXIT_OK


def cmd_construct(args) -> int:
    p = construct(args.name, *args.args)
    io.write(p, args.out)
    return EXIT_OK


def cmd_embed(args) -> int:
    p = io.parse(args.file)
    rep = embedding_dimension(p, tol=args.tol)
    _say(f"D_found  {rep.D_found}")
    _say(f"D_theory {rep.D_theory}")
    _say(f"radius   {rep.radius:.12f}")
    _say("eigenvalues " + " ".join(f"{w:.6g}" for w in rep.gram_eigenvalues))
    if args.coords:
        X = embed_points(p)
        np.savetxt(args.coords, X, fmt="%.17g")
    return EXIT_OK


def cmd_match(args) -> int:
    pts = io.read_matrix(args.points)
    right = io.read_matrix(args.right) if args.right else None
    if args.M is not None:
        m = solve_matching(pts, args.M, right)
        if m is None:
            _say(f"infeasible: no matching with d_c^2 >= {args.M}")
            return EXIT_INFEASIBLE
    else:
        m = best_matching(pts, right)
    _say(f"objective {m.objective:.14f}")
    for i, j in enumerate(m.perm):
        _say(f"{i} -> {j}")
    if args.out:
        io.write(m.packing(), args.out)
    return EXIT_OK


def cmd_tour(args) -> int:
    p = io.parse(args.file)
    t = tour(p)
    out = args.out
    if out is None and args.file != "-":
        out = str(args.file).rsplit(".", 1)[0] + ".ham"
    io.write_order(t.order, out)
    stream = sys.stderr if out in (None, "-") else sys.stdout
    _say(f"length {t.total_length:.12f} min_edge {t.min_edge:.12f} max_edge {t.max_edge:.12f}", stream)
    return EXIT_OK


def cmd_convert_binocular(args) -> int:
    if args.reverse:
        M = io.read_matrix(args.file)
        if M.shape[1] != 6:
            raise GrassPackError("expected rows 'l1 l2 l3 r1 r2 r3'")
        io.write(packing_from_lr([BinocularPair.normalized(row[:3], row[3:]) for row in M]), args.out)
        return EXIT_OK
    p = io.parse(args.file)
    lines = ["# l1 l2 l3 r1 r2 r3"]
    for pair in packing_to_lr(p):
        lines.append(" ".join(format(float(x), ".17g") for x in np.concatenate([pair.l, pair.r])))
    text = "\n".join(lines) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grasspack", description="Packings in Grassmannian spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("optimize", help="search for a good packing of N planes in G(m, n)")
    s.add_argument("m", type=int)
    s.add_argument("n", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--metric", choices=("chordal", "geodesic"), default="chordal")
    s.add_argument("--restarts", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--steps", type=int, default=100, help="coordinate probes per epoch")
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("eval", help="minimal distance and distance spectrum of a packing file")
    s.add_argument("file")
    s.add_argument("--metric", choices=("chordal", "geodesic", "maxangle"), default=None)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("audit", help="compare a packing with the simplex/orthoplex bounds")
    s.add_argument("file", help="packing file or - for stdin")
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("construct", help="write an algebraic packing")
    s.add_argument("name", choices=sorted(CONSTRUCTIONS))
    s.add_argument("args", nargs="*", help="e.g. q for conference, n for diplo")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("embed", help="embedding dimension of the chordal distances")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--coords", default=None, help="write sphere coordinates here")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("match", help="match antipodal left/right codes in R^3")
    s.add_argument("points")
    s.add_argument("--right", default=None)
    s.add_argument("--M", type=float, default=None, help="decide feasibility for this d_c^2")
    s.add_argument("--out", default=None, help="write the resulting G(4,2) packing")
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("tour", help="short Hamiltonian cycle under chordal distance")
    s.add_argument("file")
    s.add_argument("--out", default=None, help="index list (default: FILE with .ham suffix)")
    s.set_defaults(func=cmd_tour)

    s = sub.add_parser("convert-binocular", help="G(4,2) packing <-> (l, r) pairs")
    s.add_argument("file")
    s.add_argument("--reverse", action="store_true", help="read pairs, write a packing")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_convert_binocular)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GrassPackError, OSError) as exc:
        _say(f"grasspack: error: {exc}", sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
