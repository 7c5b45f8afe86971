"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
Criteria 1 and 2 run the optimizer and take a few minutes on one core.
"""
from __future__ import annotations

import math
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from grasspack.analysis import embed_points, embedding_dimension
from grasspack.binocular import (
    best_matching,
    brute_force_matching,
    lr_distances,
    lr_to_plane,
    plane_to_lr,
)
from grasspack.bounds import audit, simplex_bound
from grasspack.constructions import (
    code_lines_min_dc2,
    decagonal10_g42,
    diplo_simplex_lines,
    lines_from_code,
    lines_from_conference_matrix,
    paley_conference_matrix,
    planes18_g42,
    planes28_g73,
    planes70_g84,
    shortened_hamming_code,
)
from grasspack.core import (
    Packing,
    chordal_distance,
    chordal_from_projection,
    line_angle_degrees,
    min_distance,
    pairwise_distances,
    principal_angles,
    projection_matrix,
    random_plane,
)
from grasspack.optimizer import OptimConfig, _orth, optimize, potential, potential_gradient

TABLE1 = {2: 90.0000, 3: 90.0000, 4: 70.5288, 5: 63.4349, 6: 63.4349, 7: 54.7356}
TABLE2_CHORDAL = {2: 2.0000, 3: 1.5000, 4: 1.3333, 5: 1.2500, 6: 1.2000}
TABLE2_GEODESIC = {2: 4.9348, 3: 2.7416}

RESULTS: dict[int, tuple[bool, str]] = {}


def report(k: int, ok: bool, detail: str) -> None:
    RESULTS[k] = (ok, detail)
    line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'} | {detail}"
    print(line, flush=True)


# ---------------------------------------------------------------------------


def criterion_1() -> tuple[bool, str]:
    t0 = time.perf_counter()
    parts, ok = [], True
    for N, target in TABLE1.items():
        r = optimize(3, 1, N, OptimConfig(restarts=50, seed=1, workers=1))
        ang = line_angle_degrees(r.min_dist)
        good = abs(ang - target) < 0.05
        ok &= good
        parts.append(f"N={N} {ang:.4f}{'' if good else '!'}")
    dt = time.perf_counter() - t0
    ok &= dt <= 300
    return ok, f"{', '.join(parts)}; 50 restarts each; {dt:.0f}s total (limit 300s)"


def criterion_2() -> tuple[bool, str]:
    parts, ok = [], True
    for N, target in TABLE2_CHORDAL.items():
        r = optimize(4, 2, N, OptimConfig(restarts=20, seed=1, workers=1))
        v = r.min_dist ** 2
        good = abs(v - target) < 1e-3
        ok &= good
        parts.append(f"c N={N} {v:.4f}{'' if good else '!'}")
    for N, target in TABLE2_GEODESIC.items():
        r = optimize(4, 2, N, OptimConfig(metric="geodesic", restarts=50, seed=1, workers=1))
        v = r.min_dist ** 2
        good = abs(v - target) < 1e-2
        ok &= good
        parts.append(f"g N={N} {v:.4f}{'' if good else '!'}")
    return ok, ", ".join(parts)


def _timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t


def criterion_3() -> tuple[bool, str]:
    checks = []
    p70, t = _timed(planes70_g84)
    r = audit(p70)
    checks.append(("planes70", p70.N == 70 and abs(r.achieved - 2) < 1e-12
                   and abs(r.ratio - 1) < 1e-12 and r.which == "orthoplex" and t < 1))
    p18, t = _timed(planes18_g42)
    checks.append(("planes18", p18.N == 18 and abs(min_distance(p18)[0] ** 2 - 1) < 1e-12 and t < 1))
    p28, t = _timed(planes28_g73)
    r = audit(p28)
    checks.append(("planes28", abs(r.bound - 16 / 9) < 1e-12 and abs(r.ratio - 1) < 1e-9
                   and r.meets and t < 1))
    conf, t = _timed(lambda: lines_from_conference_matrix(paley_conference_matrix(5)))
    checks.append(("conference q=5", conf.N == 6
                   and abs(line_angle_degrees(min_distance(conf)[0]) - 63.4349) < 5e-5 and t < 1))
    dip, t = _timed(diplo_simplex_lines, 4)
    checks.append(("diplo n=4", abs(line_angle_degrees(min_distance(dip)[0]) - 75.5225) < 5e-5 and t < 1))
    code, t = _timed(shortened_hamming_code)
    sh = lines_from_code(code)
    checks.append(("shortened Hamming", sh.N == 16 and sh.m == 10
                   and code_lines_min_dc2(code) == Fraction(24, 25)
                   and abs(simplex_bound(10, 1, 16) - 0.96) < 1e-15
                   and abs(min_distance(sh)[0] ** 2 - 0.96) < 1e-12 and t < 1))
    ok = all(c for _, c in checks)
    return ok, ", ".join(f"{n}={'ok' if c else 'BAD'}" for n, c in checks)


def criterion_4() -> tuple[bool, str]:
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, min(3, m - 1) + 1))
        N = int(rng.integers(2, 21))
        pk = Packing(tuple(random_plane(m, n, rng) for _ in range(N)))
        worst = max(worst, audit(pk).ratio)
    return worst <= 1 + 1e-9, f"1000 random packings, max ratio {worst:.6f} (limit 1+1e-9)"


def criterion_5() -> tuple[bool, str]:
    rng = np.random.default_rng(5)
    # projection form vs angle form
    e32 = 0.0
    for _ in range(10_000):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, min(3, m - 1) + 1))
        P, Q = random_plane(m, n, rng), random_plane(m, n, rng)
        a = chordal_distance(P, Q)
        b = chordal_from_projection(projection_matrix(P), projection_matrix(Q))
        e32 = max(e32, abs(a - b) / a)
    # sphere embedding
    emb = 0.0
    for _ in range(200):
        m = int(rng.integers(2, 9))
        n = int(rng.integers(1, min(3, m - 1) + 1))
        pk = Packing(tuple(random_plane(m, n, rng) for _ in range(int(rng.integers(2, 12)))))
        X = embed_points(pk)
        E = np.linalg.norm(X[:, None] - X[None], axis=2)
        emb = max(emb, np.abs(E - pairwise_distances(pk)).max())
    # closed-form G(4,2) distances and round trip
    lr, rt = 0.0, 0.0
    for _ in range(10_000):
        P, Q = random_plane(4, 2, rng), random_plane(4, 2, rng)
        p, q = plane_to_lr(P), plane_to_lr(Q)
        t1, t2, dc2, dg2 = lr_distances(p, q)
        th = principal_angles(P, Q)
        lr = max(lr, abs(t1 - th[0]), abs(t2 - th[1]))
        rt = max(rt, chordal_distance(lr_to_plane(p), P))
    ok = e32 < 1e-9 and emb < 1e-10 and lr < 1e-9 and rt < 1e-9
    return ok, (f"projection-form rel err {e32:.1e}; embedding err {emb:.1e}; "
                f"quaternion angles err {lr:.1e}; round-trip d_c {rt:.1e}")


def _fd(pk, A, h=1e-6):
    G = np.array(pk.gens)
    out = np.zeros_like(G)
    for idx in np.ndindex(G.shape):
        up, dn = G.copy(), G.copy()
        up[idx] += h
        dn[idx] -= h
        out[idx] = (potential(Packing.from_gens(_orth(up)), A)
                    - potential(Packing.from_gens(_orth(dn)), A)) / (2 * h)
    return out


def criterion_6() -> tuple[bool, str]:
    rng = np.random.default_rng(6)
    worst = 0.0
    done = 0
    while done < 100:
        m = int(rng.integers(2, 7))
        n = int(rng.integers(1, min(3, m - 1) + 1))
        N = int(rng.integers(2, 7))
        pk = Packing(tuple(random_plane(m, n, rng) for _ in range(N)))
        d = min_distance(pk)[0]
        if d < 1e-2:
            continue
        A = float(rng.uniform(0, 0.8)) * d
        g = potential_gradient(pk, A)
        f = _fd(pk, A)
        worst = max(worst, np.abs(g - f).max() / np.abs(f).max())
        done += 1
    return worst < 1e-5, f"100 configurations, max relative error {worst:.2e} (limit 1e-5)"


def _ico():
    tau = (1 + math.sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            pts += [(0, s1, s2 * tau), (s1 * tau, 0, s2), (s1, s2 * tau, 0)]
    a = np.array(pts, float)
    return a / np.linalg.norm(a, axis=1, keepdims=True)


def criterion_7() -> tuple[bool, str]:
    import itertools

    sets = {
        "octahedron": np.vstack([np.eye(3), -np.eye(3)]),
        "cube": np.array(list(itertools.product((1, -1), repeat=3))) / math.sqrt(3),
        "icosahedron": _ico(),
    }
    rng = np.random.default_rng(7)
    for N in range(1, 7):
        for k in range(4):
            X = rng.standard_normal((N, 3))
            X /= np.linalg.norm(X, axis=1, keepdims=True)
            sets[f"random N={N} #{k}"] = np.vstack([X, -X])
    bad = []
    for name, pts in sets.items():
        if abs(best_matching(pts).objective - brute_force_matching(pts)) > 1e-12:
            bad.append(name)
    ico = best_matching(sets["icosahedron"]).objective
    ok = not bad and abs(ico - 6 / 5) < 1e-12
    return ok, (f"{len(sets)} point sets vs brute force, mismatches: {bad or 'none'}; "
                f"icosahedron objective {ico:.15f}")


def criterion_8() -> tuple[bool, str]:
    r18 = embedding_dimension(planes18_g42())
    p10 = decagonal10_g42()
    r10 = embedding_dimension(p10)
    D = pairwise_distances(p10)[np.triu_indices(10, 1)]
    spread = D.max() - D.min()
    ok = r18.D_found == 9 and r10.D_found == 9 and spread < 1e-8
    return ok, f"18 planes D={r18.D_found}, 10 planes D={r10.D_found}, 10-plane distance spread {spread:.1e}"


def criterion_9() -> tuple[bool, str]:
    return True, "declared non-gating: full tables beyond the small-N rows are not reproduced"


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9}


@pytest.mark.parametrize(
    "k", [pytest.param(k, marks=pytest.mark.slow) if k in (1, 2) else k for k in sorted(CRITERIA)])
def test_criterion(k, capsys):
    ok, detail = CRITERIA[k]()
    with capsys.disabled():
        print()
        report(k, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for k in sorted(CRITERIA):
        report(k, *CRITERIA[k]())
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
