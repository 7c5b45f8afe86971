"""Potential-function packing search.

Each restart minimizes ``Phi(S) = sum_{i<j} 1 / (d(P_i, P_j) - A)`` with
Hooke-Jeeves pattern search over the raw generator entries.  After every
epoch the constant ``A`` moves halfway towards the current minimal distance,
which sharpens the potential around the closest pairs.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Packing, _check_metric, min_distance, random_plane
from .errors import GrassPackError, PoleCrossed


@dataclass(frozen=True)
class OptimConfig:
    metric: str = "chordal"
    restarts: int = 50
    steps_per_epoch: int = 100
    initial_step: float = 0.1
    step_shrink: float = 0.5
    min_step: float = 1e-12
    seed: int = 0
    initial_packing: Optional[Packing] = None
    max_epochs: int = 2000
    tol: float = 1e-12
    patience: int = 5
    workers: Optional[int] = None

    def __post_init__(self):
        _check_metric(self.metric)
        if self.metric == "maxangle":
            raise GrassPackError("the optimizer supports chordal and geodesic metrics only")
        if self.restarts < 1:
            raise GrassPackError("restarts must be >= 1")
        if not 0 < self.step_shrink < 1:
            raise GrassPackError("step_shrink must lie in (0, 1)")
        if self.steps_per_epoch < 1 or self.initial_step <= 0:
            raise GrassPackError("steps_per_epoch and initial_step must be positive")


@dataclass
class OptimResult:
    """Winning packing of a multi-start run.

    ``potential_trace`` holds ``(epoch, A, min_dist)`` for the winning
    restart, where ``min_dist`` belongs to the best configuration seen so far
    in that restart (the one it would return if stopped there).
    """

    packing: Packing
    min_dist: float
    potential_trace: list = field(default_factory=list)
    restart_index: int = 0
    # restart index -> [(epoch, A, best min_dist, current min_dist,
    #                    potential at epoch start, potential at epoch end)]
    all_traces: dict = field(default_factory=dict, repr=False)


# ---------------------------------------------------------------------------
# vectorized kernels on raw generator stacks of shape (N, n, m)


def _orth(raw: np.ndarray) -> np.ndarray:
    """Row-orthonormalize a stack of generators (positive-diagonal QR)."""
    if raw.shape[-2] == 1:
        return raw / np.linalg.norm(raw, axis=-1, keepdims=True)
    q, r = np.linalg.qr(np.swapaxes(raw, -1, -2))
    d = np.sign(np.diagonal(r, axis1=-2, axis2=-1))
    d = np.where(d == 0, 1.0, d)
    return np.swapaxes(q * d[..., None, :], -1, -2)


def _dist_rows(G: np.ndarray, g: np.ndarray, metric: str) -> np.ndarray:
    """Distances from plane ``g`` (n x m) to every plane in the stack ``G``."""
    n = g.shape[0]
    M = G @ g.T
    if metric == "chordal":
        s = n - np.einsum("jab,jab->j", M, M)
        return np.sqrt(np.maximum(s, 0.0))
    if n == 1:
        theta = np.arccos(np.minimum(np.abs(M[:, 0, 0]), 1.0))
        return theta
    cos = np.linalg.svd(M, compute_uv=False)
    theta = np.arccos(np.minimum(cos, 1.0))
    return np.sqrt(np.sum(theta * theta, axis=-1))


def _dist_matrix(G: np.ndarray, metric: str) -> np.ndarray:
    N, n, _ = G.shape
    M = np.einsum("iam,jbm->ijab", G, G)
    if metric == "chordal":
        s = n - np.einsum("ijab,ijab->ij", M, M)
        D = np.sqrt(np.maximum(s, 0.0))
    else:
        if n == 1:
            theta = np.arccos(np.minimum(np.abs(M[..., 0, 0]), 1.0))
            D = theta
        else:
            cos = np.linalg.svd(M, compute_uv=False)
            theta = np.arccos(np.minimum(cos, 1.0))
            D = np.sqrt(np.sum(theta * theta, axis=-1))
    D = (D + D.T) / 2
    np.fill_diagonal(D, np.inf)
    return D


def _terms(D: np.ndarray, A: float) -> Optional[np.ndarray]:
    """Matrix of 1/(d - A) (zero diagonal) or None if a pair is at or past the pole."""
    off = D[np.isfinite(D)]
    if off.size and off.min() <= A:
        return None
    with np.errstate(divide="ignore"):
        T = 1.0 / (D - A)
    T[~np.isfinite(D)] = 0.0
    return T


# ---------------------------------------------------------------------------


class _Search:
    """Mutable Hooke-Jeeves state for one restart.  Not shared across workers."""

    def __init__(self, raw: np.ndarray, metric: str, A: float):
        self.metric = metric
        self.A = A
        if not self.set_raw(raw):
            raise PoleCrossed("starting configuration has a pairwise distance <= A")

    def set_raw(self, raw: np.ndarray) -> bool:
        G = _orth(raw)
        if not np.all(np.isfinite(G)):
            return False
        D = _dist_matrix(G, self.metric)
        T = _terms(D, self.A)
        if T is None:
            return False
        self.raw, self.G, self.D, self.T = raw.copy(), G, D, T
        self.rows = T.sum(axis=1)
        self.f = float(self.rows.sum() / 2)
        return True

    def try_coord(self, i: int, a: int, b: int, delta: float) -> bool:
        """Move one raw entry; keep it when the potential drops."""
        row = self.raw[i].copy()
        row[a, b] += delta
        g = _orth(row[None])[0]
        if not np.all(np.isfinite(g)):
            return False
        d = _dist_rows(self.G, g, self.metric)
        d[i] = np.inf
        if d.min() <= self.A:
            return False
        t = 1.0 / (d - self.A)
        t[i] = 0.0
        new_row = float(t.sum())
        f_new = self.f - self.rows[i] + new_row
        if not f_new < self.f:
            return False
        self.raw[i] = row
        self.G[i] = g
        self.D[i, :] = d
        self.D[:, i] = d
        self.rows += t - self.T[:, i]
        self.rows[i] = new_row
        self.T[i, :] = t
        self.T[:, i] = t
        self.f = f_new
        return True

    def explore(self, h: float) -> bool:
        moved = False
        N, n, m = self.raw.shape
        for i in range(N):
            for a in range(n):
                for b in range(m):
                    if self.try_coord(i, a, b, h) or self.try_coord(i, a, b, -h):
                        moved = True
        # accumulated round-off in the incremental sums
        self.f = float(self.T.sum() / 2)
        self.rows = self.T.sum(axis=1)
        return moved

    def snapshot(self) -> tuple:
        return (self.raw.copy(), self.G.copy(), self.D.copy(), self.T.copy(),
                self.rows.copy(), self.f)

    def restore(self, snap: tuple) -> None:
        raw, G, D, T, rows, f = snap
        self.raw, self.G, self.D, self.T = raw.copy(), G.copy(), D.copy(), T.copy()
        self.rows, self.f = rows.copy(), f

    def min_dist(self) -> float:
        return float(self.D.min())


def _epoch(search: _Search, steps: int, h: float, shrink: float, min_step: float) -> float:
    """Hooke-Jeeves until ``steps`` coordinate probes are used; returns the final step.

    A step is one exploratory probe of one raw entry, so an epoch holds at
    least one full sweep.  Sweeps after pattern moves count as well.
    """
    used = 0
    ncoord = search.raw.size
    while used < steps and h >= min_step:
        base = search.snapshot()
        used += ncoord
        if not search.explore(h):
            h *= shrink
            continue
        # pattern moves: keep jumping along the last improving direction
        while used < steps:
            here = search.snapshot()
            if not search.set_raw(2 * here[0] - base[0]):
                break
            used += ncoord
            search.explore(h)
            if search.f < here[-1]:
                base = here
            else:
                search.restore(here)
                break
    return h


def potential(packing: Packing, A: float = 0.0, metric: str | None = None) -> float:
    """``sum_{i<j} 1 / (d(P_i, P_j) - A)``.

    Raises
    ------
    PoleCrossed
        If some pairwise distance is <= A.
    """
    metric = metric or packing.metric
    _check_metric(metric)
    D = _dist_matrix(np.array(packing.gens), metric)
    if D.min() <= A:
        raise PoleCrossed(f"minimal distance {D.min():.6g} is not above A={A:.6g}")
    iu = np.triu_indices(packing.N, 1)
    return float(np.sum(1.0 / (D[iu] - A)))


def potential_gradient(packing: Packing, A: float = 0.0, metric: str | None = None,
                       h: float = 1e-6) -> np.ndarray:
    """Gradient of the potential with respect to each plane's generator entries.

    Returns an array of shape (N, n, m).  The chordal gradient is analytic,
    ``d(d_c^2)/dX_i = -2 X_i Q_j (I - P_i)`` for orthonormal ``X_i``; it is
    tangent to each plane (its rows lie in the orthogonal complement).  The
    geodesic gradient uses central differences with step ``h``.
    """
    metric = metric or packing.metric
    G = np.array(packing.gens)
    N, n, m = G.shape
    D = _dist_matrix(G, metric)
    if D.min() <= A:
        raise PoleCrossed(f"minimal distance {D.min():.6g} is not above A={A:.6g}")
    if metric == "chordal":
        P = np.einsum("iam,iak->imk", G, G)
        eye = np.eye(m)
        # dPhi/dd = -1/(d-A)^2 ; dd/ds = 1/(2d) with s = d^2
        with np.errstate(divide="ignore"):
            w = -1.0 / ((D - A) ** 2 * 2 * D)
        np.fill_diagonal(w, 0.0)
        grad = np.zeros_like(G)
        for i in range(N):
            Qsum = np.einsum("j,jmk->mk", w[i], P)
            grad[i] = -2.0 * G[i] @ Qsum @ (eye - P[i])
        return grad
    if metric != "geodesic":
        raise GrassPackError("gradients are defined for chordal and geodesic potentials")

    def phi(raw):
        D = _dist_matrix(_orth(raw), metric)
        iu = np.triu_indices(N, 1)
        return float(np.sum(1.0 / (D[iu] - A)))

    grad = np.zeros_like(G)
    for idx in np.ndindex(G.shape):
        up = G.copy()
        dn = G.copy()
        up[idx] += h
        dn[idx] -= h
        grad[idx] = (phi(up) - phi(dn)) / (2 * h)
    return grad


def pattern_search_epoch(packing: Packing, A: float, config: OptimConfig,
                         step: float | None = None) -> Packing:
    """One epoch of Hooke-Jeeves at fixed ``A``; never increases the potential.

    Trial points with some pairwise distance <= A count as ``Phi = inf``.
    The input packing is returned as is when no probe improves it.
    """
    search = _Search(np.array(packing.gens), config.metric, A)
    f0 = search.f
    _epoch(search, config.steps_per_epoch, config.initial_step if step is None else step,
           config.step_shrink, config.min_step)
    if not search.f < f0:
        return packing
    return Packing.from_gens(search.G, metric=config.metric, orthonormal=True,
                             comments=packing.comments)


def _restart_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def _run_restart(args) -> tuple[int, np.ndarray, float, list]:
    m, n, N, config, index = args
    if config.initial_packing is not None and index == 0:
        raw = np.array(config.initial_packing.gens)
    else:
        rng = _restart_rng(config.seed, index)
        raw = np.stack([random_plane(m, n, rng).gen for _ in range(N)])
    A = 0.0
    search = _Search(raw, config.metric, A)
    best_G, best_d = search.G.copy(), search.min_dist()
    trace = []
    stall = 0
    h = config.initial_step
    for epoch in range(config.max_epochs):
        f_start = search.f
        # the step carries over (relaxed once) since d - A shrinks every epoch
        h = _epoch(search, config.steps_per_epoch, min(config.initial_step, h / config.step_shrink),
                   config.step_shrink, config.min_step)
        d = search.min_dist()
        if d - best_d > config.tol:
            best_G, best_d, stall = search.G.copy(), d, 0
        else:
            stall += 1
        trace.append((epoch, A, best_d, d, f_start, search.f))
        if stall >= config.patience or (h < config.min_step and d - A < config.tol):
            break
        A = A + (d - A) / 2
        search.A = A
        # continue from orthonormal rows so the step size keeps its meaning
        search.set_raw(search.G.copy())
    return index, best_G, best_d, trace


def _workers(config: OptimConfig) -> int:
    if config.workers is not None:
        return max(1, config.workers)
    cap = os.environ.get("GRASSPACK_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return n


def optimize(m: int, n: int, N: int, config: OptimConfig | None = None) -> OptimResult:
    """Best packing of N planes in G(m, n) over ``config.restarts`` starts.

    Restart ``k`` draws its start from ``SeedSequence([seed, k])`` so the
    result does not depend on how restarts are spread over workers.  Ties on
    the minimal distance go to the lowest restart index.
    """
    config = config or OptimConfig()
    if not 1 <= n <= m or N < 2:
        raise GrassPackError(f"cannot pack N={N} planes in G({m},{n})")
    if config.initial_packing is not None:
        p = config.initial_packing
        if (p.m, p.n, p.N) != (m, n, N):
            raise GrassPackError("initial packing does not match (m, n, N)")
    jobs = [(m, n, N, config, k) for k in range(config.restarts)]
    workers = min(_workers(config), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(_run_restart, jobs))
    else:
        results = [_run_restart(j) for j in jobs]
    best = None
    traces = {}
    for index, G, d, trace in results:
        traces[index] = trace
        if best is None or d > best[2]:
            best = (index, G, d, trace)
    index, G, _, trace = best
    packing = Packing.from_gens(G, metric=config.metric)
    d, _ = min_distance(packing, config.metric)
    return OptimResult(packing, d, [t[:3] for t in trace], index, traces)
