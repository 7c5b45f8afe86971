"""Subspaces of R^m, principal angles and the distances built on them.

A plane is stored as an ``n x m`` generator matrix with orthonormal rows.
Principal angles are computed from both the cosine matrix ``A B^T`` and the
sine matrix ``B (I - A^T A)`` so that angles near 0 and near pi/2 are equally
accurate.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import DimensionMismatch, GrassPackError, NotOrthonormal, RankDeficient

Metric = Literal["chordal", "geodesic", "maxangle"]
METRICS: tuple[str, ...] = ("chordal", "geodesic", "maxangle")

ORTHO_TOL = 1e-10
RANK_TOL = 1e-10

# Cross-check the two chordal formulas on every call when set.
DEBUG = bool(os.environ.get("GRASSPACK_DEBUG"))


def _check_metric(metric: str) -> None:
    if metric not in METRICS:
        raise GrassPackError(f"unknown metric {metric!r}; expected one of {METRICS}")


def orthonormality_error(gen: np.ndarray) -> float:
    """Max absolute entry of ``gen gen^T - I``."""
    gen = np.asarray(gen, dtype=float)
    return float(np.abs(gen @ gen.T - np.eye(gen.shape[0])).max())


@dataclass(frozen=True, eq=False)
class Plane:
    """An n-dimensional subspace of R^m given by orthonormal generator rows."""

    gen: np.ndarray

    def __post_init__(self):
        gen = np.array(self.gen, dtype=float, ndmin=2)
        if gen.ndim != 2 or gen.shape[0] > gen.shape[1] or gen.shape[0] < 1:
            raise DimensionMismatch(f"generator must be n x m with 1 <= n <= m, got {gen.shape}")
        err = orthonormality_error(gen)
        if err > ORTHO_TOL:
            raise NotOrthonormal(f"generator rows not orthonormal (deviation {err:.3g})")
        gen.setflags(write=False)
        object.__setattr__(self, "gen", gen)

    @property
    def n(self) -> int:
        return self.gen.shape[0]

    @property
    def m(self) -> int:
        return self.gen.shape[1]

    def __repr__(self):
        return f"Plane(m={self.m}, n={self.n})"


def orthonormalize(raw) -> Plane:
    """Orthonormalize the rows of ``raw`` (Gram-Schmidt order, positive diagonal).

    Raises
    ------
    RankDeficient
        If the smallest singular value is below ``1e-10`` times the largest.
    """
    raw = np.array(raw, dtype=float, ndmin=2)
    n, m = raw.shape
    if n > m:
        raise RankDeficient(f"{n} rows cannot be independent in R^{m}")
    sv = np.linalg.svd(raw, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] < RANK_TOL * sv[0]:
        raise RankDeficient("generator matrix has numerical rank < n")
    q, r = np.linalg.qr(raw.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    gen = (q * signs).T
    return Plane(gen + 0.0)


def random_plane(m: int, n: int, rng=None) -> Plane:
    """Rotation-invariant random plane: orthonormalized Gaussian n x m matrix."""
    if not 1 <= n <= m:
        raise DimensionMismatch(f"need 1 <= n <= m, got m={m}, n={n}")
    rng = np.random.default_rng(rng)
    while True:
        try:
            return orthonormalize(rng.standard_normal((n, m)))
        except RankDeficient:  # probability zero, but be safe
            continue


def _same_shape(P: Plane, Q: Plane) -> None:
    if P.gen.shape != Q.gen.shape:
        raise DimensionMismatch(f"G({P.m},{P.n}) vs G({Q.m},{Q.n})")


def _angles_from_gens(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Principal angles for (stacks of) orthonormal generators, ascending."""
    C = A @ np.swapaxes(B, -1, -2)
    S = B - np.swapaxes(C, -1, -2) @ A
    cos = np.linalg.svd(C, compute_uv=False)  # descending
    sin = np.linalg.svd(S, compute_uv=False)[..., ::-1]  # ascending
    cos = np.clip(cos, 0.0, 1.0)
    sin = np.clip(sin, 0.0, 1.0)
    theta = np.arctan2(sin, cos)
    return np.sort(theta, axis=-1)


def principal_angles(P: Plane, Q: Plane) -> np.ndarray:
    """The n principal angles between P and Q in [0, pi/2], ascending."""
    _same_shape(P, Q)
    A, B = P.gen, Q.gen
    # fixed argument order makes every distance exactly symmetric
    if A.tobytes() > B.tobytes():
        A, B = B, A
    return _angles_from_gens(A, B)


def _dist_from_angles(theta: np.ndarray, metric: str) -> np.ndarray:
    if metric == "chordal":
        return np.sqrt(np.sum(np.sin(theta) ** 2, axis=-1))
    if metric == "geodesic":
        return np.sqrt(np.sum(theta**2, axis=-1))
    return theta[..., -1]


def chordal_distance(P: Plane, Q: Plane) -> float:
    theta = principal_angles(P, Q)
    d = float(_dist_from_angles(theta, "chordal"))
    if DEBUG:
        alt = np.sqrt(max(P.n - np.sum((P.gen @ Q.gen.T) ** 2), 0.0))
        assert abs(alt - d) <= 1e-9 * max(1.0, d), (d, alt)
    return d


def geodesic_distance(P: Plane, Q: Plane) -> float:
    return float(_dist_from_angles(principal_angles(P, Q), "geodesic"))


def max_angle_distance(P: Plane, Q: Plane) -> float:
    return float(principal_angles(P, Q)[-1])


def distance(P: Plane, Q: Plane, metric: Metric = "chordal") -> float:
    _check_metric(metric)
    if metric == "chordal":
        return chordal_distance(P, Q)
    if metric == "geodesic":
        return geodesic_distance(P, Q)
    return max_angle_distance(P, Q)


def projection_matrix(P: Plane) -> np.ndarray:
    """Orthogonal projection of R^m onto P, ``gen^T gen`` (symmetrized)."""
    M = P.gen.T @ P.gen
    return (M + M.T) / 2


def detraced(P: Plane) -> np.ndarray:
    """Projection matrix minus ``(n/m) I``; lies on a sphere of squared radius n(m-n)/m."""
    return projection_matrix(P) - (P.n / P.m) * np.eye(P.m)


def chordal_from_projection(Pm: np.ndarray, Qm: np.ndarray) -> float:
    """Chordal distance as ``||P - Q||_F / sqrt(2)`` for projection matrices."""
    Pm = np.asarray(Pm, dtype=float)
    Qm = np.asarray(Qm, dtype=float)
    if Pm.shape != Qm.shape or Pm.ndim != 2 or Pm.shape[0] != Pm.shape[1]:
        raise DimensionMismatch(f"projection shapes {Pm.shape} and {Qm.shape}")
    if abs(np.trace(Pm) - np.trace(Qm)) > 1e-8:
        raise DimensionMismatch("projection matrices have different traces")
    return float(np.linalg.norm(Pm - Qm) / np.sqrt(2.0))


def complement(P: Plane) -> Plane:
    """Orthogonal complement, an (m-n)-plane."""
    if P.n >= P.m:
        raise DimensionMismatch("complement of the whole space is empty")
    _, _, vt = np.linalg.svd(P.gen)
    return orthonormalize(vt[P.n:])


@dataclass(frozen=True, eq=False)
class Packing:
    """An ordered list of planes in a common G(m, n)."""

    planes: tuple[Plane, ...]
    metric: str = "chordal"
    comments: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        planes = tuple(self.planes)
        if not planes:
            raise GrassPackError("a packing needs at least one plane")
        shape = planes[0].gen.shape
        for P in planes:
            if P.gen.shape != shape:
                raise DimensionMismatch("all planes in a packing must share (m, n)")
        _check_metric(self.metric)
        object.__setattr__(self, "planes", planes)
        object.__setattr__(self, "comments", tuple(self.comments))

    @classmethod
    def from_gens(cls, gens: Iterable, metric: str = "chordal", orthonormal: bool = False, **kw):
        make = Plane if orthonormal else orthonormalize
        return cls(tuple(make(g) for g in gens), metric=metric, **kw)

    @property
    def m(self) -> int:
        return self.planes[0].m

    @property
    def n(self) -> int:
        return self.planes[0].n

    @property
    def N(self) -> int:
        return len(self.planes)

    def __len__(self):
        return len(self.planes)

    def __iter__(self):
        return iter(self.planes)

    def __getitem__(self, i):
        return self.planes[i]

    @cached_property
    def gens(self) -> np.ndarray:
        """Stacked generators, shape (N, n, m)."""
        g = np.stack([P.gen for P in self.planes])
        g.setflags(write=False)
        return g

    def with_metric(self, metric: str) -> "Packing":
        return Packing(self.planes, metric=metric, comments=self.comments)

    def __repr__(self):
        return f"Packing(N={self.N}, m={self.m}, n={self.n}, metric={self.metric!r})"


def pairwise_angles(gens: np.ndarray) -> np.ndarray:
    """All principal angles for a stack of generators, shape (N, N, n)."""
    gens = np.asarray(gens, dtype=float)
    return _angles_from_gens(gens[:, None], gens[None, :])


def pairwise_distances(packing: Packing | np.ndarray, metric: str | None = None) -> np.ndarray:
    """Symmetric N x N distance matrix with a zero diagonal."""
    if isinstance(packing, Packing):
        metric = metric or packing.metric
        gens = packing.gens
    else:
        gens = np.asarray(packing, dtype=float)
        metric = metric or "chordal"
    _check_metric(metric)
    D = _dist_from_angles(pairwise_angles(gens), metric)
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0.0)
    return D


def min_distance(packing: Packing, metric: str | None = None) -> tuple[float, tuple[int, int]]:
    """Smallest pairwise distance and the lexicographically first pair attaining it."""
    if packing.N < 2:
        raise GrassPackError("minimum distance needs at least two planes")
    D = pairwise_distances(packing, metric)
    iu, ju = np.triu_indices(packing.N, k=1)
    k = int(np.argmin(D[iu, ju]))
    return float(D[iu[k], ju[k]]), (int(iu[k]), int(ju[k]))


def canonical_pair(thetas: Sequence[float], m: int | None = None) -> tuple[Plane, Plane]:
    """Two n-planes in R^m with the given principal angles (standard position)."""
    thetas = np.asarray(thetas, dtype=float)
    n = len(thetas)
    m = 2 * n if m is None else m
    if m < 2 * n:
        raise DimensionMismatch("standard position needs m >= 2n")
    A = np.zeros((n, m))
    B = np.zeros((n, m))
    A[:, :n] = np.eye(n)
    B[np.arange(n), np.arange(n)] = np.cos(thetas)
    B[np.arange(n), n + np.arange(n)] = np.sin(thetas)
    return Plane(A), Plane(B)


def line_angle_degrees(d_chordal: float) -> float:
    """Angle between two lines whose chordal distance is ``d_chordal``."""
    return float(np.degrees(np.arcsin(np.clip(d_chordal, 0.0, 1.0))))
