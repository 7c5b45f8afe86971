"""Quaternion ("binocular") description of 2-planes in R^4.

A point ``x`` of R^4 is the quaternion ``x0 + x1 i + x2 j + x3 k``.  A plane
spanned by orthonormal ``u, v`` maps to the pair of unit imaginary
quaternions ``l = u conj(v)``, ``r = conj(v) u``, defined up to a common
sign.  Conversely ``(l, r)`` gives back the plane spanned by ``1 - l r`` and
``l + r``.  Imaginary quaternions are stored as 3-vectors.

The module also solves the matching problem: given a left and a right
antipodal code, pair them up so that the resulting planes are as far apart as
possible in chordal distance.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Packing, Plane, orthonormalize
from .errors import DimensionMismatch, GrassPackError

UNIT_TOL = 1e-10
# below this |l + r| the formula u = 1 - l r, v = l + r loses its plane
_DEGENERATE = 1e-7
# slack on the strict "< M" test of the matching constraints
MATCH_TOL = 1e-12


# ---------------------------------------------------------------------------
# quaternion arithmetic on arrays of shape (..., 4)


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    a0, a = p[..., :1], p[..., 1:]
    b0, b = q[..., :1], q[..., 1:]
    real = a0 * b0 - np.sum(a * b, axis=-1, keepdims=True)
    imag = a0 * b + b0 * a + np.cross(a, b)
    return np.concatenate([real, imag], axis=-1)


def qconj(q: np.ndarray) -> np.ndarray:
    q = np.array(q, float)
    q[..., 1:] *= -1
    return q


def _imag(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def _canonical_sign(l: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    for x in l:
        if abs(x) > 1e-12:
            if x < 0:
                return -l, -r
            break
    return l, r


@dataclass(frozen=True)
class BinocularPair:
    """Unit 3-vectors ``l, r``; ``(l, r)`` and ``(-l, -r)`` are the same plane."""

    l: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        l = np.array(self.l, float).reshape(3)
        r = np.array(self.r, float).reshape(3)
        if abs(np.linalg.norm(l) - 1) > UNIT_TOL or abs(np.linalg.norm(r) - 1) > UNIT_TOL:
            raise GrassPackError("binocular pair needs unit vectors")
        l, r = _canonical_sign(l, r)
        l, r = l + 0.0, r + 0.0  # no negative zeros
        l.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "r", r)

    @classmethod
    def normalized(cls, l, r) -> "BinocularPair":
        l = np.asarray(l, float)
        r = np.asarray(r, float)
        return cls(l / np.linalg.norm(l), r / np.linalg.norm(r))


def plane_to_lr(P: Plane) -> BinocularPair:
    if (P.m, P.n) != (4, 2):
        raise DimensionMismatch(f"binocular form needs a plane in G(4,2), got G({P.m},{P.n})")
    u, v = P.gen
    l = qmul(u, qconj(v))[1:]
    r = qmul(qconj(v), u)[1:]
    return BinocularPair.normalized(l, r)


def lr_to_plane(pair: BinocularPair) -> Plane:
    l, r = pair.l, pair.r
    if np.linalg.norm(l + r) < _DEGENERATE:
        # l = -r: the plane orthogonal to 1 and l, with (l, u, v) right-handed
        seed = np.eye(3)[np.argmin(np.abs(l))]
        u = np.cross(l, seed)
        u /= np.linalg.norm(u)
        v = np.cross(l, u)
        return orthonormalize(np.stack([_imag(u), _imag(v)]))
    u = np.array([1.0, 0, 0, 0]) - qmul(_imag(l), _imag(r))
    v = _imag(l + r)
    return orthonormalize(np.stack([u, v]))


def _lr_angles(l1, r1, l2, r2):
    phi = math.acos(float(np.clip(np.dot(l1, l2), -1.0, 1.0)))
    psi = math.acos(float(np.clip(np.dot(r1, r2), -1.0, 1.0)))
    if phi + psi > math.pi:
        phi, psi = math.pi - phi, math.pi - psi
    return phi, psi


def lr_distances(p: BinocularPair, q: BinocularPair) -> tuple[float, float, float, float]:
    """``(theta1, theta2, d_c^2, d_g^2)`` between two planes given as pairs."""
    phi, psi = _lr_angles(p.l, p.r, q.l, q.r)
    t1, t2 = abs(psi - phi) / 2, (psi + phi) / 2
    dc2 = 1.0 - math.cos(psi) * math.cos(phi)
    dg2 = (psi * psi + phi * phi) / 2
    return t1, t2, dc2, dg2


def packing_to_lr(packing: Packing) -> list[BinocularPair]:
    return [plane_to_lr(P) for P in packing]


def packing_from_lr(pairs, metric: str = "chordal", comments=()) -> Packing:
    return Packing(tuple(lr_to_plane(p) for p in pairs), metric=metric, comments=tuple(comments))


# ---------------------------------------------------------------------------
# matching


@dataclass(frozen=True)
class Matching:
    """Antipodal bijection ``perm`` from ``points`` onto ``right``.

    ``perm[i]`` is the index in ``right`` of the image of ``points[i]``, and
    ``perm[antipode(i)] == antipode(perm[i])``.  ``objective`` is the smallest
    ``1 - (P_i . P_k)(f(P_i) . f(P_k))`` over pairs from different orbits,
    i.e. the minimal d_c^2 of the resulting planes (``inf`` for one orbit).
    """

    points: np.ndarray
    right: np.ndarray
    perm: np.ndarray
    objective: float

    def pairs(self) -> list[BinocularPair]:
        """One binocular pair per antipodal orbit of ``points``."""
        reps, _ = _orbits(self.points)
        return [BinocularPair.normalized(self.points[i], self.right[self.perm[i]]) for i in reps]

    def packing(self) -> Packing:
        return packing_from_lr(self.pairs())


def _orbits(points: np.ndarray, tol: float = 1e-9) -> tuple[list[int], np.ndarray]:
    """Orbit representatives (first index of each pair) and the antipode map."""
    points = np.asarray(points, float)
    if points.ndim != 2 or points.shape[1] != 3 or len(points) % 2:
        raise GrassPackError("expected an even number of points in R^3")
    if np.max(np.abs(np.linalg.norm(points, axis=1) - 1)) > 1e-9:
        raise GrassPackError("points must be unit vectors")
    n = len(points)
    anti = np.full(n, -1)
    for i in range(n):
        hits = np.flatnonzero(np.max(np.abs(points + points[i]), axis=1) < tol)
        if len(hits) != 1:
            raise GrassPackError("point set is not closed under negation")
        anti[i] = hits[0]
    reps = [i for i in range(n) if i < anti[i]]
    return reps, anti


class _Problem:
    def __init__(self, points, right=None):
        self.points = np.asarray(points, float)
        self.right = self.points if right is None else np.asarray(right, float)
        self.lreps, self.lanti = _orbits(self.points)
        self.rreps, self.ranti = _orbits(self.right)
        if len(self.lreps) != len(self.rreps):
            raise GrassPackError("left and right codes differ in size")
        L = self.points[self.lreps]
        R = self.right[self.rreps]
        self.N = len(L)
        self.GL = L @ L.T
        self.GR = R @ R.T
        # option k = 2c + t assigns right orbit c with sign (+1, -1)[t]
        sign = np.array([1.0, -1.0])
        self.opt_orbit = np.repeat(np.arange(self.N), 2)
        self.opt_sign = np.tile(sign, self.N)
        s = self.opt_sign
        # prod[a, b, k, k'] = GL[a, b] * s_k s_k' * GR[c_k, c_k']
        self.sgr = (s[:, None] * s[None, :]) * self.GR[np.ix_(self.opt_orbit, self.opt_orbit)]

    def values(self):
        """Every achievable pair value, sorted and de-duplicated."""
        iu = np.triu_indices(self.N, 1)
        gl = self.GL[iu]
        gr = self.GR[iu]
        vals = 1.0 - np.concatenate([np.outer(gl, gr).ravel(), -np.outer(gl, gr).ravel()])
        vals = np.sort(vals)
        keep = np.concatenate([[True], np.diff(vals) > MATCH_TOL])
        return vals[keep]

    def solve(self, M: float) -> Optional[np.ndarray]:
        """Options per left orbit, or None.  Exact backtracking with forward checking."""
        N = self.N
        if N == 1:
            return np.array([0])
        thresh = 1.0 - M + MATCH_TOL  # forbidden when GL * sgr > thresh
        allowed = {}
        for a in range(N):
            for b in range(a + 1, N):
                allowed[a, b] = self.GL[a, b] * self.sgr <= thresh
        domains = [np.ones(2 * N, bool) for _ in range(N)]
        # a global sign flip changes nothing, so fix the sign of the first orbit
        domains[0][1::2] = False
        choice = np.full(N, -1)

        def rec(a, domains):
            if a == N:
                return True
            for k in np.flatnonzero(domains[a]):
                c = self.opt_orbit[k]
                new = []
                ok = True
                for b in range(a + 1, N):
                    d = domains[b] & allowed[a, b][k]
                    d[2 * c: 2 * c + 2] = False
                    if not d.any():
                        ok = False
                        break
                    new.append(d)
                if not ok:
                    continue
                choice[a] = k
                if rec(a + 1, domains[: a + 1] + new):
                    return True
            choice[a] = -1
            return False

        return choice.copy() if rec(0, domains) else None

    def objective(self, choice: np.ndarray) -> float:
        if self.N == 1:
            return math.inf
        best = math.inf
        for a in range(self.N):
            for b in range(a + 1, self.N):
                best = min(best, 1.0 - self.GL[a, b] * self.sgr[choice[a], choice[b]])
        return best

    def to_matching(self, choice: np.ndarray) -> Matching:
        perm = np.full(len(self.points), -1)
        for a, k in enumerate(choice):
            i = self.lreps[a]
            j = self.rreps[self.opt_orbit[k]]
            if self.opt_sign[k] < 0:
                j = self.ranti[j]
            perm[i] = j
            perm[self.lanti[i]] = self.ranti[j]
        return Matching(self.points.copy(), self.right.copy(), perm, self.objective(choice))


def solve_matching(points, M: float, right=None) -> Optional[Matching]:
    """A matching whose planes all have ``d_c^2 >= M``, or None when none exists.

    ``points`` is the left code (closed under negation); ``right`` defaults to
    the same set.  A pair of orbits is forbidden when its value is below
    ``M - 1e-12``, so values equal to ``M`` up to round-off are allowed.
    """
    prob = _Problem(points, right)
    choice = prob.solve(M)
    return None if choice is None else prob.to_matching(choice)


def best_matching(points, right=None) -> Matching:
    """Matching with the largest minimal d_c^2, by binary search over achievable values."""
    prob = _Problem(points, right)
    if prob.N == 1:
        return prob.to_matching(np.array([0]))
    vals = prob.values()
    lo, hi = 0, len(vals) - 1
    best = prob.solve(vals[0])
    # the smallest candidate value is always feasible
    assert best is not None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        sol = prob.solve(vals[mid])
        if sol is None:
            hi = mid - 1
        else:
            lo, best = mid, sol
    return prob.to_matching(best)


def brute_force_matching(points, right=None) -> float:
    """Best objective over all N! orbit permutations and 2^N signs (small N only)."""
    prob = _Problem(points, right)
    N = prob.N
    if N == 1:
        return math.inf
    S = np.array(list(itertools.product((1.0, -1.0), repeat=N)))
    SS = S[:, :, None] * S[:, None, :]
    iu = np.triu_indices(N, 1)
    best = -math.inf
    for perm in itertools.permutations(range(N)):
        p = list(perm)
        vals = 1.0 - SS[:, iu[0], iu[1]] * (prob.GL * prob.GR[np.ix_(p, p)])[iu]
        best = max(best, float(vals.min(axis=1).max()))
    return best
