"""Embedding dimension, sphere coordinates and short Hamiltonian tours."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bounds import embedding_dim
from .core import Packing, pairwise_distances
from .errors import GrassPackError, NegativeEigenvalueWarning


@dataclass(frozen=True)
class EmbeddingReport:
    D_found: int
    D_theory: int
    radius: float
    gram_eigenvalues: list
    tol: float
    # largest |distance from centroid - radius|, a diagnostic only
    centroid_spread: float = float("nan")


def _centered_gram(D: np.ndarray) -> np.ndarray:
    N = D.shape[0]
    J = np.eye(N) - np.full((N, N), 1.0 / N)
    return -0.5 * J @ (D * D) @ J


def embedding_dimension(packing: Packing, tol: float = 1e-8, metric: str = "chordal") -> EmbeddingReport:
    """Smallest Euclidean dimension realising the packing's distances.

    Classical scaling: double-centre the squared distance matrix and count
    eigenvalues above ``tol * max``.  A clearly negative eigenvalue means no
    Euclidean embedding exists and triggers :class:`NegativeEigenvalueWarning`.
    The reported radius is ``sqrt(n (m - n) / (2 m))``, the distance of every
    plane from the sphere centre in chordal units.
    """
    if packing.N < 2:
        raise GrassPackError("need at least two planes")
    D = pairwise_distances(packing, metric)
    B = _centered_gram(D)
    w = np.linalg.eigvalsh((B + B.T) / 2)[::-1]
    top = max(w[0], 0.0)
    if top > 0 and w[-1] < -tol * top:
        warnings.warn(f"double-centred Gram matrix has eigenvalue {w[-1]:.3g}; "
                      f"the {metric} distances are not Euclidean", NegativeEigenvalueWarning,
                      stacklevel=2)
    D_found = int(np.sum(w > tol * top)) if top > 0 else 0
    m, n = packing.m, packing.n
    radius = math.sqrt(n * (m - n) / (2 * m))
    pts = embed_points(packing)
    spread = float(np.max(np.abs(np.linalg.norm(pts - pts.mean(axis=0), axis=1) - radius)))
    return EmbeddingReport(D_found, embedding_dim(m), radius, w.tolist(), tol, spread)


def traceless_basis(m: int) -> np.ndarray:
    """Orthonormal (Frobenius) basis of the traceless symmetric m x m matrices.

    Shape ``(D, m, m)`` with ``D = (m - 1)(m + 2) / 2``: first the off-diagonal
    units ``(E_ij + E_ji) / sqrt 2``, then diagonal Helmert-type matrices.
    """
    mats = []
    for i in range(m):
        for j in range(i + 1, m):
            E = np.zeros((m, m))
            E[i, j] = E[j, i] = 1 / math.sqrt(2)
            mats.append(E)
    for k in range(1, m):
        d = np.zeros(m)
        d[:k] = 1
        d[k] = -k
        mats.append(np.diag(d / np.linalg.norm(d)))
    return np.array(mats).reshape(-1, m, m)


def embed_points(packing: Packing) -> np.ndarray:
    """Coordinates in R^D of the de-traced projection matrices, scaled by 1/sqrt 2.

    Euclidean distances between the points equal the chordal distances, and
    every point lies at ``sqrt(n (m - n) / (2 m))`` from the origin.
    """
    G = packing.gens
    m, n = packing.m, packing.n
    P = np.einsum("kam,kab->kmb", G, G) - (n / m) * np.eye(m)
    basis = traceless_basis(m)
    return np.einsum("kab,dab->kd", P, basis) / math.sqrt(2)


@dataclass(frozen=True)
class Tour:
    order: tuple
    total_length: float
    min_edge: float
    max_edge: float


def _cycle_length(order, D) -> float:
    return float(sum(D[a, b] for a, b in zip(order, order[1:] + order[:1])))


def _make_tour(order, D) -> Tour:
    order = list(order)
    edges = [D[a, b] for a, b in zip(order, order[1:] + order[:1])]
    return Tour(tuple(int(i) for i in order), float(sum(edges)), float(min(edges)), float(max(edges)))


def nearest_neighbour(D: np.ndarray) -> list:
    N = len(D)
    order = [0]
    left = set(range(1, N))
    while left:
        here = order[-1]
        nxt = min(left, key=lambda j: (D[here, j], j))
        order.append(nxt)
        left.remove(nxt)
    return order


def two_opt(order, D: np.ndarray, eps: float = 1e-12) -> list:
    """Reverse segments until no exchange shortens the cycle by more than ``eps``."""
    order = list(order)
    N = len(order)
    improved = True
    while improved:
        improved = False
        for i in range(N - 1):
            for j in range(i + 2, N if i > 0 else N - 1):
                a, b = order[i], order[i + 1]
                c, d = order[j], order[(j + 1) % N]
                delta = D[a, c] + D[b, d] - D[a, b] - D[c, d]
                if delta < -eps:
                    order[i + 1:j + 1] = order[i + 1:j + 1][::-1]
                    improved = True
    return order


def tour(packing: Packing) -> Tour:
    """Short closed tour through all planes under d_c (nearest neighbour + 2-opt)."""
    if packing.N < 3:
        raise GrassPackError("a tour needs at least three planes")
    D = pairwise_distances(packing, "chordal")
    return _make_tour(two_opt(nearest_neighbour(D), D), D)


def tour_from_order(packing: Packing, order) -> Tour:
    """Tour statistics for a given visiting order."""
    order = list(order)
    if sorted(order) != list(range(packing.N)):
        raise GrassPackError("order is not a permutation of the planes")
    return _make_tour(order, pairwise_distances(packing, "chordal"))
