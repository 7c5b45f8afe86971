import itertools
import math

import numpy as np
import pytest
from hypothesis import given

from grasspack.analysis import (
    embed_points,
    embedding_dimension,
    nearest_neighbour,
    tour,
    tour_from_order,
    traceless_basis,
    two_opt,
)
from grasspack.bounds import embedding_dim
from grasspack.constructions import decagonal10_g42, planes18_g42, planes70_g84
from grasspack.core import Packing, complement, pairwise_angles, pairwise_distances, random_plane
from grasspack.errors import GrassPackError, NegativeEigenvalueWarning

from strategies import packings


def test_traceless_basis_is_orthonormal():
    for m in (2, 3, 5):
        B = traceless_basis(m)
        assert B.shape == (embedding_dim(m), m, m)
        G = np.einsum("iab,jab->ij", B, B)
        assert np.allclose(G, np.eye(len(B)))
        assert np.allclose(np.trace(B, axis1=1, axis2=2), 0)
        assert np.allclose(B, np.swapaxes(B, 1, 2))


def test_embedding_18_planes():
    rep = embedding_dimension(planes18_g42())
    assert rep.D_found == 9 and rep.D_theory == 9
    assert rep.radius == pytest.approx(math.sqrt(0.5))


def test_18_planes_form_an_orthoplex():
    X = embed_points(planes18_g42())
    D = np.linalg.norm(X[:, None] - X[None], axis=2)
    r = math.sqrt(0.5)
    # each point has exactly one antipode; all other pairs are equidistant
    for i in range(18):
        far = np.flatnonzero(np.abs(D[i] - 2 * r) < 1e-9)
        assert len(far) == 1
        rest = [j for j in range(18) if j != i and j != far[0]]
        assert np.allclose(D[i, rest], 1.0)


def test_embedding_decagonal():
    pk = decagonal10_g42()
    rep = embedding_dimension(pk)
    assert rep.D_found == 9
    D = pairwise_distances(pk)[np.triu_indices(10, 1)]
    assert D.max() - D.min() < 1e-8


def test_geodesic_warns():
    with pytest.warns(NegativeEigenvalueWarning):
        embedding_dimension(planes18_g42(), metric="geodesic")


def test_complements_are_antipodal():
    rng = np.random.default_rng(0)
    P = random_plane(6, 3, rng)
    X = embed_points(Packing((P, complement(P))))
    assert np.allclose(X[0], -X[1])


def test_single_plane_radius():
    P = random_plane(5, 2, np.random.default_rng(1))
    X = embed_points(Packing((P,)))
    assert np.linalg.norm(X[0]) == pytest.approx(math.sqrt(2 * 3 / 10))


@given(packings(max_N=8))
def test_embed_points_isometric(pk):
    X = embed_points(pk)
    E = np.linalg.norm(X[:, None] - X[None], axis=2)
    assert np.abs(E - pairwise_distances(pk)).max() < 1e-10
    r = math.sqrt(pk.n * (pk.m - pk.n) / (2 * pk.m))
    assert np.abs(np.linalg.norm(X, axis=1) - r).max() < 1e-10


@given(packings(max_N=12))
def test_embedding_dimension_bounded(pk):
    assert embedding_dimension(pk).D_found <= embedding_dim(pk.m)


def test_embedding_needs_two():
    with pytest.raises(GrassPackError):
        embedding_dimension(Packing((random_plane(3, 1),)))


def test_70_planes_embedding():
    assert embedding_dimension(planes70_g84()).D_found == 35


# -- tours ------------------------------------------------------------------------

def fan(N):
    ang = np.arange(N) * np.pi / N
    return Packing.from_gens([[[math.cos(a), math.sin(a)]] for a in ang])


def brute_force_tour(D):
    N = len(D)
    best = math.inf
    for rest in itertools.permutations(range(1, N)):
        cyc = (0,) + rest
        best = min(best, sum(D[a, b] for a, b in zip(cyc, cyc[1:] + cyc[:1])))
    return best


def test_tour_three():
    pk = Packing(tuple(random_plane(4, 2, np.random.default_rng(k)) for k in range(3)))
    t = tour(pk)
    D = pairwise_distances(pk)
    assert t.total_length == pytest.approx(D[0, 1] + D[1, 2] + D[0, 2])


def test_tour_fan_is_optimal():
    pk = fan(5)
    t = tour(pk)
    assert t.total_length == pytest.approx(brute_force_tour(pairwise_distances(pk)), abs=1e-12)


def test_tour_random_small_close_to_optimal():
    rng = np.random.default_rng(3)
    for _ in range(5):
        pk = Packing(tuple(random_plane(4, 2, rng) for _ in range(7)))
        D = pairwise_distances(pk)
        t = tour(pk)
        assert sorted(t.order) == list(range(7))
        assert t.total_length >= brute_force_tour(D) - 1e-12
        assert t.total_length <= _length(nearest_neighbour(D), D) + 1e-12


def _length(order, D):
    return sum(D[a, b] for a, b in zip(order, order[1:] + order[:1]))


def test_two_opt_never_longer():
    rng = np.random.default_rng(4)
    pk = Packing(tuple(random_plane(5, 2, rng) for _ in range(15)))
    D = pairwise_distances(pk)
    start = list(rng.permutation(15))
    assert _length(two_opt(start, D), D) <= _length(start, D) + 1e-12


def test_18_plane_tour_vs_adjacency_cycle():
    pk = planes18_g42()
    A = pairwise_angles(pk.gens)
    q = math.pi / 4
    adj = np.all(np.abs(A - q) < 1e-9, axis=2)
    # find a Hamiltonian cycle in the pi/4, pi/4 graph by depth-first search
    N = pk.N

    def extend(path, seen):
        if len(path) == N:
            return path if adj[path[-1], path[0]] else None
        for j in np.flatnonzero(adj[path[-1]]):
            if j not in seen:
                got = extend(path + [int(j)], seen | {int(j)})
                if got:
                    return got
        return None

    cyc = extend([0], {0})
    assert cyc is not None
    ref = tour_from_order(pk, cyc)
    assert ref.max_edge == pytest.approx(1.0)
    assert tour(pk).total_length <= ref.total_length + 1e-12


def test_tour_needs_three():
    with pytest.raises(GrassPackError):
        tour(fan(2))
    with pytest.raises(GrassPackError):
        tour_from_order(fan(4), [0, 1, 1, 2])
