import random
from itertools import combinations

import pytest

from eflcolor.matching import (Infeasible, NoMatching, OddOrder, PreconditionUnmet, crossing_match,
                               dense_perfect_match, gf_factor, hall_bipartite, min_deg_bipartite_match)


def test_hall_covers_or_returns_violator():
    res = hall_bipartite([0, 1, 2], {0: ["a", "b"], 1: ["a"], 2: ["b", "c"]})
    assert res.covers and len(set(res.matching.values())) == 3
    res = hall_bipartite([0, 1, 2], {0: ["a"], 1: ["a"], 2: ["b"]})
    assert not res.covers
    nb = {b for a in res.violator for b in {0: ["a"], 1: ["a"], 2: ["b"]}[a]}
    assert len(nb) < len(res.violator)


def test_crossing_match_routes():
    A = list(range(10))
    B = list(range(100, 130))
    adj = {a: B for a in A}
    assert crossing_match(A, B, adj, 0.5, 0.5, n=40).route == "greedy"
    assert crossing_match(A, B, adj, 0.5, 0.01, n=40).route == "hall"
    with pytest.raises(NoMatching):
        crossing_match([0, 1], [9], {0: [9], 1: [9]}, 0.5, 0.01, n=3)


def test_dense_perfect_match():
    verts = list(range(30))
    edges = [(u, v) for u, v in combinations(verts, 2) if (u + v) % 3]
    res = dense_perfect_match(verts, edges, 0.5, 0.1, seed=1)
    assert sorted(x for p in res.pairs for x in p) == verts
    es = {frozenset(e) for e in edges}
    assert all(frozenset(p) in es for p in res.pairs)
    with pytest.raises(OddOrder):
        dense_perfect_match([0, 1, 2], [(0, 1)], 0.5, 0.1)


def test_min_deg_bipartite_match():
    A, B = [0, 1, 2], ["x", "y", "z"]
    m = min_deg_bipartite_match(A, B, {0: ["x", "y"], 1: ["y", "z"], 2: ["x", "z"]})
    assert sorted(m) == A and len(set(m.values())) == 3
    with pytest.raises(PreconditionUnmet):
        min_deg_bipartite_match(A, B, {0: ["x"], 1: ["x"], 2: ["x"]})


def _check(verts, edges, g, f, out):
    deg = {v: 0 for v in verts}
    for i in out:
        for v in edges[i]:
            deg[v] += 1
    return all(g[v] <= deg[v] <= f[v] for v in verts)


def test_gf_factor_odd_cycle_and_bipartite():
    verts = list(range(5))
    cyc = [(i, (i + 1) % 5) for i in range(5)]
    g = {v: 1 for v in verts}
    # a perfect matching is impossible on five vertices
    with pytest.raises(Infeasible):
        gf_factor(verts, cyc, g, g)
    f = {v: 2 for v in verts}
    assert _check(verts, cyc, g, f, gf_factor(verts, cyc, g, f))
    sq = [(0, 1), (1, 2), (2, 3), (3, 0)]
    g = {v: 1 for v in range(4)}
    out = gf_factor(range(4), sq, g, g)
    assert len(out) == 2 and _check(range(4), sq, g, g, out)


def test_gf_factor_random_feasible():
    rng = random.Random(3)
    for _ in range(30):
        n = rng.randint(4, 9)
        edges = [e for e in combinations(range(n), 2) if rng.random() < 0.5]
        deg = {v: sum(v in e for e in edges) for v in range(n)}
        g = {v: rng.randint(0, deg[v] // 2) for v in range(n)}
        f = {v: max(g[v], deg[v] - rng.randint(0, 1)) for v in range(n)}
        try:
            out = gf_factor(range(n), edges, g, f)
        except Infeasible:
            continue
        assert _check(range(n), edges, g, f, out)


def test_gf_rejects_bad_bounds():
    with pytest.raises(ValueError):
        gf_factor([0, 1], [(0, 1)], {0: 2, 1: 0}, {0: 1, 1: 1})
