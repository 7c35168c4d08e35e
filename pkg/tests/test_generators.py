from itertools import combinations

import pytest

from eflcolor.generators import (FamilySpec, InfeasibleParams, NotPrime, complete, degenerate, embed_uniform,
                                 generate, projective_plane, random_linear, uniform_near_regular)
from eflcolor.hypercore import build, volume


def pair_counts(H):
    cnt = {}
    for e in H.edges:
        for p in combinations(e, 2):
            cnt[p] = cnt.get(p, 0) + 1
    return cnt


@pytest.mark.parametrize("q", [2, 3, 5])
def test_projective_plane_covers_pairs_once(q):
    H = projective_plane(q)
    n = q * q + q + 1
    assert H.n == n and H.m == n
    assert all(len(e) == q + 1 for e in H.edges)
    cnt = pair_counts(H)
    assert len(cnt) == n * (n - 1) // 2 and set(cnt.values()) == {1}
    assert volume(H) == pytest.approx(1.0)


def test_projective_plane_needs_prime():
    with pytest.raises(NotPrime):
        projective_plane(4)


def test_degenerate_and_complete():
    H = degenerate(6)
    assert sorted(len(e) for e in H.edges) == [2, 2, 2, 2, 2, 5]
    assert H.degrees()[0] == 5
    K = complete(5)
    assert K.m == 10


def test_generate_dispatch():
    assert generate(FamilySpec("projective-plane", {"q": 2})).m == 7
    with pytest.raises(InfeasibleParams):
        generate(FamilySpec("nonsense"))


def test_uniform_near_regular_window():
    H = uniform_near_regular(2000, 3, 60, 0.05, seed=1)
    deg = H.degrees()
    assert min(deg) >= 57 and max(deg) <= 63
    assert all(len(e) == 3 for e in H.edges)
    build(H.n, H.edges)


def test_uniform_near_regular_edge_cases():
    assert uniform_near_regular(10, 3, 0, 0.1, seed=0).m == 0
    assert uniform_near_regular(6, 2, 5, 0.1, seed=0) == complete(6)


def test_random_linear_is_linear_and_deterministic():
    a = random_linear(60, [2, 3, 4], 80, seed=3)
    b = random_linear(60, [2, 3, 4], 80, seed=3)
    assert a == b
    assert max(pair_counts(a).values()) == 1


def test_embed_single_edge():
    H = build(3, [(0, 1, 2)])
    emb = embed_uniform(H, 3, 4, 4)
    assert all(len(e) == 3 for e in emb.H.edges)
    assert (0, 1, 2) in emb.H.edges


def test_embed_random_uniform_clauses():
    H = uniform_near_regular(60, 3, 8, 0.3, seed=2)
    D, C = 20, 6
    emb = embed_uniform(H, 3, D, C)
    out = emb.H
    # uniform; H survives on the original vertices; degree window
    assert all(len(e) == 3 for e in out.edges)
    kept = {tuple(v for v in e if v < H.n) for e in out.edges}
    assert all(e in kept for e in H.edges)
    assert all(D - C <= d <= D for d in out.degrees())
    assert max(pair_counts(out).values()) == 1


def test_embed_keeps_full_degree_vertices():
    H = build(5, [(0, 1), (0, 2), (0, 3)])
    emb = embed_uniform(H, 2, 3, 1)
    assert emb.H.degrees()[0] == 3
