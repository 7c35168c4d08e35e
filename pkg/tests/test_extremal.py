import pytest

from eflcolor.extremal import (PairNotDisjoint, PairingPlan, PlanTooSmall, extremal_color,
                               greedy_complement_matching, ladder_k, max_complement_matching, pair_color,
                               useful_chain, useful_pair)
from eflcolor.generators import projective_plane, random_linear
from eflcolor.hypercore import build, line_graph, verify_coloring


def _two_triangles_plus():
    # 6 vertices, 8 edges: two disjoint triangles plus two crossing edges
    return build(6, [{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {1, 4}])


def test_pair_color_uses_m_minus_pairs():
    H = _two_triangles_plus()
    col = pair_color(H, PairingPlan([(0, 3), (1, 5)]))
    assert col.used == 6 and verify_coloring(H, col) is None


def test_pair_color_rejects_bad_plans():
    H = _two_triangles_plus()
    with pytest.raises(PairNotDisjoint):
        pair_color(H, PairingPlan([(0, 1), (3, 4)]))
    with pytest.raises(PairNotDisjoint):
        pair_color(H, PairingPlan([(0, 3), (0, 4)]))
    with pytest.raises(PlanTooSmall):
        pair_color(H, PairingPlan([(0, 3)]))


def test_complement_matchings_are_disjoint_pairs():
    H = random_linear(12, [2, 3], 16, seed=2)
    for M in (greedy_complement_matching(H), max_complement_matching(H)):
        used = [x for p in M for x in p]
        assert len(used) == len(set(used))
        assert all(set(H.edges[a]).isdisjoint(H.edges[b]) for a, b in M)
    assert len(max_complement_matching(H)) >= len(greedy_complement_matching(H))


def test_useful_pair():
    H = _two_triangles_plus()
    assert not useful_pair(H, 0, 3)  # disjoint
    assert useful_pair(H, 0, 1)
    # two Fano lines share exactly n-2 = 5 neighbouring lines
    assert useful_pair(projective_plane(2), 0, 1)


def test_ladder_k():
    assert ladder_k(7) == 2 and ladder_k(13) == 3 and ladder_k(31) == 5


def test_useful_chain_induces_matching():
    H = _two_triangles_plus()
    adj = line_graph(H)
    ch = useful_chain(H, 1, adj)
    assert len(ch.edges) == 2 and ch.edges[1] in adj[ch.edges[0]]
    (z, partner), = ch.matching
    assert set(H.edges[z]).isdisjoint(H.edges[partner])


@pytest.mark.parametrize("q", [2, 3, 5])
def test_extremal_on_planes(q):
    H = projective_plane(q)
    col = extremal_color(H, 0.01)
    assert col.used == H.n and verify_coloring(H, col) is None


def test_extremal_classes_of_size_two():
    H = _two_triangles_plus()
    col = extremal_color(H, 0.01)
    assert verify_coloring(H, col) is None and col.used <= H.n
    assert max(len(v) for v in col.classes().values()) <= 2
