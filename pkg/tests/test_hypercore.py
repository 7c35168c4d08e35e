from itertools import combinations, product

import pytest

from eflcolor.generators import complete, degenerate, projective_plane
from eflcolor.hypercore import (DuplicateEdge, EdgeColoring, Hierarchy, HierarchyError, LinearityViolation,
                                BadVertexId, build, classify, coverage, derived_views, dumps_coloring, dumps_lhg,
                                huge_edge_bound_holds, is_full, line_graph, loads_coloring, loads_lhg,
                                verify_coloring, volume, LinearHypergraph)


def test_build_triangle():
    H = build(3, [{0, 1}, {1, 2}, {0, 2}])
    assert H.m == 3 and H.degrees() == [2, 2, 2]


def test_build_rejects_two_shared_vertices():
    with pytest.raises(LinearityViolation):
        build(4, [{0, 1, 2}, {0, 1, 3}])


def test_build_rejects_duplicates_and_bad_ids():
    with pytest.raises(DuplicateEdge):
        build(4, [{0, 1}, {1, 0}])
    with pytest.raises(BadVertexId):
        build(3, [{0, 3}])


def test_fano_is_linear_by_brute_force():
    H = projective_plane(2)
    assert H.n == 7 and H.m == 7 and all(len(e) == 3 for e in H.edges)
    for e, f in combinations(H.edges, 2):
        assert len(set(e) & set(f)) <= 1
    build(7, H.edges)


def test_derived_views():
    v = derived_views(complete(5), 0.2)
    assert v.U == set(range(5))
    v = derived_views(projective_plane(2), 0.3)
    assert v.G == [] and v.U == set()
    # the centre of the degenerate plane is vertex 0 and has graph degree 5;
    # 5 < 0.9 * 6, so it only enters U once eps reaches 1/6
    assert derived_views(degenerate(6), 0.1).U == set()
    assert derived_views(degenerate(6), 0.2).U == {0}


def test_line_graph():
    adj = line_graph(projective_plane(2))
    assert all(adj[i] == set(range(7)) - {i} for i in range(7))
    assert line_graph(build(4, [{0, 1}, {2, 3}])) == [set(), set()]
    assert line_graph(build(3, [{0, 1}, {1, 2}])) == [{1}, {0}]


def test_volume():
    assert volume(projective_plane(2)) == 1.0
    assert volume(projective_plane(3)) == pytest.approx(13 * 6 / 78)
    H = build(10, [{0, 1, 2, 3}])
    assert volume(H) == pytest.approx(6 / 45)


def test_classify_sizes():
    hier = Hierarchy(delta=0.1, gamma2=0.2, rho2=0.3, eps2=0.4, sigma=0.09, rho1=0.08)
    H = LinearHypergraph(10000, (tuple(range(100)), (200, 201)))
    ec = classify(H, hier)
    assert ec.fpp_extremal == [True, False]
    assert ec.tags[1] == "small"
    assert ec.tags[0] == "medium"
    assert classify(LinearHypergraph(10000, (tuple(range(300)),)), hier).tags == ["large"]


def test_huge_edge_bound():
    # n=100: at most 4 edges of size >= 50 fit in a linear hypergraph
    H = build(100, [range(0, 50), range(49, 99)])
    assert huge_edge_bound_holds(H)
    big = sum(1 for e in H.edges if len(e) >= 50)
    assert big <= 4


def test_verify_coloring():
    H = projective_plane(2)
    assert verify_coloring(H, EdgeColoring(list(range(7)), 7)) is None
    for cols in product(range(6), repeat=7):
        if len(set(cols)) == 6:
            assert verify_coloring(H, EdgeColoring(list(cols), 6)) is not None
            break
    H2 = build(4, [{0, 1}, {2, 3}])
    assert verify_coloring(H2, EdgeColoring([0, 0], 1)) is None


def test_fano_has_no_six_coloring_exhaustive():
    # line graph is K7, so any 6 colors repeat on some pair
    H = projective_plane(2)
    for cols in product(range(6), repeat=4):
        full = list(cols) + [0, 1, 2]
        assert verify_coloring(H, EdgeColoring(full, 6)) is not None


def test_coverage_states():
    assert coverage([[(0, 1), (2, 3)]], {0, 1, 2}, set()).status == "perfect"
    rep = coverage([[(0, 1)]], {0, 1, 2}, {2})
    assert rep.status == "nearly-perfect" and rep.defects == {0: 2}
    assert coverage([[(0, 1)]], {0, 1, 2}, set()).status == "neither"


def test_is_full():
    assert is_full(complete(40), 0.2, 0.05).full
    assert not is_full(projective_plane(2), 0.2, 0.05).full
    assert not is_full(degenerate(100), 0.2, 0.01).full


def test_hierarchy_validation():
    Hierarchy().validate()
    with pytest.raises(HierarchyError):
        Hierarchy(beta=0.5).validate()


def test_round_trip_io():
    H = projective_plane(3)
    assert loads_lhg(dumps_lhg(H)) == H
    col = EdgeColoring(list(range(13)), 13)
    assert loads_coloring(dumps_coloring(col)).colors == col.colors
