import pytest

from eflcolor.absorb import (AbsorptionFailed, GraphView, absorb_batch, absorb_difficult, absorbable_batch,
                             certify_absorber, is_difficult, random_matchings, reservoir_family,
                             sample_reservoir, split_instance)
from eflcolor.generators import complete, degenerate
from eflcolor.hypercore import coverage, verify_coloring


def _is_matching(H, M):
    seen = set()
    for e in M:
        if seen.intersection(H.edges[e]):
            return False
        seen.update(H.edges[e])
    return True


def test_graph_view_on_complete_graph():
    view = GraphView(complete(30), 0.1)
    assert view.U == set(range(30)) and len(view.cross) == 435
    assert view.adj[0][1] in view.cross


def test_split_instance_is_linear():
    H = split_instance(60, 5, seed=1)
    for i, e in enumerate(H.edges):
        for f in H.edges[i + 1:]:
            assert len(set(e) & set(f)) <= 1


def test_random_matchings_are_disjoint():
    H = split_instance(200, 10, seed=2)
    Ms = random_matchings(H, 4, 0.1, set(range(50)), seed=3)
    assert all(_is_matching(H, M) for M in Ms)
    flat = [e for M in Ms for e in M]
    assert len(flat) == len(set(flat)) and not set(flat) & set(range(50))


def test_sample_reservoir_certificate():
    H = complete(120)
    res = sample_reservoir(H, 0.3, seed=1, xi=0.2, eps=0.1)
    view = GraphView(H, 0.1)
    assert res.edges <= view.cross
    assert 0.2 * 7140 < len(res) < 0.4 * 7140
    fam = reservoir_family(H, view, res.edges, view.U)
    cert = certify_absorber(res.edges, H, fam, 0.3, 0.2, 0.2, 0.1)
    assert cert.contained


@pytest.mark.parametrize("n,core", [(1000, 1000), (300, 8)])
def test_absorb_batch_reaches_expected_status(n, core):
    # on small cliques the reservoir is too thin around the few uncovered vertices
    H = complete(n) if core == n else split_instance(n, core, seed=4)
    ok = 0
    for s in range(5):
        b = absorbable_batch(H, 0.3, 0.05, 3, 0.1, s)
        try:
            r = absorb_batch(H, b.matchings, b.R, b.S, 0.3, 0.005, 0.1, 0.05, 0.01, seed=s)
        except AbsorptionFailed:
            continue
        assert all(_is_matching(H, M) for M in r.matchings)
        for M, old in zip(r.matchings, b.matchings):
            assert set(old) <= set(M) and set(M) - set(old) <= b.R
        ok += r.status == b.expect or r.status == "perfect"
    assert ok >= 4


def test_is_difficult_on_degenerate_plane():
    H = degenerate(9)
    big = max(range(H.m), key=lambda i: len(H.edges[i]))
    assert is_difficult(H, [big], 0.1)


@pytest.mark.parametrize("n", [6, 8, 9, 30])
def test_absorb_difficult_colors_degenerate(n):
    H = degenerate(n)
    big = max(range(H.m), key=lambda i: len(H.edges[i]))
    out = absorb_difficult(H, big)
    if out.branch == "b":
        assert verify_coloring(H, out.coloring) is None and out.coloring.used <= n
    else:
        assert big in out.matching and _is_matching(H, out.matching)
