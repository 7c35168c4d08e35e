from hypothesis import given, settings, strategies as st

from eflcolor.finish import exact_chromatic_index, vizing
from eflcolor.greedy import dsatur_line
from eflcolor.hypercore import build, verify_coloring
from eflcolor.pipeline import efl_color


@st.composite
def linear_hypergraphs(draw, max_n=12, max_size=4):
    n = draw(st.integers(2, max_n))
    pairs = set()
    edges = []
    for e in draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=max_size), max_size=3 * n)):
        ps = {(a, b) for a in e for b in e if a < b}
        if ps & pairs or (len(e) == 1 and tuple(e) in edges):
            continue
        pairs |= ps
        edges.append(tuple(sorted(e)))
    return build(n, edges)


@st.composite
def simple_graphs(draw):
    n = draw(st.integers(2, 16))
    edges = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                         .filter(lambda p: p[0] < p[1]), max_size=60))
    return n, sorted(edges)


@settings(max_examples=60, deadline=None)
@given(linear_hypergraphs())
def test_pipeline_is_proper(H):
    col, rep = efl_color(H, seed=1)
    assert verify_coloring(H, col) is None and rep.verified


@settings(max_examples=60, deadline=None)
@given(linear_hypergraphs(max_n=7, max_size=3))
def test_exact_bound_and_dsatur(H):
    chi, col = exact_chromatic_index(H, limit=None)
    assert chi <= max(H.n, 1) and verify_coloring(H, col) is None
    assert dsatur_line(H).used >= chi


@settings(max_examples=100, deadline=None)
@given(simple_graphs())
def test_vizing_bound(g):
    n, edges = g
    col = vizing(n, edges)
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    assert col.used <= max(deg, default=0) + 1
    seen = set()
    for (u, v), c in zip(edges, col.colors):
        assert (u, c) not in seen and (v, c) not in seen
        seen |= {(u, c), (v, c)}
