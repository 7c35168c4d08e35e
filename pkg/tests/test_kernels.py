import random

import pytest

from eflcolor import _pykernels, kernels
from eflcolor.generators import complete, projective_plane, random_linear
from eflcolor.hypercore import line_graph

try:
    from eflcolor import _kernels
except ImportError:
    _kernels = None

needs_ext = pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")


def _proper(adj, cols):
    return all(cols[a] != cols[b] for a in range(len(adj)) for b in adj[a])


@pytest.mark.parametrize("impl", [_pykernels, _kernels], ids=["python", "cython"])
def test_dsatur_is_proper(impl):
    if impl is None:
        pytest.skip("compiled kernels not built")
    adj = line_graph(random_linear(120, [2, 3, 4], 300, seed=1))
    assert _proper(adj, kernels.dsatur(adj, impl))


@pytest.mark.parametrize("impl", [_pykernels, _kernels], ids=["python", "cython"])
def test_color_search_fano(impl):
    if impl is None:
        pytest.skip("compiled kernels not built")
    adj = line_graph(projective_plane(2))
    assert kernels.color_search(adj, 6, impl=impl)[0] == 0
    status, cols = kernels.color_search(adj, 7, impl=impl)
    assert status == 1 and _proper(adj, cols)


def test_color_search_node_limit():
    adj = line_graph(complete(9))
    assert kernels.color_search(adj, 8, node_limit=5, impl=_pykernels)[0] == -1


@needs_ext
def test_backends_agree():
    rng = random.Random(0)
    for seed in range(10):
        H = random_linear(50, [2, 3], 80, seed=seed)
        adj = line_graph(H)
        pos = list(range(H.m))
        rng.shuffle(pos)
        assert kernels.forward_degrees(adj, pos, _pykernels) == kernels.forward_degrees(adj, pos, _kernels)
        assert kernels.dsatur(adj, _pykernels) == kernels.dsatur(adj, _kernels)
    adj = line_graph(complete(6))
    for k in (4, 5):
        assert kernels.color_search(adj, k, impl=_pykernels) == kernels.color_search(adj, k, impl=_kernels)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
