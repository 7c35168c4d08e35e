import pytest

from eflcolor.generators import complete, degenerate, projective_plane, random_linear
from eflcolor.hypercore import build
from eflcolor.ordering import (EdgeOrdering, IterCapExceeded, audit_fwd_inequalities, fwddeg, fwddeg_all,
                               reorder, size_order, window_postconditions)


def test_ordering_must_be_permutation():
    with pytest.raises(ValueError):
        EdgeOrdering([0, 0, 1])
    o = EdgeOrdering([2, 0, 1])
    assert o.pos == [1, 2, 0] and o.precedes(2, 1)


def test_size_order_breaks_ties_by_index():
    H = build(8, [{0, 1}, {2, 3, 4}, {5, 6}, {0, 2, 5, 7}])
    assert size_order(H).perm == [3, 1, 0, 2]


def test_forward_degrees_match_definition():
    H = random_linear(60, [2, 3, 4], 150, seed=3)
    o = size_order(H)
    fwd = fwddeg_all(H, o)
    assert fwd == [fwddeg(H, o, e) for e in range(H.m)]


def test_reorder_good_on_sparse_instance():
    H = random_linear(80, [2, 3], 60, seed=1)
    out = reorder(H, 0.1, 2)
    assert out.good
    fwd = fwddeg_all(H, out.ordering)
    assert max(fwd) <= 0.9 * H.n


def test_reorder_window_on_fano():
    H = projective_plane(2)
    out = reorder(H, 0.5, 2)
    assert out.kind in ("good", "window")
    if not out.good:
        assert window_postconditions(H, out, 0.5)


def test_reorder_window_on_complete_graph():
    H = complete(12)
    out = reorder(H, 0.05, 2)
    assert not out.good
    assert out.e_star in out.window
    assert window_postconditions(H, out, 0.05)


def test_reorder_rejects_bad_parameters():
    with pytest.raises(ValueError):
        reorder(complete(4), 1.5, 2)
    with pytest.raises(ValueError):
        reorder(complete(4), 0.1, 0.5)


def test_iter_cap():
    with pytest.raises(IterCapExceeded) as info:
        reorder(random_linear(80, [2, 3], 200, seed=2), 0.5, 2, iter_cap=1)
    assert len(info.value.ordering.perm) == 200


def test_audit_first_inequality_on_size_order():
    for seed in range(5):
        H = random_linear(100, [3, 4, 6, 9], 250, seed=seed)
        rows = audit_fwd_inequalities(H, size_order(H), 0.2, 0.5, 0.1)
        assert rows and all(r.ok_i for r in rows)


def test_audit_skips_small_edges():
    H = degenerate(7)
    rows = audit_fwd_inequalities(H, size_order(H), 0.1, 1.0, 0.1)
    assert [r.size for r in rows] == [6]
