import random

import pytest

from eflcolor.generators import uniform_near_regular
from eflcolor.nibble import StatMiss, nibble_color, pseudorandom_matching, semi_random_fill


@pytest.fixture(scope="module")
def H():
    return uniform_near_regular(600, 3, 30, 0.05, seed=1)


def test_semi_random_fill_is_proper(H):
    D = H.max_degree()
    busy = [0] * H.n
    got = semi_random_fill(H, list(range(H.m)), D, busy, random.Random(0))
    seen = set()
    for e, c in got.items():
        for v in H.edges[e]:
            assert (v, c) not in seen
            seen.add((v, c))
    assert len(got) > 0.5 * H.m


def test_pseudorandom_matching_fraction(H):
    r = pseudorandom_matching(H, 0.2, 0.1, seed=3, raise_on_miss=False)
    covered = set()
    for e in r.matching:
        assert not covered.intersection(H.edges[e])
        covered.update(H.edges[e])
    frac = 1 - len(covered) / H.n
    assert abs(frac - 0.2) <= 0.4
    assert r.attempts >= 1


def test_pseudorandom_matching_raises_on_impossible_window(H):
    with pytest.raises(StatMiss):
        pseudorandom_matching(H, 0.0, 1e-6, seed=1, retries=1)


def test_nibble_color_classes_are_matchings(H):
    D = H.max_degree()
    nb = nibble_color(H, list(range(H.m)), [0] * H.n, [[] for _ in range(D)], 0.1, 0.05, seed=2)
    assert len(nb.matchings) == D
    for M in nb.matchings:
        seen = set()
        for e in M:
            assert not seen.intersection(H.edges[e])
            seen.update(H.edges[e])
    placed = {e for M in nb.matchings for e in M}
    assert placed.isdisjoint(nb.leftover) and len(placed) + len(nb.leftover) == H.m
