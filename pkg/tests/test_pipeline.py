import pytest

from eflcolor.generators import complete, degenerate, projective_plane, random_linear, uniform_near_regular
from eflcolor.hypercore import Hierarchy, build, verify_coloring
from eflcolor.pipeline import PreconditionFailed, efl_color, first_fit, stability_color, sublinear_color


@pytest.mark.parametrize("H", [projective_plane(2), projective_plane(3), complete(5), complete(7),
                               degenerate(6), degenerate(9)], ids=["PG2", "PG3", "K5", "K7", "deg6", "deg9"])
def test_tight_families_use_n_colors(H):
    col, rep = efl_color(H, seed=0)
    assert rep.verified and verify_coloring(H, col) is None
    assert col.used == H.n and rep.checks["within_n"]


def test_empty_and_singletons():
    col, rep = efl_color(build(4, []))
    assert col.colors == []
    H = build(4, [{0}, {1}, {0, 1}, {2, 3}])
    col, rep = efl_color(H)
    assert verify_coloring(H, col) is None and col.used <= 4


def test_random_linear_is_proper_and_reported():
    H = random_linear(300, [2, 3, 4, 8], 1200, seed=3)
    col, rep = efl_color(H, seed=1)
    assert verify_coloring(H, col) is None
    d = rep.as_dict()
    assert d["colors"] == col.used and d["type_tag"] in ("A1", "A2", "B")
    assert d["steps"]


def test_uniform_instance_is_proper():
    H = uniform_near_regular(400, 3, 20, 0.05, seed=2)
    col, rep = efl_color(H, seed=0)
    assert verify_coloring(H, col) is None


def test_determinism():
    H = random_linear(200, [2, 3, 5], 600, seed=9)
    a = efl_color(H, seed=4)
    b = efl_color(H, seed=4)
    assert a[0].colors == b[0].colors and a[1].as_dict() == b[1].as_dict()


def test_first_fit():
    H = build(4, [{0, 1}, {1, 2}, {2, 3}])
    colors = [None, 0, None]
    opened = first_fit(H, colors, [0, 2])
    assert colors == [1, 0, 1] and opened == 1


def test_stability_and_sublinear_preconditions():
    with pytest.raises(PreconditionFailed):
        stability_color(projective_plane(2), Hierarchy(), 0)
    with pytest.raises(PreconditionFailed):
        sublinear_color(projective_plane(2), 0.05, 0.5, 0)


def test_stability_on_sparse_instance():
    H = random_linear(400, [2, 3], 500, seed=1)
    col, info = stability_color(H, Hierarchy(), 0)
    assert verify_coloring(H, col) is None


def test_sublinear_on_sparse_instance():
    # eta = 0.5 keeps sizes 2, 3, 10 and 100 outside the excluded band (22, 89)
    H = random_linear(2000, {2: 5, 3: 2, 10: 1, 100: 0.05}, 1500, seed=1)
    col, info = sublinear_color(H, 0.5, 0.5, 0)
    assert verify_coloring(H, col) is None and info["colors"] == col.used
