import json

import pytest

from eflcolor.cli import run


def _gen(tmp_path, *args):
    out = tmp_path / "h.lhg"
    assert run(["gen", *args, "--out", str(out)]) == 0
    return out


def test_gen_color_verify(tmp_path):
    H = _gen(tmp_path, "--family", "projective-plane", "--q", "2")
    col = tmp_path / "c.json"
    rep = tmp_path / "r.json"
    assert run(["color", "--in", str(H), "--seed", "1", "--out", str(col), "--report", str(rep)]) == 0
    assert run(["verify", "--in", str(H), "--coloring", str(col)]) == 0
    assert json.loads(rep.read_text())["colors"] == 7


def test_verify_rejects_improper(tmp_path):
    H = _gen(tmp_path, "--family", "projective-plane", "--q", "2")
    col = tmp_path / "c.json"
    run(["color", "--in", str(H), "--seed", "1", "--out", str(col)])
    data = json.loads(col.read_text())
    key = "colors" if "colors" in data else next(iter(data))
    data[key] = [0] * len(data[key])
    col.write_text(json.dumps(data))
    assert run(["verify", "--in", str(H), "--coloring", str(col)]) == 1


def test_usage_errors(tmp_path):
    H = _gen(tmp_path, "--family", "complete", "--n", "5")
    assert run(["color", "--in", str(H)]) == 2
    assert run(["gen", "--family", "random-linear", "--n", "10", "--m", "5"]) == 2
    assert run(["nonsense"]) == 2


@pytest.mark.parametrize("algo", ["greedy", "dsatur", "extremal", "exact"])
def test_other_algos(tmp_path, algo):
    H = _gen(tmp_path, "--family", "complete", "--n", "5")
    col = tmp_path / "c.json"
    assert run(["color", "--algo", algo, "--in", str(H), "--seed", "0", "--out", str(col)]) == 0
    assert run(["verify", "--in", str(H), "--coloring", str(col)]) == 0


def test_exact_and_order(tmp_path, capsys):
    H = _gen(tmp_path, "--family", "projective-plane", "--q", "2")
    out = tmp_path / "x.json"
    assert run(["exact", "--in", str(H), "--out", str(out)]) == 0
    assert "7" in out.read_text()
    assert run(["order", "--in", str(H), "--out", str(tmp_path / "o.json")]) == 0


def test_byte_identical_outputs(tmp_path):
    H = _gen(tmp_path, "--family", "random-linear", "--n", "80", "--m", "150", "--seed", "3")
    H2 = _gen(tmp_path / "..", "--family", "random-linear", "--n", "80", "--m", "150", "--seed", "3")
    assert H.read_bytes() == H2.read_bytes()
    outs = []
    for i in range(2):
        c, r = tmp_path / f"c{i}.json", tmp_path / f"r{i}.json"
        run(["color", "--in", str(H), "--seed", "5", "--out", str(c), "--report", str(r)])
        outs.append((c.read_bytes(), r.read_bytes()))
    assert outs[0] == outs[1]


def test_bench_csv(tmp_path):
    csv = tmp_path / "b.csv"
    args = ["bench", "--families", "pg,complete", "--algos", "pipeline,dsatur", "--seeds", "1",
            "--seed", "0", "--no-timing", "--csv", str(csv)]
    assert run(args) == 0
    first = csv.read_bytes()
    assert first.decode().splitlines()[0] == "family,n,m,algo,seed,colors,proper,wall_ms"
    run(args)
    assert csv.read_bytes() == first
