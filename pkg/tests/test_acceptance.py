"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Oracles here are written independently of the code under test: properness,
forbidden colors and degree bounds are re-checked from scratch, and the
exhaustive searches for Delta-colorability and (g,f)-factors are plain
backtracking in this file.
"""
import math
import os
import random
import subprocess
import sys
import time
from itertools import combinations

import pytest

from eflcolor.absorb import AbsorptionFailed, absorb_batch, absorbable_batch, split_instance
from eflcolor.cli import run
from eflcolor.extremal import max_complement_matching, PairingPlan, pair_color
from eflcolor.finish import exact_chromatic_index, hall_finish, vizing
from eflcolor.generators import (DegreeSpreadUnreachable, complete, degenerate, projective_plane,
                                 random_linear, uniform_near_regular)
from eflcolor.hypercore import LinearHypergraph, coverage
from eflcolor.matching import Infeasible, gf_factor
from eflcolor.nibble import pseudorandom_matching
from eflcolor.ordering import audit_fwd_inequalities, reorder, size_order
from eflcolor.pipeline import efl_color

pytestmark = pytest.mark.acceptance


def report(capsys, label, ok, detail):
    with capsys.disabled():
        print(f"\n[{label}] {'PASS' if ok else 'FAIL'}: {detail}")


# independent checkers

def proper(edges, colors):
    seen = set()
    for e, c in zip(edges, colors):
        if c is None:
            return False
        for v in e:
            if (v, c) in seen:
                return False
            seen.add((v, c))
    return True


def pairwise_intersecting(edges):
    return all(set(a) & set(b) for a, b in combinations(edges, 2))


def matching_number(edges):
    best = 0

    def rec(i, used, size):
        nonlocal best
        best = max(best, size)
        if i == len(edges) or size + len(edges) - i <= best:
            return
        if not used.intersection(edges[i]):
            rec(i + 1, used | set(edges[i]), size + 1)
        rec(i + 1, used, size)

    rec(0, frozenset(), 0)
    return best


def delta_colorable(n, edges, k):
    """Backtracking: can the graph be edge-colored with k colors?"""
    # each color class is a matching, so k colors hold at most k*floor(n/2) edges
    if len(edges) > k * (n // 2):
        return False
    order = sorted(range(len(edges)), key=lambda i: edges[i])
    used = [set() for _ in range(n)]

    def rec(j, top):
        # colors above top are interchangeable, so only top itself is tried
        if j == len(order):
            return True
        u, v = edges[order[j]]
        for c in range(min(k, top + 1)):
            if c not in used[u] and c not in used[v]:
                used[u].add(c)
                used[v].add(c)
                if rec(j + 1, max(top, c + 1)):
                    return True
                used[u].discard(c)
                used[v].discard(c)
        return False

    return rec(0, 0)


def gf_exists(n, edges, g, f):
    """Backtracking over edges with degree pruning."""
    deg = [0] * n
    left = [0] * n
    for u, v in edges:
        left[u] += 1
        left[v] += 1

    def rec(i):
        if i == len(edges):
            return all(g[v] <= deg[v] for v in range(n))
        u, v = edges[i]
        left[u] -= 1
        left[v] -= 1
        ok = False
        if deg[u] < f[u] and deg[v] < f[v]:
            deg[u] += 1
            deg[v] += 1
            ok = rec(i + 1)
            deg[u] -= 1
            deg[v] -= 1
        if not ok and deg[u] + left[u] >= g[u] and deg[v] + left[v] >= g[v]:
            ok = rec(i + 1)
        left[u] += 1
        left[v] += 1
        return ok

    return rec(0)


# criteria

def test_c1_tight_families(capsys):
    t = time.time()
    fams = [("PG(2)", projective_plane(2)), ("PG(3)", projective_plane(3)), ("K5", complete(5)),
            ("K7", complete(7))] + [(f"deg({n})", degenerate(n)) for n in range(6, 10)]
    bad = []
    for name, H in fams:
        col, rep = efl_color(H, seed=0)
        chi, opt = exact_chromatic_index(H, limit=None)
        edges = list(H.edges)
        # lower bound n from a clique of the line graph or from the matching number
        lower = H.m if pairwise_intersecting(edges) else math.ceil(H.m / matching_number(edges))
        ok = (proper(edges, col.colors) and col.used == H.n and chi == H.n and lower == H.n
              and proper(edges, opt.colors) and opt.used == H.n)
        if not ok:
            bad.append((name, col.used, chi, lower))
    dt = time.time() - t
    ok = not bad and dt < 60
    report(capsys, "C1 tight families", ok, f"{len(fams)} families, mismatches {bad}, {dt:.1f}s (< 60s)")
    assert ok


def test_c2_tiny_scale_bound(capsys):
    t = time.time()
    count = 0
    violations = []
    for seed in range(5000):
        rng = random.Random(seed)
        n = rng.randint(3, 9)
        sizes = sorted(rng.sample(range(2, n + 1), rng.randint(1, min(3, n - 1))))
        H = random_linear(n, sizes, rng.randint(1, 3 * n), seed=seed)
        if H.m == 0:
            continue
        chi, col = exact_chromatic_index(H, limit=None)
        count += 1
        if chi > n or not proper(H.edges, col.colors) or col.used != chi:
            violations.append((seed, n, chi))
    dt = time.time() - t
    ok = count >= 5000 * 0.98 and not violations and dt < 600
    report(capsys, "C2 chi' <= n for n <= 9", ok,
           f"{count} instances, violations {violations[:5]}, {dt:.1f}s (< 600s)")
    assert ok


def _near_regular(n, r, D, seed):
    # the generator may miss the degree window; move to the next seed deterministically
    for k in range(20):
        try:
            return uniform_near_regular(n, r, D, 0.1, seed=seed + 1000 * k)
        except DegreeSpreadUnreachable:
            continue
    raise DegreeSpreadUnreachable((0, 0), (D * 0.9, D * 1.1))


def c3_corpus():
    rng = random.Random(2024)

    def log_n():
        return int(math.exp(rng.uniform(math.log(100), math.log(2000))))

    out = []
    for i in range(40):
        n = log_n()
        m = n * rng.randint(3, 40) // 2
        out.append(("graph", lambda n=n, m=m, i=i: random_linear(n, [2], m, seed=i)))
    for n in (100, 131, 160, 199, 250):
        out.append(("graph", lambda n=n: complete(n)))
    for q in (11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        out.append(("plane", lambda q=q: projective_plane(q)))
    for i in range(30):
        n = 100 + i * 1900 // 29
        out.append(("degenerate", lambda n=n: degenerate(n)))
    laws = [[2, 3], [3, 4, 5], {2: 4, 3: 2, 6: 1}, {2: 3, 3: 2, 5: 1, 30: 0.05}, {3: 1, 12: 0.2, 40: 0.02}]
    for i in range(70):
        n = log_n()
        law = laws[i % len(laws)]
        m = n * rng.randint(1, 6)
        out.append(("mixed", lambda n=n, law=law, m=m, i=i: random_linear(n, law, m, seed=100 + i)))
    for i in range(30):
        n = log_n()
        r = 3 + i % 3
        D = min(rng.randint(12, 40), (n - 1) // (2 * (r - 1)))
        out.append(("uniform", lambda n=n, r=r, D=D, i=i: _near_regular(n, r, D, i)))
    for i in range(15):
        n = log_n()
        out.append(("split", lambda n=n, i=i: split_instance(n, 2 + i % 6, seed=i)))
    assert len(out) == 200
    return out


def test_c3_pipeline_totality(capsys):
    t = time.time()
    total = proper_count = tight_total = tight_ok = 0
    over = []
    for k, (family, make) in enumerate(c3_corpus()):
        H = make()
        assert 100 <= H.n <= 2000
        col, rep = efl_color(H, seed=k)
        total += 1
        proper_count += proper(H.edges, col.colors)
        if family in ("graph", "plane", "degenerate"):
            tight_total += 1
            if col.used <= H.n:
                tight_ok += 1
            else:
                over.append((family, H.n, col.used))
    dt = time.time() - t
    ok = proper_count == total == 200 and tight_ok == tight_total
    report(capsys, "C3 pipeline totality", ok,
           f"proper {proper_count}/{total}; <= n on graphs/planes/degenerate {tight_ok}/{tight_total} "
           f"{over[:5]}; {dt:.1f}s")
    assert ok


def test_c4_pair_color(capsys):
    found = good = 0
    for seed in range(400):
        rng = random.Random(seed)
        n = rng.randint(7, 40)
        k = max(2, round(math.sqrt(n)))
        H = random_linear(n, [k - 1, k, k + 1], n + rng.randint(1, n), seed=seed)
        if H.m <= H.n:
            continue
        N = max_complement_matching(H)
        if len(N) < H.m - H.n:
            continue
        found += 1
        col = pair_color(H, PairingPlan(N[:H.m - H.n]))
        sizes = {}
        for c in col.colors:
            sizes[c] = sizes.get(c, 0) + 1
        good += proper(H.edges, col.colors) and col.used <= H.n and max(sizes.values()) <= 2
    ok = found > 0 and good == found
    report(capsys, "C4 pair_color", ok, f"{good}/{found} instances with a large enough matching")
    assert ok


def test_c5_reorder(capsys):
    violations = []
    audits = audit_bad = 0
    outcomes = {"good": 0, "window": 0}
    for seed in range(1000):
        rng = random.Random(seed)
        n = rng.randint(8, 60)
        law = rng.choice([[2], [2, 3], [3, 4, 6], [2, n // 2], [n // 3, n // 2]])
        law = [s for s in law if 2 <= s <= n] or [2]
        H = random_linear(n, law, rng.randint(n, 4 * n), seed=seed)
        if H.m == 0:
            continue
        tau = rng.uniform(0.02, 0.6)
        K = rng.choice([1, 2, 3])
        out = reorder(H, tau, K)
        outcomes[out.kind] += 1
        perm = out.ordering.perm
        pos = {e: i for i, e in enumerate(perm)}
        sets = [set(e) for e in H.edges]
        fwd = {e: sum(1 for f in range(H.m) if f != e and pos[f] < pos[e] and sets[e] & sets[f])
               for e in range(H.m)}
        limit = (1 - tau) * n
        if out.good:
            if any(fwd[e] > limit for e in range(H.m)):
                violations.append((seed, "good bound"))
        else:
            k = pos[out.e_star]
            o1 = all(fwd[f] <= limit for f in perm[k + 1:])
            sizes = [len(H.edges[f]) for f in perm[:k + 1]]
            o2 = all(a >= b for a, b in zip(sizes, sizes[1:]))
            top = (1 + 3 * tau ** 0.25 * K ** 4) * len(H.edges[out.e_star])
            expect = [f for f in perm[:k + 1] if len(H.edges[f]) <= top]
            w = out.e_star in out.window and out.window == expect
            if not (o1 and o2 and w):
                violations.append((seed, o1, o2, w))
        rows = audit_fwd_inequalities(H, size_order(H), 0.2, 0.5, tau)
        audits += len(rows)
        audit_bad += sum(not r.ok_i for r in rows)
    ok = not violations and audit_bad == 0
    report(capsys, "C5 reordering", ok,
           f"outcomes {outcomes}, violations {violations[:5]}, audit rows {audits} with {audit_bad} failures")
    assert ok


def test_c6_nibble_statistics(capsys):
    t = time.time()
    H = uniform_near_regular(2000, 3, 60, 0.05, seed=0)
    gamma, kappa = 0.2, 0.05
    hits = 0
    fracs = []
    for seed in range(50):
        res = pseudorandom_matching(H, gamma, kappa, seed=seed, raise_on_miss=False)
        covered = set()
        for e in res.matching:
            assert not covered.intersection(H.edges[e])
            covered.update(H.edges[e])
        frac = 1 - len(covered) / H.n
        fracs.append(frac)
        hits += abs(frac - gamma) <= 4 * kappa
    dt = time.time() - t
    ok = hits >= 45 and dt < 300
    report(capsys, "C6 nibble statistics", ok,
           f"{hits}/50 seeds within {gamma}+-{4 * kappa}, range [{min(fracs):.3f}, {max(fracs):.3f}], "
           f"{dt:.1f}s (< 300s)")
    assert ok


def test_c7_absorption(capsys):
    graphs = [complete(1000), split_instance(1000, 8, seed=1), split_instance(1000, 700, seed=2)]
    incs = [H.incidence() for H in graphs]
    hits = 0
    by_status = {}
    for seed in range(100):
        H, inc = graphs[seed % 3], incs[seed % 3]
        b = absorbable_batch(H, 0.3, 0.05, 5, 0.1, seed, inc)
        try:
            r = absorb_batch(H, b.matchings, b.R, b.S, 0.3, 0.005, 0.1, 0.05, 0.01, seed=seed)
        except AbsorptionFailed:
            by_status["failed"] = by_status.get("failed", 0) + 1
            continue
        used = set()
        for old, new in zip(b.matchings, r.matchings):
            assert set(old) <= set(new) and set(new) - set(old) <= b.R
            assert used.isdisjoint(new)
            used.update(new)
            covered = set()
            for e in new:
                assert not covered.intersection(H.edges[e])
                covered.update(H.edges[e])
        status = coverage([[H.edges[e] for e in M] for M in r.matchings], b.S, b.S).status
        by_status[status] = by_status.get(status, 0) + 1
        hits += status == b.expect or status == "perfect"
    ok = hits >= 95
    report(capsys, "C7 absorption", ok, f"{hits}/100 seeds reach the expected status {by_status}")
    assert ok


def test_c8_vizing(capsys):
    over = 0
    for seed in range(10_000):
        rng = random.Random(seed)
        n = rng.randint(2, 40)
        p = rng.uniform(0.05, 0.9)
        edges = [e for e in combinations(range(n), 2) if rng.random() < p]
        if not edges:
            continue
        col = vizing(n, edges, seed=seed)
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        if not proper(edges, col.colors) or col.used > max(deg) + 1:
            over += 1
    mismatch = []
    for seed in range(500):
        rng = random.Random(10_000 + seed)
        n = rng.randint(3, 12)
        p = rng.uniform(0.2, 0.9)
        edges = [e for e in combinations(range(n), 2) if rng.random() < p]
        if not edges:
            edges = [(0, 1)]
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        delta = max(deg)
        chi = delta if delta_colorable(n, edges, delta) else delta + 1
        col = vizing(n, edges, seed=seed)
        if col.used != chi or not proper(edges, col.colors):
            mismatch.append((seed, col.used, chi))
    ok = over == 0 and not mismatch
    report(capsys, "C8 vizing", ok, f"Delta+1 violations {over}/10000; oracle mismatches {mismatch[:5]} of 500")
    assert ok


def _hall_instance(rng):
    n = rng.randint(60, 200)
    delta = rng.uniform(0.05, 0.15)
    U = rng.sample(range(n), max(1, int(delta * n)))
    Uset = set(U)
    p = rng.uniform(0.1, 0.9)
    edges = sorted({(min(u, w), max(u, w)) for u in U for w in range(n) if w != u and rng.random() < p})
    deg = [0] * n
    for u, w in edges:
        deg[u] += 1
        deg[w] += 1
    cap = int(delta * n)
    size = max(math.ceil(7 * delta * n), max(deg) + cap)
    pal = list(range(size))
    mult = [0] * size
    forb = {}
    for v in range(n):
        want = rng.randint(0, cap)
        room = size - deg[v]
        picks = [c for c in rng.sample(pal, min(size, 3 * want)) if mult[c] < cap][:min(want, room)]
        for c in picks:
            mult[c] += 1
        forb[v] = set(picks)
    assert all(u in Uset or w in Uset for u, w in edges) and len(U) <= delta * n
    assert all(deg[v] <= size - len(forb[v]) and len(forb[v]) <= delta * n for v in range(n))
    assert max(mult) <= delta * n and size >= 7 * delta * n
    return n, edges, pal, forb, U, delta


def test_c9_hall_finish(capsys):
    good = 0
    for seed in range(500):
        n, edges, pal, forb, U, delta = _hall_instance(random.Random(seed))
        col = hall_finish(n, edges, pal, forb, U, delta)
        ok = proper(edges, col.colors) and all(
            c in pal and c not in forb[u] and c not in forb[w] for (u, w), c in zip(edges, col.colors))
        good += ok
    ok = good == 500
    report(capsys, "C9 hall_finish", ok, f"{good}/500 instances colored respecting forbidden sets")
    assert ok


def test_c10_gf_factor(capsys):
    agree = feasible = 0
    for seed in range(300):
        rng = random.Random(seed)
        n = rng.randint(2, 12)
        p = rng.uniform(0.15, 0.6)
        edges = [e for e in combinations(range(n), 2) if rng.random() < p]
        deg = [0] * n
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        g = {v: rng.randint(0, deg[v]) for v in range(n)}
        f = {v: rng.randint(g[v], deg[v]) for v in range(n)}
        truth = gf_exists(n, edges, g, f)
        try:
            out = gf_factor(range(n), edges, g, f)
            got = True
            d = [0] * n
            for i in out:
                for v in edges[i]:
                    d[v] += 1
            valid = len(set(out)) == len(out) and all(g[v] <= d[v] <= f[v] for v in range(n))
        except Infeasible:
            got, valid = False, True
        feasible += truth
        agree += got == truth and valid
    ok = agree == 300
    report(capsys, "C10 gf_factor", ok, f"{agree}/300 agree with exhaustive search ({feasible} feasible)")
    assert ok


def _cli_outputs(tmp, env=None):
    cmds = [
        ["gen", "--family", "random-linear", "--n", "120", "--m", "300", "--sizes", "2,3,5", "--seed", "4",
         "--out", f"{tmp}/h.lhg"],
        ["gen", "--family", "projective-plane", "--q", "3", "--out", f"{tmp}/pg.lhg"],
        ["color", "--in", f"{tmp}/h.lhg", "--seed", "2", "--out", f"{tmp}/c.json", "--report", f"{tmp}/r.json"],
        ["color", "--algo", "dsatur", "--in", f"{tmp}/h.lhg", "--seed", "2", "--out", f"{tmp}/d.json"],
        ["color", "--algo", "greedy", "--in", f"{tmp}/h.lhg", "--seed", "2", "--out", f"{tmp}/g.json"],
        ["color", "--algo", "extremal", "--in", f"{tmp}/pg.lhg", "--seed", "2", "--out", f"{tmp}/x.json"],
        ["exact", "--in", f"{tmp}/pg.lhg", "--out", f"{tmp}/e.json"],
        ["order", "--in", f"{tmp}/h.lhg", "--out", f"{tmp}/o.json"],
        ["nibble-sim", "--n", "300", "--D", "20", "--seeds", "3", "--seed", "1", "--csv", f"{tmp}/n.csv"],
        ["bench", "--families", "pg,degenerate", "--algos", "pipeline,dsatur", "--seeds", "1", "--seed", "0",
         "--no-timing", "--csv", f"{tmp}/b.csv"],
    ]
    for cmd in cmds:
        if env is None:
            assert run(cmd) == 0, cmd
        else:
            subprocess.run([sys.executable, "-c", "import sys; from eflcolor.cli import main; main()", *cmd],
                           check=True, env=env, capture_output=True)
    names = sorted(os.listdir(tmp))
    return {name: open(os.path.join(tmp, name), "rb").read() for name in names}


def test_c11_determinism(capsys, tmp_path):
    runs = []
    for i in range(2):
        d = tmp_path / f"run{i}"
        d.mkdir()
        runs.append(_cli_outputs(str(d)))
    d = tmp_path / "pure"
    d.mkdir()
    env = dict(os.environ, EFL_PURE_PYTHON="1")
    runs.append(_cli_outputs(str(d), env))
    diff = [k for k in runs[0] if runs[0][k] != runs[1].get(k)]
    diff_pure = [k for k in runs[0] if runs[0][k] != runs[2].get(k)]
    ok = not diff and not diff_pure and len(runs[0]) == 11
    report(capsys, "C11 determinism", ok,
           f"{len(runs[0])} output files; repeat diffs {diff}; compiled vs pure-Python diffs {diff_pure}")
    assert ok
