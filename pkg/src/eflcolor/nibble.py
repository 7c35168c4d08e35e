"""Semi-random matchings and the coloring steps built on them.

Colors are bit positions in per-vertex integers: bit c of busy[v] is set
when v is covered in class c.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .absorb import AbsorptionFailed, absorb_batch, absorb_small_typical
from .greedy import ListExhausted, list_greedy
from .hypercore import LinearHypergraph


class StatMiss(RuntimeError):
    def __init__(self, misses: Dict[str, object]):
        super().__init__(f"statistical window missed: {misses}")
        self.misses = misses


class RoundFailed(RuntimeError):
    def __init__(self, k: int, reason: str):
        super().__init__(f"round {k} failed: {reason}")
        self.k = k
        self.reason = reason


def _random_bit(x: int, width: int, rng: random.Random) -> int:
    for _ in range(16):
        c = rng.randrange(width)
        if x >> c & 1:
            return c
    bits = _bits(x)
    return bits[rng.randrange(len(bits))]


def _bits(x: int) -> List[int]:
    return [i for i, b in enumerate(bin(x)[:1:-1]) if b == "1"]


def semi_random_fill(H: LinearHypergraph, edges: Sequence[int], width: int, busy: List[int],
                     rng: random.Random, theta: float = 0.5, max_rounds: int = 400) -> Dict[int, int]:
    """Assign edges to classes 0..width-1 so every class stays a matching.

    Each round every unassigned edge wakes up with probability theta and
    proposes a random class free at all its vertices; proposals are then
    accepted in increasing edge index, so on a conflict the lowest index
    wins.  Stops when no edge has a free class.  busy is updated in place.
    """
    full = (1 << width) - 1
    left = sorted(edges)
    out: Dict[int, int] = {}
    for _ in range(max_rounds):
        proposals = []
        alive = []
        for e in left:
            mask = 0
            for v in H.edges[e]:
                mask |= busy[v]
            avail = full & ~mask
            if not avail:
                continue
            alive.append(e)
            if rng.random() < theta:
                proposals.append((e, _random_bit(avail, width, rng)))
        if not alive:
            break
        for e, c in proposals:
            bit = 1 << c
            if any(busy[v] & bit for v in H.edges[e]):
                continue
            for v in H.edges[e]:
                busy[v] |= bit
            out[e] = c
        left = [e for e in alive if e not in out]
    return out


@dataclass
class PseudoMatching:
    matching: List[int]
    fractions: List[float]
    misses: List[int]
    attempts: int
    base_uncovered: float


def pseudorandom_matching(H: LinearHypergraph, gamma: float, kappa: float,
                          families: Optional[Sequence[Iterable[int]]] = None, seed: int = 0,
                          retries: int = 5, floor: int = 1, raise_on_miss: bool = True) -> PseudoMatching:
    """Near-perfect matching by the semi-random process, then each edge is
    dropped with probability gamma.  Every S in families with |S| >= D^(1/20)
    must leave (gamma +- 4 kappa)|S| vertices uncovered; otherwise the whole
    construction is redrawn, up to `retries` times."""
    D = H.max_degree()
    if D < floor:
        raise ValueError(f"maximum degree {D} below floor {floor}")
    fams = [set(range(H.n))] if families is None else [set(S) for S in families]
    small = D ** (1 / 20)
    last: Optional[PseudoMatching] = None
    for attempt in range(1, retries + 1):
        rng = random.Random(seed * 7919 + attempt)
        busy = [0] * H.n
        got = semi_random_fill(H, range(H.m), 1, busy, rng)
        base = 1 - sum(1 for b in busy if b) / H.n if H.n else 0.0
        M = sorted(e for e in got if rng.random() >= gamma)
        covered = {v for e in M for v in H.edges[e]}
        fr, miss = [], []
        for j, S in enumerate(fams):
            if not S:
                fr.append(0.0)
                continue
            f = len(S - covered) / len(S)
            fr.append(f)
            if len(S) >= small and abs(f - gamma) > 4 * kappa:
                miss.append(j)
        last = PseudoMatching(M, fr, miss, attempt, base)
        if not miss:
            return last
    if raise_on_miss:
        raise StatMiss({"families": last.misses, "fractions": [last.fractions[j] for j in last.misses]})
    return last


@dataclass
class NibbleResult:
    matchings: List[List[int]]
    singles: List[Set[int]]
    leftover: List[int]
    leftover_singles: int
    drop: float
    stats: Dict[str, object] = field(default_factory=dict)


def nibble_color(H: LinearHypergraph, edges: Sequence[int], padding: Sequence[int],
                 pre: Sequence[Sequence[int]], gamma: float, kappa: float, seed: int = 0,
                 families: Optional[Sequence[Iterable[int]]] = None, theta: float = 0.5) -> NibbleResult:
    """Extend the D = len(pre) matchings with edges of H' (real edges plus
    padding[w] virtual singletons at each w).

    The semi-random process fills the classes; padding singletons then take
    free classes at their vertex.  Finally each new edge is dropped with the
    probability that brings the mean uncovered fraction of V to gamma.
    Disjointness of the classes is asserted.  Per-class coverage of each
    family and the global leftover degree (F = all of H') are measured
    against their windows.  Vertex stars are checked
    too and reported as nb3_bad_stars.
    """
    n = H.n
    D = len(pre)
    rng = random.Random(seed)
    if D == 0:
        return NibbleResult([], [], sorted(edges), sum(padding), 0.0, {"nb2_misses": 0, "nb3_ok": True})
    busy = [0] * n
    for c, M in enumerate(pre):
        for e in M:
            for v in H.edges[e]:
                busy[v] |= 1 << c
    got = semi_random_fill(H, edges, D, busy, rng, theta)
    full = (1 << D) - 1
    singles: List[Set[int]] = [set() for _ in range(D)]
    for w in range(n):
        p = padding[w]
        if not p:
            continue
        free = _bits(full & ~busy[w])
        for c in (free if p >= len(free) else rng.sample(free, p)):
            singles[c].add(w)
            busy[w] |= 1 << c
    covered_total = sum(bin(b).count("1") for b in busy)
    base = 1 - covered_total / (D * n)
    drop = max(0.0, (gamma - base) / (1 - base)) if base < 1 else 0.0
    new: List[List[int]] = [[] for _ in range(D)]
    for e in sorted(got):
        if rng.random() >= drop:
            new[got[e]].append(e)
    if drop > 0:
        for c in range(D):
            singles[c] = {w for w in sorted(singles[c]) if rng.random() >= drop}
    matchings = [list(pre[c]) + new[c] for c in range(D)]
    colored = {e for lst in new for e in lst}
    leftover = [e for e in sorted(edges) if e not in colored]
    left_single = sum(padding) - sum(len(s) for s in singles)
    # classes are disjoint matchings
    edge_set = set(edges)
    for c in range(D):
        assert matchings[c][:len(pre[c])] == list(pre[c])
        assert set(new[c]) <= edge_set
    stats = _nibble_stats(H, matchings, singles, edges, padding, leftover, left_single, gamma, kappa,
                          families)
    stats["base_uncovered"] = base
    return NibbleResult(matchings, singles, leftover, left_single, drop, stats)


def _nibble_stats(H, matchings, singles, edges, padding, leftover, left_single, gamma, kappa, families):
    n = H.n
    D = len(matchings)
    fams = [set(range(n))] if families is None else [set(S) for S in families]
    nb2 = 0
    worst = 0.0
    for c in range(D):
        cov = {v for e in matchings[c] for v in H.edges[e]} | singles[c]
        for S in fams:
            dev = abs(len(S - cov) - gamma * len(S))
            worst = max(worst, dev / n)
            if dev > kappa * n:
                nb2 += 1
    F = len(edges) + sum(padding)
    left = len(leftover) + left_single
    nb3_all = left <= gamma * F + kappa * max(F, D)
    star_left = [0] * n
    star = list(padding)
    for e in edges:
        for v in H.edges[e]:
            star[v] += 1
    for e in leftover:
        for v in H.edges[e]:
            star_left[v] += 1
    # singletons left at w: padding minus those placed
    placed = [0] * n
    for s in singles:
        for w in s:
            placed[w] += 1
    bad_star = sum(1 for w in range(n)
                   if star_left[w] + padding[w] - placed[w] > gamma * star[w] + kappa * max(star[w], D))
    return {"nb2_misses": nb2, "nb2_worst": worst, "nb3_left": left, "nb3_total": F,
            "nb3_ok": nb3_all, "nb3_bad_stars": bad_star}


@dataclass
class MainResult:
    matchings: List[List[int]]
    singles: List[Set[int]]
    defects: Set[int] = field(default_factory=set)
    stats: Dict[str, object] = field(default_factory=dict)


def main_color(H: LinearHypergraph, edges: Sequence[int], padding: Sequence[int], R: Set[int],
               S: Set[int], pre: Sequence[Sequence[int]], gamma: float, kappa: float, rho: float,
               xi: float, eps: float, seed: int = 0, families: Optional[Sequence[Iterable[int]]] = None
               ) -> MainResult:
    """K = ceil(1/kappa) rounds.  H' is split into K random parts and the
    colors into K slices; in round k the slice's classes take part k through
    nibble_color (at gamma/4) and are then absorbed over U with what is left
    of the reservoir R.  Defects leave S as they are used."""
    n = H.n
    D = len(pre)
    if D == 0:
        return MainResult([], [], set(), {"rounds": 0, "n2_ok": True})
    rng = random.Random(seed)
    K = min(math.ceil(1 / kappa), D)
    part = {e: rng.randrange(K) for e in sorted(edges)}
    offsets = [rng.randrange(K) for _ in range(n)]
    bounds = [D * k // K for k in range(K + 1)]
    R_left = set(R)
    S_left = set(S)
    out: List[List[int]] = [list(M) for M in pre]
    singles: List[Set[int]] = [set() for _ in range(D)]
    rounds = []
    for k in range(K):
        lo, hi = bounds[k], bounds[k + 1]
        if lo == hi:
            continue
        part_edges = [e for e in sorted(edges) if part[e] == k]
        pad = [padding[w] // K + (1 if (k - offsets[w]) % K < padding[w] % K else 0) for w in range(n)]
        nb = nibble_color(H, part_edges, pad, [pre[c] for c in range(lo, hi)], gamma / 4, kappa,
                          seed=rng.randrange(2 ** 31), families=families)
        try:
            ab = absorb_batch(H, nb.matchings, R_left, S_left, rho, xi, eps, gamma, kappa,
                              seed=rng.randrange(2 ** 31), precheck=False, virtual=nb.singles)
        except AbsorptionFailed as err:
            raise RoundFailed(k, str(err)) from err
        for j, c in enumerate(range(lo, hi)):
            out[c] = ab.matchings[j]
            singles[c] = nb.singles[j]
            R_left -= set(ab.added[j])
        S_left -= set(ab.defects.values())
        rounds.append({"round": k, "colors": hi - lo, "edges": len(part_edges), "leftover": len(nb.leftover),
                       "status": ab.status, "nb2_misses": nb.stats["nb2_misses"]})
    # containment and disjointness
    seen: Set[int] = set()
    allowed = set(edges) | set(R)
    for c in range(D):
        assert out[c][:len(pre[c])] == list(pre[c])
        assert set(out[c][len(pre[c]):]) <= allowed
        assert seen.isdisjoint(out[c])
        seen.update(out[c])
    n2 = _n2_counters(H, out, singles, edges, padding, R, gamma, D)
    return MainResult(out, singles, set(S) - S_left, {"rounds": len(rounds), "trace": rounds, **n2,
                                     "defects_used": len(S) - len(S_left)})


def _n2_counters(H, matchings, singles, edges, padding, R, gamma, D) -> Dict[str, object]:
    n = H.n
    used = {e for M in matchings for e in M}
    r_used = [0] * n
    left = [0] * n
    for e in R:
        if e in used:
            for v in H.edges[e]:
                r_used[v] += 1
    for e in edges:
        if e not in used:
            for v in H.edges[e]:
                left[v] += 1
    placed = [0] * n
    for s in singles:
        for w in s:
            placed[w] += 1
    for w in range(n):
        left[w] += padding[w] - placed[w]
    return {"n2_reservoir_max": max(r_used, default=0), "n2_left_max": max(left, default=0),
            "n2_ok": max(r_used, default=0) <= gamma * D and max(left, default=0) <= gamma * D}


@dataclass
class LeftoverResult:
    matchings: List[List[int]]
    colored: Dict[int, int]
    parts: int
    status: str


def leftover_color(H: LinearHypergraph, colors: Sequence[int], pre: Sequence[Sequence[int]], R: Set[int],
                   rem: Sequence[int], S: Set[int], gamma: float, rho: float, xi: float, eps: float,
                   seed: int = 0, virtual: Optional[Sequence[Set[int]]] = None) -> LeftoverResult:
    """Color every edge of rem with a color of `colors` and absorb.

    The colors are split into t = ceil(4/gamma) parts and each edge of rem
    goes to a random part; each part's edges are list-colored greedily
    from that part's colors, avoiding classes that already meet the edge.  The classes
    are finally extended over U by absorb_small_typical (smallness).
    """
    rng = random.Random(seed)
    C = list(colors)
    k = len(C)
    if k == 0:
        if rem:
            raise ListExhausted(rem[0])
        return LeftoverResult([], {}, 0, "perfect")
    t = min(math.ceil(4 / gamma), k)
    chunks = [C[k * i // t: k * (i + 1) // t] for i in range(t)]
    where = {c: j for j, c in enumerate(C)}
    blocked: Dict[int, Set[int]] = {}
    marks = [set() for _ in range(H.n)]
    for j, M in enumerate(pre):
        for e in M:
            for v in H.edges[e]:
                marks[v].add(C[j])
    for e in rem:
        blocked[e] = set().union(*(marks[v] for v in H.edges[e]))
    part = {e: rng.randrange(t) for e in sorted(rem)}
    choice: Dict[int, int] = {}
    for i, chunk in enumerate(chunks):
        mine = sorted((e for e in rem if part[e] == i), key=lambda e: (-len(H.edges[e]), e))
        if not mine:
            continue
        lists = {e: [c for c in chunk if c not in blocked[e]] for e in mine}
        col = list_greedy(H, mine, lists, 0.0, 2.0)
        for e in mine:
            choice[e] = col.colors[e]
    matchings = [list(M) for M in pre]
    for e in sorted(rem):
        matchings[where[choice[e]]].append(e)
    tags = ["smallness"] * k
    ab = absorb_small_typical(H, matchings, tags, R, S, rho, xi, eps, gamma, seed=rng.randrange(2 ** 31),
                              virtual=virtual)
    # rem inside the new edges, new edges inside rem + R
    new = {e for j in range(k) for e in ab.matchings[j][len(pre[j]):]}
    assert set(rem) <= new <= set(rem) | set(R)
    return LeftoverResult(ab.matchings, choice, t, ab.status)
