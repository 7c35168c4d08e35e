"""Colorer for hypergraphs whose edges all have size near sqrt(n).

Colors come from a matching N in the complement of the line graph: each
pair of N shares a color and every other edge gets its own, so e(H) - |N|
colors are used.  The work is finding |N| >= e(H) - n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .hypercore import EdgeColoring, LinearHypergraph, line_graph


class PlanTooSmall(ValueError):
    pass


class PairNotDisjoint(ValueError):
    pass


class NotFound(RuntimeError):
    pass


class CaseLadderExhausted(RuntimeError):
    pass


@dataclass
class PairingPlan:
    pairs: List[Tuple[int, int]]
    singles: List[int] = field(default_factory=list)


def useful_pair(H: LinearHypergraph, e: int, f: int, adj: Optional[List[Set[int]]] = None) -> bool:
    if e == f or set(H.edges[e]).isdisjoint(H.edges[f]):
        return False
    adj = line_graph(H) if adj is None else adj
    return len(adj[e] & adj[f]) <= H.n - 2


def pair_color(H: LinearHypergraph, plan: PairingPlan) -> EdgeColoring:
    """One color per pair of the plan, one per remaining edge."""
    seen: Set[int] = set()
    for a, b in plan.pairs:
        if a == b or a in seen or b in seen:
            raise PairNotDisjoint(f"pair ({a}, {b}) reuses an edge")
        if not set(H.edges[a]).isdisjoint(H.edges[b]):
            raise PairNotDisjoint(f"edges {a} and {b} intersect")
        seen.update((a, b))
    if H.m > H.n and len(plan.pairs) < H.m - H.n:
        raise PlanTooSmall(f"{len(plan.pairs)} pairs, need {H.m - H.n}")
    colors: List[Optional[int]] = [None] * H.m
    for c, (a, b) in enumerate(plan.pairs):
        colors[a] = colors[b] = c
    c = len(plan.pairs)
    for e in range(H.m):
        if colors[e] is None:
            colors[e] = c
            c += 1
    return EdgeColoring(colors, c)


def greedy_complement_matching(H: LinearHypergraph, order: Optional[Sequence[int]] = None) -> List[Tuple[int, int]]:
    """Maximal matching in the complement of the line graph, scanning edge ids."""
    order = range(H.m) if order is None else order
    matched: Set[int] = set()
    out = []
    sets = [set(e) for e in H.edges]
    for a in order:
        if a in matched:
            continue
        for b in order:
            if b != a and b not in matched and sets[a].isdisjoint(sets[b]):
                out.append((a, b) if a < b else (b, a))
                matched.update((a, b))
                break
    return out


def max_complement_matching(H: LinearHypergraph) -> List[Tuple[int, int]]:
    """Maximum matching in the complement of the line graph (blossom)."""
    G = nx.Graph()
    G.add_nodes_from(range(H.m))
    sets = [set(e) for e in H.edges]
    for a in range(H.m):
        for b in range(a + 1, H.m):
            if sets[a].isdisjoint(sets[b]):
                G.add_edge(a, b)
    M = nx.max_weight_matching(G, maxcardinality=True)
    return sorted(tuple(sorted(p)) for p in M)


@dataclass
class Chain:
    edges: List[int]
    z: List[int]
    matching: List[Tuple[int, int]]


def select_z(H: LinearHypergraph, chain: Sequence[int], adj: List[Set[int]]) -> Optional[Chain]:
    """Pick z_i outside N(e_{2i-1}) & N(e_{2i}) and pair it with the chain edge it misses."""
    used = set(chain)
    zs: List[int] = []
    matching = []
    sets = [set(e) for e in H.edges]
    for i in range(0, len(chain), 2):
        a, b = chain[i], chain[i + 1]
        common = adj[a] & adj[b]
        z = next((f for f in range(H.m) if f not in used and f not in common), None)
        if z is None:
            return None
        used.add(z)
        zs.append(z)
        partner = a if sets[z].isdisjoint(sets[a]) else b
        matching.append((z, partner))
    return Chain(list(chain), zs, matching)


def _pairs_in(H: LinearHypergraph, pool: Sequence[int], t: int, adj: List[Set[int]],
              ok_vertex=None) -> List[int]:
    """Greedily pick up to t disjoint useful pairs inside pool."""
    chain: List[int] = []
    taken: Set[int] = set()
    for a in pool:
        if len(chain) >= 2 * t:
            break
        if a in taken:
            continue
        for b in pool:
            if b == a or b in taken or b not in adj[a]:
                continue
            if ok_vertex is not None:
                w = set(H.edges[a]) & set(H.edges[b])
                if not any(ok_vertex(x) for x in w):
                    continue
            if useful_pair(H, a, b, adj):
                chain += [a, b]
                taken.update((a, b))
                break
    return chain


def _is_clique(chain: Sequence[int], adj: List[Set[int]]) -> bool:
    return all(b in adj[a] for i, a in enumerate(chain) for b in chain[i + 1:])


def useful_chain(H: LinearHypergraph, t: int, adj: Optional[List[Set[int]]] = None) -> Chain:
    """Find 2t pairwise intersecting edges in useful consecutive pairs and the
    matching of size t they induce in the complement of the line graph.

    Candidate cliques of the line graph are the vertex stars, the residue of a
    greedy complement matching and, for small line graphs, every maximal clique.
    """
    if t <= 0:
        return Chain([], [], [])
    adj = line_graph(H) if adj is None else adj
    inc = H.incidence()
    cands: List[List[int]] = [sorted(lst) for lst in inc if len(lst) >= 2]
    matched = {x for p in greedy_complement_matching(H) for x in p}
    cands.append([e for e in range(H.m) if e not in matched])
    if H.m <= 60:
        G = nx.Graph()
        G.add_nodes_from(range(H.m))
        G.add_edges_from((a, b) for a in range(H.m) for b in adj[a] if a < b)
        cands += [sorted(c) for c in nx.find_cliques(G)]
    for pool in cands:
        if len(pool) < 2 * t:
            continue
        chain = _pairs_in(H, pool, t, adj)
        if len(chain) >= 2 * t and _is_clique(chain[:2 * t], adj):
            out = select_z(H, chain[:2 * t], adj)
            if out is not None:
                return out
    raise NotFound(f"no useful chain of length {2 * t}")


def ladder_k(n: int) -> int:
    return math.ceil((-1 + math.sqrt(4 * n - 3)) / 2)


@dataclass
class LadderReport:
    k: int
    a_minus: int
    a_plus: int
    b: int
    case: str
    v_bad: Set[int] = field(default_factory=set)
    a_star: int = 0
    greedy_matching: int = 0


def v_bad_set(H: LinearHypergraph, a_minus: Sequence[int], delta: float) -> Set[int]:
    count: Dict[int, int] = {}
    for e in a_minus:
        for x in H.edges[e]:
            count[x] = count.get(x, 0) + 1
    return {x for x, c in count.items() if c >= 1 / (4 * delta)}


def _ladder(H: LinearHypergraph, delta: float, t: int, adj: List[Set[int]],
            N: List[Tuple[int, int]]) -> Tuple[Optional[Chain], LadderReport]:
    n = H.n
    k = ladder_k(n)
    a_minus = [e for e in range(H.m) if len(H.edges[e]) <= k - 1]
    a_plus = [e for e in range(H.m) if len(H.edges[e]) == k]
    b = [e for e in range(H.m) if len(H.edges[e]) >= k + 1]
    covered = {x for p in N for x in p}
    rep = LadderReport(k, len(a_minus), len(a_plus), len(b), "", greedy_matching=len(N))
    if len(a_minus) <= 300:
        rep.case = "few short edges"
        pool = [e for e in a_minus + a_plus if e not in covered]
    elif len(a_plus) <= math.sqrt(n) * len(a_minus) / 15:
        rep.case = "few k-edges"
        pool = [e for e in a_minus if e not in covered]
    else:
        rep.case = "bad-vertex filtering"
        bad = v_bad_set(H, a_minus, delta)
        rep.v_bad = bad
        star = {e for e in a_plus if len(bad.intersection(H.edges[e])) >= math.sqrt(delta * n)}
        rep.a_star = len(star)
        pool = [e for e in a_plus if e not in star and e not in covered]
        rounds = math.ceil(len(a_plus) / 4)
        chain = _pairs_in(H, pool, min(t, rounds), adj, ok_vertex=lambda x: x not in bad)
        return _finish_chain(H, chain, t, adj), rep
    chain = _pairs_in(H, pool, t, adj)
    return _finish_chain(H, chain, t, adj), rep


def _finish_chain(H, chain, t, adj) -> Optional[Chain]:
    if len(chain) < 2 * t or not _is_clique(chain[:2 * t], adj):
        return None
    return select_z(H, chain[:2 * t], adj)


def extremal_color(H: LinearHypergraph, delta: float, idx: Optional[Sequence[int]] = None,
                   seed: int = 0, exact_limit: int = 400) -> EdgeColoring:
    """At most n colors with classes of size at most two.

    Tries, in order: distinct colors when e(H) <= n; the greedy complement
    matching; the case ladder (chain of useful pairs plus z-selection); a
    maximum complement matching when the line graph has at most exact_limit
    vertices or n <= 12.  Raises CaseLadderExhausted otherwise.
    With idx, only those edges are colored (others are None).
    """
    idx = list(range(H.m)) if idx is None else list(idx)
    sub = H.sub(idx)
    col = _extremal_local(sub, delta, exact_limit)
    colors: List[Optional[int]] = [None] * H.m
    for i, c in zip(idx, col.colors):
        colors[i] = c
    out = EdgeColoring(colors, col.palette_size)
    out.meta["route"] = col.meta["route"]
    return out


def _extremal_local(H: LinearHypergraph, delta: float, exact_limit: int) -> EdgeColoring:
    n, m = H.n, H.m
    t = m - n
    if t <= 0:
        col = pair_color(H, PairingPlan([]))
        col.meta["route"] = "distinct"
        return col
    N = greedy_complement_matching(H)
    if len(N) >= t:
        col = pair_color(H, PairingPlan(N[:t]))
        col.meta["route"] = "greedy matching"
        return col
    adj = line_graph(H)
    chain, rep = _ladder(H, delta, t, adj, N)
    if chain is not None:
        col = pair_color(H, PairingPlan(chain.matching))
        col.meta["route"] = f"ladder: {rep.case}"
        return col
    try:
        chain = useful_chain(H, t, adj)
        col = pair_color(H, PairingPlan(chain.matching))
        col.meta["route"] = "chain search"
        return col
    except NotFound:
        pass
    if n <= 12 or m <= exact_limit:
        M = max_complement_matching(H)
        if len(M) >= t:
            col = pair_color(H, PairingPlan(M[:t]))
            col.meta["route"] = "maximum matching"
            return col
    raise CaseLadderExhausted(f"no complement matching of size {t} found (e={m}, n={n})")
