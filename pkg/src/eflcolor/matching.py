"""Matching engines: Hall matchings, dense perfect matchings, matchings under
minimum-degree conditions and (g,f)-factors."""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

Vertex = Hashable
Edge = Tuple[int, int]


class PreconditionUnmet(ValueError):
    pass


class NoMatching(RuntimeError):
    def __init__(self, violator: Set[Vertex]):
        super().__init__(f"Hall's condition fails on a set of size {len(violator)}")
        self.violator = violator


class OddOrder(ValueError):
    pass


class RetriesExhausted(RuntimeError):
    pass


class Infeasible(RuntimeError):
    def __init__(self, witness: Dict[str, object]):
        super().__init__(f"no (g,f)-factor: {witness}")
        self.witness = witness


@dataclass
class HallResult:
    matching: Dict[Vertex, Vertex]
    violator: Optional[Set[Vertex]] = None

    @property
    def covers(self) -> bool:
        return self.violator is None


def hall_bipartite(A: Sequence[Vertex], adj: Mapping[Vertex, Iterable[Vertex]]) -> HallResult:
    """Maximum matching from A by augmenting paths, scanning A and each
    neighbour list in the given order.  If A is not covered, returns the set
    of A-vertices reachable by alternating paths from an exposed vertex,
    whose neighbourhood is one smaller than itself."""
    nbrs = {a: list(adj.get(a, ())) for a in A}
    match_a: Dict[Vertex, Vertex] = {}
    match_b: Dict[Vertex, Vertex] = {}

    def augment(root: Vertex) -> bool:
        # iterative DFS over alternating paths
        parent: Dict[Vertex, Tuple[Vertex, Vertex]] = {}
        seen_b: Set[Vertex] = set()
        stack = [(root, iter(nbrs[root]))]
        while stack:
            a, it = stack[-1]
            advanced = False
            for b in it:
                if b in seen_b:
                    continue
                seen_b.add(b)
                if b not in match_b:
                    # flip the path ending at b
                    while True:
                        match_a[a] = b
                        match_b[b] = a
                        if a == root:
                            return True
                        a, b = parent[a]
                    # unreachable
                nxt = match_b[b]
                parent[nxt] = (stack[-1][0], b)
                stack.append((nxt, iter(nbrs[nxt])))
                advanced = True
                break
            if not advanced:
                stack.pop()
        return False

    for a in A:
        if a not in match_a:
            augment(a)
    exposed = [a for a in A if a not in match_a]
    if not exposed:
        return HallResult(dict(match_a))
    root = exposed[0]
    S = {root}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b in nbrs[a]:
            nxt = match_b.get(b)
            if nxt is not None and nxt not in S:
                S.add(nxt)
                queue.append(nxt)
    nbhd = {b for a in S for b in nbrs[a]}
    assert len(nbhd) < len(S)
    return HallResult(dict(match_a), S)


@dataclass
class CrossingResult:
    matching: Dict[Vertex, Vertex]
    precondition_ok: bool
    route: str


def crossing_match(A: Sequence[Vertex], B: Sequence[Vertex], adj: Mapping[Vertex, Iterable[Vertex]],
                   rho: float, xi: float, n: Optional[int] = None) -> CrossingResult:
    """Matching covering A in a bipartite graph with dense A-side degrees.

    Small A (below xi*n/rho) is handled greedily; otherwise the Hall engine
    runs.  The degree and order conditions are checked and reported.
    """
    n = len(A) + len(B) if n is None else n
    nbrs = {a: list(adj.get(a, ())) for a in A}
    deg_ok = all(len(nbrs[a]) >= 2 * rho * len(A) for a in A)
    size_ok = len(A) + len(B) <= rho * len(A) / xi if A else True
    if len(A) < xi * n / rho:
        used: Set[Vertex] = set()
        out: Dict[Vertex, Vertex] = {}
        for a in A:
            b = next((b for b in nbrs[a] if b not in used), None)
            if b is None:
                break
            out[a] = b
            used.add(b)
        else:
            return CrossingResult(out, deg_ok, "greedy")
    res = hall_bipartite(A, nbrs)
    if not res.covers:
        raise NoMatching(res.violator)
    return CrossingResult(res.matching, deg_ok and size_ok, "hall")


def _adjacency(vertices: Sequence[Vertex], edges: Iterable[Tuple[Vertex, Vertex]]) -> Dict[Vertex, Set[Vertex]]:
    adj: Dict[Vertex, Set[Vertex]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _exhaustive_perfect(vertices: List[Vertex], adj: Mapping[Vertex, Set[Vertex]]) -> Optional[List[Tuple[Vertex, Vertex]]]:
    if not vertices:
        return []
    v = vertices[0]
    for u in sorted(adj[v] & set(vertices[1:]), key=vertices.index):
        rest = [w for w in vertices[1:] if w != u]
        sub = _exhaustive_perfect(rest, adj)
        if sub is not None:
            return [(v, u)] + sub
    return None


@dataclass
class PerfectResult:
    pairs: List[Tuple[Vertex, Vertex]]
    attempts: int
    min_degree_ok: bool
    route: str


def dense_perfect_match(vertices: Sequence[Vertex], edges: Iterable[Tuple[Vertex, Vertex]], rho: float,
                        xi: float, retries: int = 20, seed: int = 0) -> PerfectResult:
    """Perfect matching through a random balanced bipartition and Hall.

    Retries with fresh bipartitions, then falls back to exhaustive search
    (at most 20 vertices) or a maximum matching (blossom) before giving up.
    """
    verts = list(vertices)
    m = len(verts)
    if m % 2:
        raise OddOrder(f"{m} vertices")
    adj = _adjacency(verts, edges)
    min_deg_ok = all(len(adj[v]) >= 3 * rho * m / 4 for v in verts)
    rng = random.Random(seed)
    for attempt in range(1, retries + 1):
        order = verts[:]
        rng.shuffle(order)
        A, B = order[: m // 2], set(order[m // 2:])
        res = hall_bipartite(A, {a: [b for b in verts if b in B and b in adj[a]] for a in A})
        if res.covers:
            return PerfectResult(sorted(res.matching.items(), key=lambda p: verts.index(p[0])),
                                 attempt, min_deg_ok, "bipartition")
    if m <= 20:
        pairs = _exhaustive_perfect(verts, adj)
        if pairs is not None:
            return PerfectResult(pairs, retries, min_deg_ok, "exhaustive")
    else:
        G = nx.Graph()
        G.add_nodes_from(verts)
        G.add_edges_from((u, v) for u in verts for v in adj[u])
        M = nx.max_weight_matching(G, maxcardinality=True)
        if 2 * len(M) == m:
            pos = {v: i for i, v in enumerate(verts)}
            pairs = sorted((tuple(sorted(p, key=pos.get)) for p in M), key=lambda p: pos[p[0]])
            return PerfectResult(pairs, retries, min_deg_ok, "blossom")
    raise RetriesExhausted(f"no perfect matching after {retries} bipartitions")


def min_deg_bipartite_match(A: Sequence[Vertex], B: Sequence[Vertex],
                            adj: Mapping[Vertex, Iterable[Vertex]]) -> Dict[Vertex, Vertex]:
    """Matching covering A when |A| <= |B| and min deg(A) + min deg(B) >= |A|."""
    nbrs = {a: [b for b in adj.get(a, ())] for a in A}
    bdeg = {b: 0 for b in B}
    for a in A:
        for b in nbrs[a]:
            bdeg[b] += 1
    da = min((len(v) for v in nbrs.values()), default=0)
    db = min(bdeg.values(), default=0)
    if len(A) > len(B) or (A and da + db < len(A)):
        raise PreconditionUnmet(f"|A|={len(A)}, |B|={len(B)}, min degrees {da}+{db}")
    res = hall_bipartite(A, nbrs)
    assert res.covers
    return res.matching


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.graph: List[List[int]] = [[] for _ in range(n)]
        self.to: List[int] = []
        self.cap: List[int] = []

    def add(self, u: int, v: int, c: int) -> int:
        self.graph[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.graph[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def maxflow(self, s: int, t: int) -> int:
        flow = 0
        to, cap, graph = self.to, self.cap, self.graph
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for a in graph[u]:
                    if cap[a] > 0 and level[to[a]] < 0:
                        level[to[a]] = level[u] + 1
                        q.append(to[a])
            if level[t] < 0:
                return flow
            ptr = [0] * self.n
            while True:
                # iterative blocking-flow DFS
                path: List[int] = []
                u = s
                while u != t:
                    while ptr[u] < len(graph[u]):
                        a = graph[u][ptr[u]]
                        if cap[a] > 0 and level[to[a]] == level[u] + 1:
                            break
                        ptr[u] += 1
                    if ptr[u] == len(graph[u]):
                        if not path:
                            break
                        level[u] = -1
                        a = path.pop()
                        u = to[a ^ 1]
                        ptr[u] += 1
                        continue
                    a = graph[u][ptr[u]]
                    path.append(a)
                    u = to[a]
                if u != t:
                    break
                push = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= push
                    cap[a ^ 1] += push
                flow += push

    def reachable(self, s: int) -> Set[int]:
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for a in self.graph[u]:
                if self.cap[a] > 0 and self.to[a] not in seen:
                    seen.add(self.to[a])
                    q.append(self.to[a])
        return seen


def _bounded_flow(nodes: int, s: int, t: int, arcs: List[Tuple[int, int, int, int]]) -> Tuple[Optional[List[int]], Set[int]]:
    """Feasible s-t flow with lower/upper bounds on arcs (u, v, lo, hi).

    Returns per-arc flows, or None with the source side of a minimum cut in
    the auxiliary network as witness.
    """
    S, T = nodes, nodes + 1
    net = _Dinic(nodes + 2)
    excess = [0] * nodes
    ids = []
    for u, v, lo, hi in arcs:
        ids.append(net.add(u, v, hi - lo))
        excess[v] += lo
        excess[u] -= lo
    net.add(t, s, 10 ** 9)
    need = 0
    for v, x in enumerate(excess):
        if x > 0:
            net.add(S, v, x)
            need += x
        elif x < 0:
            net.add(v, T, -x)
    if net.maxflow(S, T) < need:
        return None, net.reachable(S) - {S}
    flows = [lo + net.cap[i ^ 1] for i, (u, v, lo, hi) in zip(ids, arcs)]
    return flows, set()


def _bipartition(vertices: Sequence[int], adj: Mapping[int, Set[int]]) -> Optional[Dict[int, int]]:
    side: Dict[int, int] = {}
    for r in vertices:
        if r in side:
            continue
        side[r] = 0
        q = deque([r])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if w not in side:
                    side[w] = 1 - side[u]
                    q.append(w)
                elif side[w] == side[u]:
                    return None
    return side


def gf_factor(vertices: Sequence[int], edges: Sequence[Edge], g: Mapping[int, int],
              f: Mapping[int, int]) -> List[int]:
    """Indices of a spanning subgraph F with g(v) <= d_F(v) <= f(v).

    Bipartite graphs: flow with lower bounds, exact.  When g < f everywhere:
    flow on the bipartite double cover gives a half-integral factor, rounded
    by alternating along Euler circuits (exact, since every vertex has slack
    in some direction).  Otherwise: maximum-weight matching on the standard
    vertex-splitting gadget.  Infeasibility raises Infeasible with a witness.
    """
    verts = list(vertices)
    for v in verts:
        if not 0 <= g[v] <= f[v]:
            raise ValueError(f"need 0 <= g <= f at {v}")
    adj = _adjacency(verts, edges)
    for v in verts:
        if g[v] > len(adj[v]):
            raise Infeasible({"vertex": v, "reason": "g exceeds degree"})
    side = _bipartition(verts, adj)
    if side is not None:
        out = _gf_bipartite(verts, edges, g, f, side)
    elif all(g[v] < f[v] for v in verts):
        out = _gf_slack(verts, edges, g, f)
    else:
        out = _gf_gadget(verts, edges, g, f)
    deg = {v: 0 for v in verts}
    for i in out:
        u, v = edges[i]
        deg[u] += 1
        deg[v] += 1
    assert all(g[v] <= deg[v] <= f[v] for v in verts)
    return out


def _gf_bipartite(verts, edges, g, f, side) -> List[int]:
    index = {v: i for i, v in enumerate(verts)}
    s, t = len(verts), len(verts) + 1
    arcs = []
    for v in verts:
        if side[v] == 0:
            arcs.append((s, index[v], g[v], f[v]))
        else:
            arcs.append((index[v], t, g[v], f[v]))
    base = len(arcs)
    for u, v in edges:
        a, b = (u, v) if side[u] == 0 else (v, u)
        arcs.append((index[a], index[b], 0, 1))
    flows, cut = _bounded_flow(len(verts) + 2, s, t, arcs)
    if flows is None:
        raise Infeasible({"cut": sorted(verts[i] for i in cut if i < len(verts)), "route": "bipartite flow"})
    return [i for i in range(len(edges)) if flows[base + i] == 1]


def _gf_slack(verts, edges, g, f) -> List[int]:
    index = {v: i for i, v in enumerate(verts)}
    k = len(verts)
    s, t = 2 * k, 2 * k + 1
    arcs = []
    for v in verts:
        arcs.append((s, index[v], g[v], f[v]))
        arcs.append((k + index[v], t, g[v], f[v]))
    base = len(arcs)
    for u, v in edges:
        arcs.append((index[u], k + index[v], 0, 1))
        arcs.append((index[v], k + index[u], 0, 1))
    flows, cut = _bounded_flow(2 * k + 2, s, t, arcs)
    if flows is None:
        raise Infeasible({"cut": sorted(i for i in cut if i < 2 * k), "route": "double cover flow"})
    # twice the half-integral value of each edge
    twice = [flows[base + 2 * i] + flows[base + 2 * i + 1] for i in range(len(edges))]
    chosen = {i for i, x in enumerate(twice) if x == 2}
    half = [i for i, x in enumerate(twice) if x == 1]
    value = {v: 0.0 for v in verts}
    for i, x in enumerate(twice):
        if x:
            u, v = edges[i]
            value[u] += x / 2
            value[v] += x / 2
    # Euler circuits on the half edges, with a dummy vertex joined to odd vertices
    dummy = object()
    ladj: Dict[object, List[Tuple[object, int]]] = {}
    for i in half:
        u, v = edges[i]
        ladj.setdefault(u, []).append((v, i))
        ladj.setdefault(v, []).append((u, i))
    extra = -1
    for v in list(ladj):
        if len(ladj[v]) % 2:
            ladj.setdefault(dummy, []).append((v, extra))
            ladj[v].append((dummy, extra))
            extra -= 1
    used: Set[int] = set()
    ptr = {v: 0 for v in ladj}

    def circuit(start) -> List[Tuple[object, int]]:
        # Hierholzer; returns list of (vertex, edge used to reach it)
        stack = [(start, None)]
        out = []
        while stack:
            v, via = stack[-1]
            lst = ladj[v]
            while ptr[v] < len(lst) and lst[ptr[v]][1] in used:
                ptr[v] += 1
            if ptr[v] == len(lst):
                out.append(stack.pop())
            else:
                w, i = lst[ptr[v]]
                used.add(i)
                stack.append((w, i))
        return out[::-1]

    starts = ([dummy] if dummy in ladj else []) + [v for v in verts if v in ladj]
    for st in starts:
        tour = circuit(st)
        seq = [i for _, i in tour[1:]]
        if not seq:
            continue
        first_bit = 1
        if st is not dummy and len(seq) % 2:
            # the start vertex takes both end edges; pick the direction it can absorb
            first_bit = 1 if value[st] + 1 <= f[st] else 0
        bit = first_bit
        for i in seq:
            if i >= 0 and bit:
                chosen.add(i)
            bit ^= 1
    return sorted(chosen)


def _gf_gadget(verts, edges, g, f) -> List[int]:
    """Every vertex v becomes one port per incident edge, d(v)-f(v) hard
    and f(v)-g(v) soft inner vertices joined to all its ports.  Ports and
    hard inner vertices must be matched; edges between ports are factor edges."""
    G = nx.Graph()
    must: Set[object] = set()
    inc: Dict[int, List[int]] = {v: [] for v in verts}
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        inc[v].append(i)
    for v in verts:
        d = len(inc[v])
        ports = [("p", v, i) for i in inc[v]]
        hard = [("h", v, j) for j in range(max(d - f[v], 0))]
        soft = [("s", v, j) for j in range(f[v] - g[v] if f[v] <= d else d - g[v])]
        must.update(ports)
        must.update(hard)
        for p in ports:
            for x in hard + soft:
                G.add_edge(p, x)
        G.add_nodes_from(ports + hard + soft)
    for i, (u, v) in enumerate(edges):
        G.add_edge(("p", u, i), ("p", v, i))
    for a, b in G.edges:
        G[a][b]["weight"] = (a in must) + (b in must)
    M = nx.max_weight_matching(G)
    covered = {x for p in M for x in p}
    missing = must - covered
    if missing:
        raise Infeasible({"unmatched": len(missing), "route": "gadget matching"})
    out = []
    for a, b in M:
        if a[0] == "p" and b[0] == "p":
            out.append(a[2])
    return sorted(out)
