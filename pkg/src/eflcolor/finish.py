"""Finishing colorers for graph edges and the exact chromatic-index oracle."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from . import kernels
from .hypercore import EdgeColoring, LinearHypergraph, line_graph
from .matching import PreconditionUnmet, hall_bipartite, min_deg_bipartite_match

Edge = Tuple[int, int]


class MatchFailed(RuntimeError):
    def __init__(self, vertex: int):
        super().__init__(f"no matching for the edges at vertex {vertex}")
        self.vertex = vertex


class BudgetExceeded(RuntimeError):
    def __init__(self, lower: int, upper: int):
        super().__init__(f"search budget exhausted; chromatic index in [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper


class _Stuck(Exception):
    pass


def _check_simple(n: int, edges: Sequence[Edge]) -> None:
    seen = set()
    for u, v in edges:
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"bad edge ({u}, {v})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"parallel edge {key}")
        seen.add(key)


def graph_degrees(n: int, edges: Iterable[Edge]) -> List[int]:
    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    return deg


class _FanColorer:
    """Misra-Gries fan and alternating-path recoloring with k colors."""

    def __init__(self, n: int, k: int):
        self.k = k
        self.at: List[Dict[int, int]] = [dict() for _ in range(n)]
        self.used = [0] * n  # bitmask of colors present at each vertex
        self.col: Dict[Edge, int] = {}

    def free(self, v: int) -> Optional[int]:
        m = self.used[v]
        c = (~m & (m + 1)).bit_length() - 1
        return c if c < self.k else None

    def _set(self, u: int, v: int, c: int) -> None:
        self.col[(min(u, v), max(u, v))] = c
        self.at[u][c] = v
        self.at[v][c] = u
        self.used[u] |= 1 << c
        self.used[v] |= 1 << c

    def _unset(self, u: int, v: int) -> int:
        c = self.col.pop((min(u, v), max(u, v)))
        del self.at[u][c]
        del self.at[v][c]
        self.used[u] &= ~(1 << c)
        self.used[v] &= ~(1 << c)
        return c

    def color(self, x: int, y: int) -> None:
        c = self.free(x)
        if c is None:
            raise _Stuck()
        fan = [y]
        in_fan = {y}
        while True:
            last = self.at[fan[-1]]
            if c not in last:
                # c is free at both ends: rotate and close the fan with c
                self._rotate(x, fan, len(fan) - 1)
                self._set(x, fan[-1], c)
                return
            nxt = next((z for col, z in self.at[x].items() if z not in in_fan and col not in last), None)
            if nxt is None:
                break
            fan.append(nxt)
            in_fan.add(nxt)
        d = self.free(fan[-1])
        if d is None:
            raise _Stuck()
        if c != d:
            # invert the c/d path starting at x (it starts with a d edge)
            path = []
            cur, want = x, d
            while want in self.at[cur]:
                nxt = self.at[cur][want]
                path.append((cur, nxt, want))
                cur, want = nxt, (c if want == d else d)
            for u, v, _ in path:
                self._unset(u, v)
            for u, v, w in path:
                self._set(u, v, c if w == d else d)
        i = next((j for j, w in enumerate(fan) if d not in self.at[w]), None)
        if i is None:
            raise _Stuck()
        self._rotate(x, fan, i)
        self._set(x, fan[i], d)

    def _rotate(self, x: int, fan: List[int], i: int) -> None:
        for j in range(i):
            cc = self._unset(x, fan[j + 1])
            self._set(x, fan[j], cc)


def _run_fans(n: int, edges: Sequence[Edge], k: int, plan: Sequence[Tuple[int, int]]) -> List[int]:
    fc = _FanColorer(n, k)
    for x, y in plan:
        fc.color(x, y)
    return [fc.col[(min(u, v), max(u, v))] for u, v in edges]


def _delta_plan(edges: Sequence[Edge], tops: Sequence[int]) -> List[Tuple[int, int]]:
    """Edge order and fan centers for which Delta colors always suffice when
    at most two vertices attain the maximum degree: edges away from them
    first, then their edges centered at them, the edge joining them last."""
    a = tops[0]
    b = tops[1] if len(tops) > 1 else None
    rest, at_a, at_b, joint = [], [], [], []
    for u, v in edges:
        if {u, v} == {a, b}:
            joint.append((a, b))
        elif a in (u, v):
            at_a.append((a, v if u == a else u))
        elif b is not None and b in (u, v):
            at_b.append((b, v if u == b else u))
        else:
            rest.append((u, v))
    return rest + at_a + at_b + joint


def vizing(n: int, edges: Sequence[Edge], seed: int = 0, exact_below: int = 12,
           retries: int = 3, retry_edges: int = 20000) -> EdgeColoring:
    """Proper edge coloring of a simple graph with at most Delta+1 colors.

    With at most two vertices of maximum degree the fan ordering of
    _delta_plan gives Delta colors.  Otherwise a Delta+1 coloring is built
    first and Delta colors are then attempted with shuffled edge orders
    (skipped above retry_edges edges) and, on graphs with at most
    exact_below vertices, by exact search.
    """
    edges = [tuple(e) for e in edges]
    _check_simple(n, edges)
    if not edges:
        return EdgeColoring([], 0)
    deg = graph_degrees(n, edges)
    delta = max(deg)
    tops = [v for v in range(n) if deg[v] == delta]
    route = "fans"
    if len(tops) <= 2:
        colors = _run_fans(n, edges, delta, _delta_plan(edges, tops))
        route = "fans, delta plan"
    else:
        colors = _run_fans(n, edges, delta + 1, edges)
        if len(set(colors)) > delta:
            tries = retries if len(edges) <= retry_edges else 0
            better = _try_delta(n, edges, delta, seed, exact_below, tries)
            if better is not None:
                colors, route = better
    k = max(colors) + 1
    assert k <= delta + 1
    col = EdgeColoring(colors, k)
    assert _graph_proper(n, edges, colors)
    col.meta["route"] = route
    return col


def _try_delta(n, edges, delta, seed, exact_below, retries):
    rng = random.Random(seed)
    for _ in range(retries):
        order = edges[:]
        rng.shuffle(order)
        try:
            return _run_fans(n, edges, delta, order), "fans, shuffled delta"
        except _Stuck:
            continue
    # Delta colors cover at most Delta * floor(n/2) edges
    if n <= exact_below and len(edges) <= delta * (n // 2):
        adj = _graph_line(n, edges)
        status, cols = kernels.color_search(adj, delta)
        if status == 1:
            return list(cols), "exact delta search"
    return None


def _graph_line(n: int, edges: Sequence[Edge]) -> List[Set[int]]:
    inc: List[List[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        inc[u].append(i)
        inc[v].append(i)
    adj: List[Set[int]] = [set() for _ in edges]
    for lst in inc:
        for i in lst:
            adj[i].update(lst)
    for i in range(len(edges)):
        adj[i].discard(i)
    return adj


def _graph_proper(n: int, edges: Sequence[Edge], colors: Sequence[int]) -> bool:
    seen: List[Set[int]] = [set() for _ in range(n)]
    for (u, v), c in zip(edges, colors):
        if c is None or c in seen[u] or c in seen[v]:
            return False
        seen[u].add(c)
        seen[v].add(c)
    return True


def hall_finish(n: int, edges: Sequence[Edge], palette: Sequence[int], forbidden: Mapping[int, Set[int]],
                U: Iterable[int], delta: float, check: bool = True) -> EdgeColoring:
    """Color a graph whose edges all meet U, avoiding forbidden[w] at each end.

    The vertices of U are handled in increasing order; at u the uncolored
    edges at u are matched to colors allowed at both ends and unused at
    both ends.  Raises PreconditionUnmet when (i)-(iv) or |C| >= 7*delta*n
    fail and check is set.
    """
    edges = [tuple(e) for e in edges]
    _check_simple(n, edges)
    pal = list(palette)
    pal_set = set(pal)
    U = sorted(set(U))
    Uset = set(U)
    forb = {v: set(forbidden.get(v, ())) & pal_set for v in range(n)}
    deg = graph_degrees(n, edges)
    if check:
        _hall_preconditions(n, edges, pal, forb, Uset, deg, delta)
    colors: Dict[Edge, int] = {}
    used: List[Set[int]] = [set() for _ in range(n)]
    nbrs: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for u in U:
        A = sorted(w for w in nbrs[u] if (min(u, w), max(u, w)) not in colors)
        if not A:
            continue
        B = [c for c in pal if c not in forb[u] and c not in used[u]]
        adj = {w: [c for c in B if c not in forb[w] and c not in used[w]] for w in A}
        try:
            match = min_deg_bipartite_match(A, B, adj)
        except PreconditionUnmet:
            res = hall_bipartite(A, adj)
            if not res.covers:
                raise MatchFailed(u)
            match = res.matching
        for w, c in match.items():
            colors[(min(u, w), max(u, w))] = c
            used[u].add(c)
            used[w].add(c)
    out = [colors[(min(u, v), max(u, v))] for u, v in edges]
    for (u, v), c in zip(edges, out):
        assert c not in forb[u] and c not in forb[v]
    assert _graph_proper(n, edges, out)
    return EdgeColoring(out, max(pal, default=-1) + 1)


def _hall_preconditions(n, edges, pal, forb, Uset, deg, delta) -> None:
    bad = []
    if len(pal) < 7 * delta * n:
        bad.append(f"|C|={len(pal)} < 7*delta*n")
    if len(Uset) > delta * n:
        bad.append(f"|U|={len(Uset)} > delta*n")
    if any(u not in Uset and v not in Uset for u, v in edges):
        bad.append("an edge misses U")
    mult: Dict[int, int] = {}
    for v in range(n):
        if deg[v] > len(pal) - len(forb[v]):
            bad.append(f"degree of {v} exceeds its allowed colors")
            break
        if len(forb[v]) > delta * n:
            bad.append(f"|C_{v}| > delta*n")
            break
        for c in forb[v]:
            mult[c] = mult.get(c, 0) + 1
    if any(x > delta * n for x in mult.values()):
        bad.append("a color is forbidden at more than delta*n vertices")
    if bad:
        raise PreconditionUnmet("; ".join(bad))


@dataclass
class DeltaResult:
    coloring: EdgeColoring
    applicable: bool
    hypotheses: Dict[str, bool] = field(default_factory=dict)
    route: str = ""


def lower_regular_sampled(n: int, edges: Sequence[Edge], p: float, eps: float, trials: int = 200,
                          seed: int = 0) -> Tuple[bool, float]:
    """Check e(S,T) >= (p - eps)|S||T| on random disjoint S, T of size ceil(eps*n).

    Returns (ok, worst margin)."""
    size = max(1, math.ceil(eps * n))
    if 2 * size > n:
        return True, 0.0
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    rng = random.Random(seed)
    worst = math.inf
    for _ in range(trials):
        pick = rng.sample(range(n), 2 * size)
        S, T = pick[:size], set(pick[size:])
        e = sum(len(adj[s] & T) for s in S)
        worst = min(worst, e - (p - eps) * size * size)
    return worst >= 0, worst


def delta_edge_color(n: int, edges: Sequence[Edge], p: float = 0.5, eps_reg: float = 0.1,
                     seed: int = 0, exact_limit: int = 14) -> DeltaResult:
    """Try for a Delta-edge-coloring.

    The hypotheses (enough vertices below maximum degree, sampled lower
    regularity) are recorded.  Graphs with at most exact_limit vertices are
    searched exactly; larger ones go through vizing.  Without success the
    result is not applicable and carries vizing's Delta+1 coloring.
    """
    edges = [tuple(e) for e in edges]
    _check_simple(n, edges)
    if not edges:
        return DeltaResult(EdgeColoring([], 0), True, {}, "empty")
    deg = graph_degrees(n, edges)
    delta = max(deg)
    low = sum(1 for d in deg if d < delta)
    reg_ok, _ = lower_regular_sampled(n, edges, p, eps_reg, seed=seed)
    hyp = {"low_degree_vertices": low >= delta, "lower_regular": reg_ok}
    if n <= exact_limit:
        status, cols = kernels.color_search(_graph_line(n, edges), delta)
        if status == 1:
            return DeltaResult(EdgeColoring(list(cols), delta), True, hyp, "exact search")
    col = vizing(n, edges, seed=seed, exact_below=0)
    ok = col.used <= delta
    return DeltaResult(col, ok, hyp, "vizing" if ok else "not applicable")


def _matching_number(adj: List[Set[int]]) -> int:
    """Largest set of pairwise disjoint edges: independence number of the line graph."""
    m = len(adj)
    masks = [sum(1 << j for j in adj[i]) for i in range(m)]
    best = 0

    def rec(avail: int, size: int) -> None:
        nonlocal best
        if avail == 0:
            best = max(best, size)
            return
        if size + bin(avail).count("1") <= best:
            return
        i = (avail & -avail).bit_length() - 1
        rec(avail & ~masks[i] & ~(1 << i), size + 1)
        if masks[i] & avail:
            rec(avail & ~(1 << i), size)

    rec((1 << m) - 1, 0)
    return best


def _clique_bound(H: LinearHypergraph, adj: List[Set[int]]) -> int:
    best = max((len(lst) for lst in H.incidence()), default=0)
    # greedily extend each vertex star
    for lst in H.incidence():
        clique = list(lst)
        for f in range(H.m):
            if f not in clique and all(f in adj[g] for g in clique):
                clique.append(f)
        best = max(best, len(clique))
    return best


def exact_chromatic_index(H: LinearHypergraph, limit: Optional[int] = 24,
                          node_limit: int = 5_000_000) -> Tuple[int, EdgeColoring]:
    """Chromatic index by branch and bound on the line graph.

    Lower bound: the largest of the maximum degree, a clique of the line
    graph and ceil(e(H)/matching number).  Upper bound: DSATUR.  Each k in
    between is decided by the color_search kernel.
    """
    if limit is not None and H.m > limit:
        raise BudgetExceeded(0, H.m)
    if H.m == 0:
        return 0, EdgeColoring([], 0)
    adj = line_graph(H)
    upper_cols = list(kernels.dsatur(adj))
    if all(len(e) == 2 for e in H.edges):
        # a fan coloring is often tighter on graphs; either way the answer
        # is certified by a proper coloring meeting a proven lower bound
        fan = vizing(H.n, H.edges, exact_below=0).colors
        if max(fan) < max(upper_cols):
            upper_cols = list(fan)
    upper = max(upper_cols) + 1
    lower = _clique_bound(H, adj)
    if lower < upper and H.m <= 64:
        lower = max(lower, -(-H.m // _matching_number(adj)))
    assert all(upper_cols[a] != upper_cols[b] for a in range(H.m) for b in adj[a])
    for k in range(lower, upper):
        status, cols = kernels.color_search(adj, k, node_limit)
        if status == 1:
            return k, EdgeColoring(list(cols), k)
        if status < 0:
            raise BudgetExceeded(k, upper)
    return upper, EdgeColoring(list(upper_cols), upper)
