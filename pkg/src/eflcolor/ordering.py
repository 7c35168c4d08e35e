"""Edge orderings, forward degrees and the reordering procedure."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set

from . import kernels
from .hypercore import LinearHypergraph, line_graph, volume


class IterCapExceeded(RuntimeError):
    def __init__(self, ordering: "EdgeOrdering"):
        super().__init__("reorder hit its iteration cap; ordering is not certified")
        self.ordering = ordering


@dataclass
class EdgeOrdering:
    perm: List[int]
    pos: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.pos:
            self.pos = [0] * len(self.perm)
            for i, e in enumerate(self.perm):
                self.pos[e] = i
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError("ordering is not a permutation")

    def precedes(self, e: int, f: int) -> bool:
        return self.pos[e] < self.pos[f]


def size_order(H: LinearHypergraph, idx: Optional[Sequence[int]] = None) -> EdgeOrdering:
    """Non-increasing size, ties by edge index.  With idx, orders that subset
    (the result then permutes positions of idx, not global indices)."""
    items = range(H.m) if idx is None else idx
    return EdgeOrdering(sorted(items, key=lambda i: (-len(H.edges[i]), i)))


def fwddeg_all(H: LinearHypergraph, ord: EdgeOrdering, adj: Optional[List[Set[int]]] = None) -> List[int]:
    adj = line_graph(H) if adj is None else adj
    return kernels.forward_degrees(adj, ord.pos)


def fwddeg(H: LinearHypergraph, ord: EdgeOrdering, e: int) -> int:
    mine = H.edges[e]
    return sum(1 for f in range(H.m) if f != e and ord.pos[f] < ord.pos[e]
               and not set(mine).isdisjoint(H.edges[f]))


@dataclass
class AuditRow:
    edge: int
    size: int
    fwddeg: int
    m1: int
    m2: int
    lhs: float
    rhs: float
    ok_i: bool
    ok_ii: Optional[bool]


def audit_fwd_inequalities(H: LinearHypergraph, ord: EdgeOrdering, alpha1: float,
                           alpha2: float, tau: float) -> List[AuditRow]:
    """Check the forward-neighbour counting inequalities edge by edge.

    m1 counts forward neighbours of size at least (1+alpha1)|e|, m2 those
    between |e|/(1+alpha2) and that.  Edges with |e| <= 1+alpha2 are skipped.
    """
    n = H.n
    adj = line_graph(H)
    rows = []
    for e in ord.perm:
        r = len(H.edges[e])
        if r <= 1 + alpha2:
            continue
        fwd = [f for f in adj[e] if ord.pos[f] < ord.pos[e]]
        big = (1 + alpha1) * r
        m1 = sum(1 for f in fwd if len(H.edges[f]) >= big)
        m2 = sum(1 for f in fwd if big > len(H.edges[f]) >= r / (1 + alpha2))
        lhs = (1 + alpha1) * m1 + m2 / (1 + alpha2)
        rhs = n + (1 + alpha2) * n / (r - 1 - alpha2)
        ok_ii = None
        if m1 + m2 >= (1 - tau) * n and alpha1 > 0:
            bound = (tau + (1 + alpha2) * (1 + alpha2 * r) / (r - 1 - alpha2)) * n / alpha1
            ok_ii = m1 <= bound + 1e-9
        rows.append(AuditRow(e, r, len(fwd), m1, m2, lhs, rhs, lhs <= rhs + 1e-9, ok_ii))
    return rows


@dataclass
class ReorderOutcome:
    kind: str  # "good" or "window"
    ordering: EdgeOrdering
    window: List[int] = field(default_factory=list)
    e_star: Optional[int] = None
    stats: Dict[str, float] = field(default_factory=dict)

    @property
    def good(self) -> bool:
        return self.kind == "good"


def reorder(H: LinearHypergraph, tau: float, K: float, iter_cap: Optional[int] = None) -> ReorderOutcome:
    """Fix forward degrees from the back of the size order.

    The prefix stays in size order; a certified tail grows at its front.  The
    last prefix edge moves to the tail when its forward degree is at most
    (1-tau)n.  Otherwise one of its prefix neighbours with low enough forward
    degree moves behind it (fewest prefix neighbours first, then lowest
    index).  When no such neighbour exists the last prefix edge is e*.
    """
    if not (0 < tau < 1) or K < 1:
        raise ValueError("need 0 < tau < 1 and K >= 1")
    n = H.n
    m = H.m
    limit = (1 - tau) * n
    cap = m + 1 if iter_cap is None else iter_cap
    adj = line_graph(H)
    prefix = size_order(H).perm
    in_prefix = [True] * m
    cnt = [len(adj[e]) for e in range(m)]
    tail: deque = deque()
    steps = 0

    def drop(f: int) -> None:
        in_prefix[f] = False
        for g in adj[f]:
            cnt[g] -= 1
        tail.appendleft(f)

    while prefix:
        steps += 1
        if steps > cap:
            raise IterCapExceeded(EdgeOrdering(prefix + list(tail)))
        e = prefix[-1]
        if cnt[e] <= limit:
            prefix.pop()
            drop(e)
            continue
        best = None
        for f in adj[e]:
            if in_prefix[f] and cnt[f] <= limit:
                if best is None or (cnt[f], f) < (cnt[best], best):
                    best = f
        if best is None:
            break
        prefix.remove(best)
        drop(best)

    ordering = EdgeOrdering(prefix + list(tail))
    fwd = kernels.forward_degrees(adj, ordering.pos)
    precondition = 1 - tau - 7 * tau ** 0.25 / K
    if not prefix:
        assert max(fwd, default=0) <= math.floor(limit)
        return ReorderOutcome("good", ordering, stats={"steps": steps, "precondition": precondition,
                                                       "max_fwddeg": max(fwd, default=0)})
    e_star = prefix[-1]
    top = (1 + 3 * tau ** 0.25 * K ** 4) * len(H.edges[e_star])
    window = [f for f in prefix if len(H.edges[f]) <= top]
    sizes = [len(H.edges[f]) for f in window]
    stats = {
        "steps": steps,
        "precondition": precondition,
        "max_size": max(sizes),
        "min_size": min(sizes),
        "volume": volume(H, window),
        "volume_target": max(precondition, 0.0) ** 2 / (1 + 3 * tau ** 0.25 * K ** 4),
        "max_fwddeg": max(fwd, default=0),
    }
    out = ReorderOutcome("window", ordering, window, e_star, stats)
    assert window_postconditions(H, out, tau)
    return out


def window_postconditions(H: LinearHypergraph, out: ReorderOutcome, tau: float) -> bool:
    """Everything after e* has forward degree <= (1-tau)n, and sizes are
    non-increasing up to e*."""
    ordering = out.ordering
    fwd = fwddeg_all(H, ordering)
    k = ordering.pos[out.e_star]
    o1 = all(fwd[f] <= (1 - tau) * H.n for f in ordering.perm[k + 1:])
    sizes = [len(H.edges[f]) for f in ordering.perm[:k + 1]]
    o2 = all(a >= b for a, b in zip(sizes, sizes[1:]))
    return o1 and o2
