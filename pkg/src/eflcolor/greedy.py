"""Greedy colorers: list greedy with bounded classes, class splitting, medium
edges, DSATUR on line graphs and the large/medium edge pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set

from . import kernels
from .hypercore import EdgeColoring, Hierarchy, LinearHypergraph, classify, line_graph, volume
from .ordering import EdgeOrdering, reorder, size_order


class ListExhausted(RuntimeError):
    def __init__(self, edge: int):
        super().__init__(f"no admissible color left for edge {edge}")
        self.edge = edge


class BudgetExceeded(RuntimeError):
    def __init__(self, used: int, budget: float):
        super().__init__(f"used {used} colors, budget {budget:.2f}")
        self.used = used
        self.budget = budget


def cover_sizes(H: LinearHypergraph, colors: Sequence[Optional[int]]) -> Dict[int, int]:
    """Number of vertices touched by each color class."""
    out: Dict[int, int] = {}
    for e, c in zip(H.edges, colors):
        if c is not None:
            out[c] = out.get(c, 0) + len(e)
    return out


def class_sizes(colors: Iterable[Optional[int]]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for c in colors:
        if c is not None:
            out[c] = out.get(c, 0) + 1
    return out


def is_bounded(H: LinearHypergraph, colors: Sequence[Optional[int]], alpha: float,
               only: Optional[Set[int]] = None) -> bool:
    """Every color is used once or covers at most alpha*n vertices."""
    cov = cover_sizes(H, colors)
    cnt = class_sizes(colors)
    return all(cnt[c] == 1 or cov[c] <= alpha * H.n + 1e-9
               for c in cov if only is None or c in only)


def list_greedy(H: LinearHypergraph, ord: EdgeOrdering | Sequence[int], lists: Mapping[int, Sequence[int]] | Sequence[Sequence[int]],
                alpha1: float, alpha2: float, fixed: Optional[Mapping[int, int]] = None,
                spill: Optional[int] = None) -> EdgeColoring:
    """Color the edges of ord (an EdgeOrdering or a list of edge ids) in order.

    Edges of size at least alpha2*n/2 go first and each takes a color no
    other edge has, which is then reserved.  Every other edge takes the
    lowest list color not on a colored neighbour and not on a class already
    covering alpha2*n/2 vertices.  Precolored edges in `fixed` are treated as
    colored neighbours.  When a list runs dry, `spill` (if given) is the
    first id of an overflow range; otherwise ListExhausted is raised.
    alpha1 is the list slack the caller promises; it is not used by the rule.
    """
    n = H.n
    perm = ord.perm if isinstance(ord, EdgeOrdering) else list(ord)
    colors: List[Optional[int]] = [None] * H.m
    cover: Dict[int, int] = {}
    count: Dict[int, int] = {}
    for e, c in (fixed or {}).items():
        colors[e] = c
        cover[c] = cover.get(c, 0) + len(H.edges[e])
        count[c] = count.get(c, 0) + 1
    inc = H.incidence()
    half = alpha2 * n / 2
    locked: Set[int] = set()
    big = [e for e in perm if len(H.edges[e]) >= half]
    rest = [e for e in perm if len(H.edges[e]) < half]
    saturated = {c for c, v in cover.items() if v >= half}
    spilled = 0

    def nbr_colors(e: int) -> Set[int]:
        out = set()
        for v in H.edges[e]:
            for f in inc[v]:
                c = colors[f]
                if c is not None and f != e:
                    out.add(c)
        return out

    def take(e: int, c: int) -> None:
        colors[e] = c
        cover[c] = cover.get(c, 0) + len(H.edges[e])
        count[c] = count.get(c, 0) + 1
        if cover[c] >= half:
            saturated.add(c)

    for group, exclusive in ((big, True), (rest, False)):
        for e in group:
            if exclusive:
                bad = set(count) | locked
            else:
                bad = nbr_colors(e) | saturated | locked
            choice = next((c for c in lists[e] if c not in bad), None)
            if choice is None:
                if spill is None:
                    raise ListExhausted(e)
                choice = spill
                while choice in bad:
                    choice += 1
                spilled += 1
            take(e, choice)
            if exclusive:
                locked.add(choice)
    col = EdgeColoring(colors, max((c for c in colors if c is not None), default=-1) + 1)
    col.meta["spilled"] = spilled
    return col


def split_bounded(H: LinearHypergraph, col: EdgeColoring, alpha: float, r: int) -> EdgeColoring:
    """Split classes covering more than alpha*n vertices.

    Edges of size at least alpha*n/2 become singleton classes; the others are
    packed in index order into parts covering at most alpha*n vertices.  The
    first part keeps the old color and later parts get fresh colors.
    """
    n = H.n
    colors = list(col.colors)
    nxt = col.palette_size
    cov = cover_sizes(H, colors)
    classes: Dict[int, List[int]] = {}
    for e, c in enumerate(colors):
        if c is not None:
            classes.setdefault(c, []).append(e)
    for c in sorted(classes):
        if cov[c] <= alpha * n or len(classes[c]) == 1:
            continue
        parts: List[List[int]] = []
        cur: List[int] = []
        load = 0
        for e in classes[c]:
            k = len(H.edges[e])
            if k >= alpha * n / 2:
                parts.append([e])
                continue
            if load + k > alpha * n:
                parts.append(cur)
                cur, load = [], 0
            cur.append(e)
            load += k
        if cur:
            parts.append(cur)
        for j, part in enumerate(parts):
            if j == 0:
                continue
            for e in part:
                colors[e] = nxt
            nxt += 1
    return EdgeColoring(colors, nxt)


def dsatur_line(H: LinearHypergraph, idx: Optional[Sequence[int]] = None) -> EdgeColoring:
    """DSATUR on the line graph of H (or of the edge subset idx)."""
    idx = list(range(H.m)) if idx is None else list(idx)
    sub = H.sub(idx)
    local = kernels.dsatur(line_graph(sub)) if idx else []
    colors: List[Optional[int]] = [None] * H.m
    for i, c in zip(idx, local):
        colors[i] = c
    return EdgeColoring(colors, max(local, default=-1) + 1)


def color_medium(H: LinearHypergraph, gamma: float, r0: int, r1: int,
                 idx: Optional[Sequence[int]] = None, strict: bool = False) -> EdgeColoring:
    """DSATUR on the medium edges, then split into gamma-bounded classes."""
    idx = [i for i in range(H.m) if r1 < len(H.edges[i]) <= r0] if idx is None else list(idx)
    base = dsatur_line(H, idx)
    col = split_bounded(H, base, gamma, r1 - 1).compact()
    if strict:
        deg = H.sub(idx).max_degree()
        if deg <= H.n / (r1 - 1) and base.used <= 2 * H.n / r1 and col.used > gamma * H.n:
            raise BudgetExceeded(col.used, gamma * H.n)
    return col


@dataclass
class LargeEdgeResult:
    coloring: EdgeColoring
    type_tag: str
    c_med: Set[int]
    covers: Dict[int, int]
    huge_colors: Set[int]
    clauses: Dict[str, bool] = field(default_factory=dict)
    trace: List[str] = field(default_factory=list)
    fpp_volume: float = 0.0
    budget: float = 0.0


class _Palette:
    def __init__(self, start: int = 0):
        self.next = start

    def block(self, k: int) -> List[int]:
        out = list(range(self.next, self.next + max(k, 0)))
        self.next += max(k, 0)
        return out


def _reorder_sub(H: LinearHypergraph, idx: List[int], tau: float, K: float):
    """reorder on an edge subset; returns (outcome, global perm, global window, global e*)."""
    out = reorder(H.sub(idx), tau, K)
    perm = [idx[i] for i in out.ordering.perm]
    window = [idx[i] for i in out.window]
    e_star = idx[out.e_star] if out.e_star is not None else None
    return out, perm, window, e_star


def _merge(colors: List[Optional[int]], part: Sequence[Optional[int]], idx: Iterable[int]) -> None:
    for i in idx:
        if part[i] is not None:
            colors[i] = part[i]


def color_large_medium(H: LinearHypergraph, hier: Hierarchy, seed: int = 0,
                       idx: Optional[Sequence[int]] = None) -> LargeEdgeResult:
    """Color the medium and large edges following the large-edge case analysis.

    idx defaults to all edges of size above r1.  Medium edges are those of
    size at most r0 that are not huge.  The budget routes aim for
    (1-sigma)n colors.  The remaining route, and the extremal route when a
    budget route misses on an instance whose FPP-extremal edges carry
    volume at least 1-delta, give the looser bound.
    """
    n = H.n
    idx = [i for i in range(H.m) if len(H.edges[i]) > hier.r1] if idx is None else sorted(idx)
    ec = classify(H, hier)
    huge = [i for i in idx if ec.huge[i]]
    med = [i for i in idx if not ec.huge[i] and len(H.edges[i]) <= hier.r0]
    med_set = set(med)
    fpp_vol = volume(H, [i for i in idx if ec.fpp_extremal[i]])
    trace: List[str] = []

    result = _type_a(H, hier, idx, huge, med, med_set, trace)
    if result is None:
        result = _type_b(H, hier, idx, huge, med_set, trace, seed)
    elif result.coloring.used > (1 - hier.sigma) * n and fpp_vol >= 1 - hier.delta:
        trace.append("type-A budget missed on FPP-extremal instance; extremal route")
        alt = _type_b(H, hier, idx, huge, med_set, trace, seed)
        if alt.coloring.used <= max(n, result.coloring.used):
            result = alt
    result.trace = trace
    result.fpp_volume = fpp_vol
    _check_clauses(H, hier, idx, huge, med, result)
    return result


def _type_a(H, hier, idx, huge, med, med_set, trace) -> Optional[LargeEdgeResult]:
    n = H.n
    huge_set = set(huge)
    pal = _Palette()
    colors: List[Optional[int]] = [None] * H.m
    # medium edges get their own block
    phi_med = color_medium(H, hier.gamma1, hier.r0, hier.r1, med)
    c_med = set(pal.block(phi_med.palette_size))
    _merge(colors, phi_med.colors, med)

    rest = [i for i in idx if i not in huge_set]
    order1: List[int] = []
    h1_good: List[int] = []
    h1_left: List[int] = []
    if rest:
        out1, perm1, _, e1 = _reorder_sub(H, rest, 1 - hier.gamma2 / 3, hier.gamma2 ** -2)
        order1 = perm1
        if out1.good:
            h1_good = perm1
            trace.append("ordering 1 good")
        else:
            k = perm1.index(e1)
            h1_left, h1_good = perm1[:k + 1], perm1[k + 1:]
            trace.append(f"ordering 1 window at size {len(H.edges[e1])}")
    case = "1"
    if h1_left:
        out2, perm2, w2, e2 = _reorder_sub(H, h1_left, 3 * hier.sigma, 1)
        if out2.good:
            trace.append("ordering 2 good")
        else:
            k = perm2.index(e2)
            h2_good = perm2[k + 1:]
            r3 = len(H.edges[e2])
            trace.append(f"ordering 2 window at size {r3}")
            if r3 >= (1 - hier.delta) * math.sqrt(n):
                trace.append("case 2.2")
                return None
            case = "2.1"
            f_star = w2[0] if w2 else None
            before = perm2[:perm2.index(f_star)] if f_star is not None else []
            h3 = sorted(huge + before)
            out3, perm3, _, _ = _reorder_sub(H, h3, 1 - 1 / 2000, 2000.0 ** 2) if h3 else (None, [], [], None)
            trace.append("case 2.1" + ("" if out3 is None or out3.good else " (ordering 3 not good)"))
            budget = math.floor((1 - 1.5 * hier.sigma) * n)
            # W2 with the sparse colorer, split into beta/5-bounded classes
            w2m = [e for e in w2 if e not in med_set]
            sparse = split_bounded(H, dsatur_line(H, w2m), hier.beta / 5, hier.r0).compact()
            base = pal.next
            pal.block(sparse.palette_size)
            for e in w2m:
                colors[e] = sparse.colors[e] + base
            h3m = [e for e in perm3 if e not in med_set]
            block = pal.block(len(h3m))
            phi3 = list_greedy(H, h3m,
                               {e: block for e in h3m}, hier.sigma / 2, hier.beta / 5,
                               spill=pal.next + n * 4)
            _merge(colors, phi3.colors, h3m)
            c1 = {colors[e] for e in w2m + h3m}
            c2 = pal.block(budget - len(c1))
            c_huge = {colors[e] for e in huge}
            allowed = sorted((c1 | set(c2)) - c_huge)
            todo = [e for e in h2_good + h1_good if e not in med_set]
            fixed = {e: colors[e] for e in w2m + h3m}
            phi2 = list_greedy(H, (todo), {e: allowed for e in todo}, hier.sigma / 2,
                               hier.beta / 5, fixed=fixed, spill=pal.next)
            _merge(colors, phi2.colors, todo)
            return _finish(H, colors, c_med, huge, "A", case, hier)
    trace.append("case 1")
    budget = math.floor((1 - 1.5 * hier.sigma) * n)
    large = [e for e in (huge + h1_left + h1_good) if e not in med_set]
    seen: Set[int] = set()
    large = [e for e in large if not (e in seen or seen.add(e))]
    block = pal.block(budget)
    phi = list_greedy(H, (large), {e: block for e in large}, hier.sigma / 2,
                      hier.beta / 5, spill=pal.next)
    _merge(colors, phi.colors, large)
    return _finish(H, colors, c_med, huge, "A", case, hier)


def _type_b(H, hier, idx, huge, med_set, trace, seed) -> LargeEdgeResult:
    from .extremal import extremal_color

    n = H.n
    thresh = (1 - hier.delta) * math.sqrt(n)
    left = [e for e in idx if len(H.edges[e]) >= thresh]
    left_set = set(left)
    colors: List[Optional[int]] = [None] * H.m
    phi1 = extremal_color(H, hier.delta, idx=left, seed=seed)
    _merge(colors, phi1.colors, left)
    used = {colors[e] for e in left}
    pal_c = list(range(max(n, max(used, default=-1) + 1)))
    c_huge = {colors[e] for e in huge if e in left_set}
    free = [c for c in pal_c if c not in c_huge]
    # C_med: least used colors outside C_huge
    usage = class_sizes(colors)
    ranked = sorted(free, key=lambda c: (usage.get(c, 0), c))
    c_med = set(ranked[:max(1, math.floor(hier.gamma2 * n))])
    others = [e for e in idx if e not in left_set]
    good2 = [e for e in others if e not in med_set]
    good1 = [e for e in others if e in med_set]
    fixed = {e: colors[e] for e in left}
    spill = len(pal_c)
    phi2 = list_greedy(H, (sorted(good2, key=lambda e: (-len(H.edges[e]), e))),
                       {e: free for e in good2}, hier.sigma / 2, hier.beta / 5, fixed=fixed, spill=spill)
    _merge(colors, phi2.colors, good2)
    fixed.update({e: colors[e] for e in good2})
    med_list = sorted(c_med)
    phi3 = list_greedy(H, (sorted(good1, key=lambda e: (-len(H.edges[e]), e))),
                       {e: med_list for e in good1}, hier.sigma / 2, hier.gamma1 / 2, fixed=fixed,
                       spill=max(spill, max((c for c in colors if c is not None), default=0) + 1))
    _merge(colors, phi3.colors, good1)
    trace.append("extremal route")
    return _finish(H, colors, c_med, huge, "B", "2.2", hier)


def _finish(H, colors, c_med, huge, tag, case, hier) -> LargeEdgeResult:
    # relabel to 0..k-1 with C_med first, keeping the sets aligned
    order = sorted({c for c in colors if c is not None}, key=lambda c: (c not in c_med, c))
    remap = {c: i for i, c in enumerate(order)}
    new = [None if c is None else remap[c] for c in colors]
    col = EdgeColoring(new, len(order))
    new_med = {remap[c] for c in c_med if c in remap}
    huge_colors = {new[e] for e in huge}
    budget = (1 - hier.sigma) * H.n if tag == "A" else H.n
    return LargeEdgeResult(col, tag, new_med, cover_sizes(H, new), huge_colors, budget=budget)


def _check_clauses(H, hier, idx, huge, med, res: LargeEdgeResult) -> None:
    n = H.n
    cols = res.coloring.colors
    cnt = class_sizes(cols)
    cov = res.covers
    huge_set = set(huge)
    res.clauses["proper"] = _proper_on(H, cols, idx)
    res.clauses["color_budget"] = res.coloring.used <= res.budget + 1e-9
    res.clauses["medium_in_c_med"] = all(cols[e] in res.c_med for e in med)
    c_med_cap = hier.gamma1 * n if res.type_tag == "A" else hier.gamma2 * n
    res.clauses["c_med_size"] = len(res.c_med) <= c_med_cap + 1e-9
    res.clauses["c_med_classes"] = all(cov.get(c, 0) <= hier.gamma1 * n + 1e-9 or cnt.get(c, 0) <= 1
                                       for c in res.c_med)
    if res.type_tag == "A":
        res.clauses["huge_exclusive"] = all(cnt[cols[e]] == 1 for e in huge)
    else:
        res.clauses["huge_cover"] = all(cov[cols[e]] <= hier.delta * n + 1e-9 for e in huge)
    res.clauses["other_cover"] = all(cov[c] <= hier.beta * n + 1e-9 or cnt[c] == 1
                                     for c in cov if c not in res.c_med and c not in res.huge_colors)
    assert res.clauses["proper"], "large/medium coloring is not proper"
    if res.type_tag == "A":
        assert res.clauses["huge_exclusive"] and res.clauses["medium_in_c_med"]
        assert res.clauses["other_cover"]


def _proper_on(H: LinearHypergraph, cols: Sequence[Optional[int]], idx: Iterable[int]) -> bool:
    keep = set(idx)
    for lst in H.incidence():
        seen: Set[int] = set()
        for e in lst:
            if e in keep:
                if cols[e] is None or cols[e] in seen:
                    return False
                seen.add(cols[e])
    return True
