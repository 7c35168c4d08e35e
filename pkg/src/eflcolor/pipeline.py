"""Whole-instance coloring routes.

efl_color aims for n colors through nine stages: large/medium edges,
reservoir, color budget, the difficult class, absorption of huge and medium
classes, the main nibble, leftovers, and the graph finish.  Whatever a stage
fails to color is picked up by a size-order first-fit pass, so the output is
always a proper coloring.  stability_color and sublinear_color are the
routes for instances with bounded maximum degree.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .absorb import (CertFailed, GraphView, absorb_difficult, absorb_small_typical, is_difficult,
                     regularising_reservoir, regularize_small, sample_reservoir)
from .finish import hall_finish, vizing, delta_edge_color
from .greedy import LargeEdgeResult, color_large_medium, dsatur_line, list_greedy
from .hypercore import (EdgeColoring, Hierarchy, LinearHypergraph, classify, coverage, is_full,
                        verify_coloring)
from .matching import PreconditionUnmet
from .nibble import leftover_color, main_color
from .ordering import reorder, size_order

STAGE_ERRORS = (RuntimeError, ValueError)


@dataclass
class PipelineReport:
    n: int
    type_tag: str = ""
    route: str = ""
    steps: List[Dict[str, object]] = field(default_factory=list)
    ledger: Dict[str, int] = field(default_factory=dict)
    coverage: Dict[str, str] = field(default_factory=dict)
    fallbacks: List[str] = field(default_factory=list)
    checks: Dict[str, bool] = field(default_factory=dict)
    colors: int = 0
    verified: bool = False

    def step(self, name: str, **info) -> None:
        self.steps.append({"step": name, **info})

    def fallback(self, what: str) -> None:
        self.fallbacks.append(what)

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def classify_type(H: LinearHypergraph, phi: Optional[LargeEdgeResult], rho: float, eps: float) -> str:
    if phi is not None and phi.type_tag == "B":
        return "B"
    return "A2" if is_full(H, rho, eps).full else "A1"


def _params(tag: str, hier: Hierarchy) -> Dict[str, float]:
    if tag == "A1":
        return {"rho": hier.rho1, "rho_abs": hier.rho1, "eps": hier.eps1, "gamma": hier.gamma1}
    if tag == "A2":
        return {"rho": hier.rho1, "rho_abs": hier.rho1 / 2, "eps": hier.eps1, "gamma": hier.gamma1}
    return {"rho": hier.rho2, "rho_abs": hier.rho2, "eps": hier.eps2, "gamma": hier.gamma2}


def first_fit(H: LinearHypergraph, colors: List[Optional[int]], ids: Sequence[int]) -> int:
    """Color ids in size order with the lowest color free at every vertex.

    Returns how many colors beyond the previous maximum were opened."""
    at: List[Set[int]] = [set() for _ in range(H.n)]
    for e, c in enumerate(colors):
        if c is not None:
            for v in H.edges[e]:
                at[v].add(c)
    before = max((c for c in colors if c is not None), default=-1)
    for e in sorted(ids, key=lambda i: (-len(H.edges[i]), i)):
        busy = set().union(*(at[v] for v in H.edges[e]))
        c = 0
        while c in busy:
            c += 1
        colors[e] = c
        for v in H.edges[e]:
            at[v].add(c)
    after = max((c for c in colors if c is not None), default=-1)
    return max(0, after - before)


def _classes(colors: Sequence[Optional[int]]) -> Dict[int, List[int]]:
    out: Dict[int, List[int]] = {}
    for e, c in enumerate(colors):
        if c is not None:
            out.setdefault(c, []).append(e)
    return out


def efl_color(H: LinearHypergraph, hier: Optional[Hierarchy] = None,
              seed: int = 0) -> Tuple[EdgeColoring, PipelineReport]:
    """Proper coloring of H aiming for at most n colors, with a stage report.

    Singleton edges are set aside and take any color free at their vertex
    once everything else is colored.
    """
    hier = Hierarchy() if hier is None else hier
    rep = PipelineReport(H.n)
    core = [i for i in range(H.m) if len(H.edges[i]) >= 2]
    K = H.sub(core)
    local = _color_core(K, hier, seed, rep)
    colors: List[Optional[int]] = [None] * H.m
    for i, c in zip(core, local):
        colors[i] = c
    singles = [i for i in range(H.m) if len(H.edges[i]) < 2]
    if singles:
        first_fit(H, colors, singles)
        rep.step("singletons", count=len(singles))
    col = EdgeColoring([0 if c is None else c for c in colors],
                       max((c for c in colors if c is not None), default=-1) + 1)
    bad = verify_coloring(H, col)
    assert bad is None, f"pipeline produced an improper coloring at {bad}"
    rep.verified = True
    rep.colors = len(set(col.colors))
    rep.checks["within_n"] = rep.colors <= H.n
    col.meta["report"] = rep
    return col, rep


def _color_core(H: LinearHypergraph, hier: Hierarchy, seed: int, rep: PipelineReport) -> List[int]:
    n, m = H.n, H.m
    if m == 0:
        rep.route = "empty"
        return []
    if all(len(e) == 2 for e in H.edges):
        rep.route = rep.type_tag = "graph"
        col = vizing(n, H.edges, seed=seed)
        rep.step("vizing", colors=col.used)
        return list(col.colors)
    rep.route = "stages"
    colors: List[Optional[int]] = [None] * m
    ec = classify(H, hier)
    # FPP-extremal edges go with the large ones even below r1
    early = [i for i in range(m) if len(H.edges[i]) > hier.r1 or (ec.fpp_extremal[i] and len(H.edges[i]) >= 3)]

    # huge and large edges
    phi: Optional[LargeEdgeResult] = None
    if early:
        try:
            phi = color_large_medium(H, hier, seed, idx=early)
            for i in early:
                colors[i] = phi.coloring.colors[i]
            rep.step("large-medium", type=phi.type_tag, colors=phi.coloring.used, trace=list(phi.trace))
        except STAGE_ERRORS as err:
            rep.fallback(f"large-medium: {err}")
            first_fit(H, colors, early)
    k_phi = max((c for c in colors if c is not None), default=-1) + 1
    tag = classify_type(H, phi, hier.rho1, hier.eps1)
    rep.type_tag = tag
    p = _params(tag, hier)
    rho, eps, gamma, xi = p["rho"], p["eps"], p["gamma"], hier.xi
    view = GraphView(H, eps)
    U = view.U
    rep.checks["EP1"] = all(len(e) <= eps * n for e in H.edges if len(e) > 2 and U.intersection(e))
    assert rep.checks["EP1"], "an edge of size above eps*n meets U"
    if tag == "B" and phi is not None and phi.fpp_volume >= 1 - hier.delta:
        rep.checks["EP3"] = len(U) <= 2 * hier.delta * n
        if hier.strict:
            assert rep.checks["EP3"]

    # reservoirs
    dH = H.degrees()
    S = set(U) - {v for v in range(n) if dH[v] == n - 1} if tag == "A1" else set(U)
    R_abs, R_res = _reservoirs(H, tag, p, xi, seed, rep)

    # color budget
    classes = _classes(colors)
    c_med = set(phi.c_med) if phi is not None else set()
    huge = (set(phi.huge_colors) - c_med) if phi is not None else set()
    c_diff: Set[int] = set()
    for c in sorted(huge):
        if is_difficult(H, classes[c], eps, U):
            if c_diff:
                rep.fallback(f"second difficult class {c} treated as huge")
                continue
            c_diff = {c}
    c_huge = huge - c_diff
    c_large = set(classes) - c_med - c_diff - c_huge
    D = math.floor((1 - rho) * (n - 1))
    D_buff = math.floor(10 * math.sqrt(gamma) * D)
    main_cols = sorted(c_large)
    fresh = k_phi
    while len(main_cols) < D:
        main_cols.append(fresh)
        fresh += 1
    if len(c_large) > D:
        rep.fallback(f"{len(c_large)} large colors exceed D={D}")
    r_deg = [0] * n
    for e in R_res:
        for v in H.edges[e]:
            r_deg[v] += 1
    need_final = max(r_deg, default=0) + 1
    room = max(0, n - fresh)
    n_buff = max(0, min(D_buff, room - need_final))
    buff_cols = list(range(fresh, fresh + n_buff))
    final_cols = list(range(fresh + n_buff, max(n, fresh + n_buff)))
    rep.ledger = {"C_med": len(c_med), "C_diff": len(c_diff), "C_huge": len(c_huge), "C_large": len(c_large),
                  "C_main": len(main_cols), "C_buff": n_buff, "C_buff_target": D_buff,
                  "C_final": len(final_cols), "D": D}
    rep.checks["huge_colors_bounded"] = len(c_huge | c_diff) <= 8 / hier.beta
    if not rep.checks["huge_colors_bounded"]:
        rep.fallback(f"{len(c_huge | c_diff)} huge colors exceed 8/beta")
    rep.checks["C_main_is_D"] = len(main_cols) == D
    rep.checks["C_buff_unclamped"] = n_buff == D_buff
    rep.checks["C_med_small"] = len(c_med) <= gamma * n

    # the difficult class
    R1 = set(R_abs)
    S1 = set(S)
    m_diff: Set[int] = set()
    if c_diff:
        c = next(iter(c_diff))
        cls = classes[c]
        if len(cls) == 1:
            try:
                out = absorb_difficult(H, cls[0], seed)
            except STAGE_ERRORS as err:
                out = None
                rep.fallback(f"difficult class: {err}")
            if out is not None and out.branch == "b":
                rep.route = "difficult edge, direct"
                rep.step("difficult", branch="b", colors=out.coloring.used)
                return list(out.coloring.colors)
            if out is not None:
                m_diff = set(out.matching) - {cls[0]}
                for e in m_diff:
                    colors[e] = c
                R1 -= m_diff
                R_res -= m_diff
                S1 -= set(out.uncovered)
                rep.step("difficult", branch="a", added=len(m_diff), uncovered=len(out.uncovered))
        else:
            rep.fallback(f"difficult class {c} has {len(cls)} edges; left as is")

    # huge and medium classes
    R2, S2 = _absorb_phi(H, colors, sorted(c_huge), sorted(c_med), R1, S1, U, p, xi, seed, rep)
    R_res -= (R1 - R2)

    # main colors
    colored = {e for e in range(m) if colors[e] is not None}
    H_star = regularize_small(H, R_res, hier, rho, beta=hier.beta / 2, eps=eps, kind=tag,
                              raise_on_miss=False, exclude=colored)
    rep.step("regularize", edges=len(H_star.edges), padding=sum(H_star.padding), misses=len(H_star.misses),
             capped=len(H_star.capped), pre_ok=H_star.pre_ok)
    classes = _classes(colors)
    pre = [classes.get(c, []) for c in main_cols]
    R3, S3 = set(R2), set(S2)
    try:
        res = main_color(H, H_star.edges, H_star.padding, R2, S2, pre, min(1.0, 2 * gamma), hier.kappa, rho, xi,
                         eps, seed=seed)
        for c, M in zip(main_cols, res.matchings):
            for e in M:
                colors[e] = c
        used = {e for M in res.matchings for e in M}
        R3 -= used
        R_res -= used
        S3 -= res.defects
        rep.step("main", **{k: v for k, v in res.stats.items() if k != "trace"})
    except STAGE_ERRORS as err:
        rep.fallback(f"main: {err}")
    rem = [e for e in H_star.edges if colors[e] is None]

    # leftovers
    if rem:
        try:
            lo = leftover_color(H, buff_cols, [[] for _ in buff_cols], R3, rem, S3, min(1.0, 10 * math.sqrt(gamma)),
                                rho, xi, eps, seed=seed)
            for c, M in zip(buff_cols, lo.matchings):
                for e in M:
                    colors[e] = c
                    R_res.discard(e)
            rep.step("leftover", edges=len(rem), status=lo.status)
        except STAGE_ERRORS as err:
            rep.fallback(f"leftover ({len(rem)} edges): {err}")

    # the final graph
    final = sorted(e for e in range(m) if colors[e] is None and len(H.edges[e]) == 2)
    if final:
        _finish_graph(H, colors, final, final_cols, tag, U, hier, seed, rep)

    rest = [e for e in range(m) if colors[e] is None]
    if rest:
        opened = first_fit(H, colors, rest)
        r = max(len(H.edges[e]) for e in rest)
        rep.fallback(f"first-fit on {len(rest)} edges, {opened} new colors")
        rep.ledger["fallback_bound"] = math.floor((1 + 1 / max(r - 1, 1)) * n) + 1
    cov = coverage([[H.edges[e] for e in M] for M in _classes(colors).values()], U, S)
    rep.coverage["final"] = cov.status
    return [c for c in colors]


def _reservoirs(H, tag, p, xi, seed, rep) -> Tuple[Set[int], Set[int]]:
    kind = {"A1": "A1", "A2": "abs", "B": "B"}[tag]
    try:
        R = sample_reservoir(H, p["rho_abs"], seed, xi, p["eps"], kind=kind)
        rep.step("reservoir", kind=kind, size=len(R.edges), certified=True)
    except CertFailed as err:
        rep.fallback(f"reservoir certificate: {err.residuals}")
        R = sample_reservoir(H, p["rho_abs"], seed, 1.0, p["eps"], kind=kind, retries=1)
        rep.step("reservoir", kind=kind, size=len(R.edges), certified=False)
    R_abs = set(R.edges)
    R_res = set(R.edges)
    if tag == "A2":
        try:
            full = regularising_reservoir(H, R, p["rho"], xi, p["eps"], seed)
            R_res = set(full.edges)
            rep.step("regularising reservoir", size=len(R_res), **{k: v for k, v in full.certificates.items()
                                                                   if isinstance(v, (bool, int, float))})
        except STAGE_ERRORS as err:
            rep.fallback(f"regularising reservoir: {err}")
    return R_abs, R_res


def _absorb_phi(H, colors, c_huge, c_med, R1, S1, U, p, xi, seed, rep) -> Tuple[Set[int], Set[int]]:
    n = H.n
    classes = _classes(colors)
    eps, gamma = p["eps"], p["gamma"]
    batch, tags, skipped = [], [], []
    for c, tag in [(c, "typicality") for c in c_huge] + [(c, "smallness") for c in c_med]:
        cls = classes.get(c, [])
        cov = {v for e in cls for v in H.edges[e]}
        if tag == "typicality":
            ok = not is_difficult(H, cls, eps, U) and len(cov & U) <= eps * n
        else:
            ok = len(cov) <= gamma * n
        if ok:
            batch.append((c, cls))
            tags.append(tag)
        else:
            skipped.append(c)
    if skipped:
        rep.fallback(f"{len(skipped)} huge/medium classes outside their tag window; not absorbed")
    if not batch:
        return set(R1), set(S1)
    try:
        res = absorb_small_typical(H, [cls for _, cls in batch], tags, R1, S1, p["rho"], xi, eps, gamma, seed=seed)
    except STAGE_ERRORS as err:
        rep.fallback(f"huge/medium absorption: {err}")
        return set(R1), set(S1)
    for (c, _), new in zip(batch, res.added):
        for e in new:
            colors[e] = c
    used = {e for new in res.added for e in new}
    rep.step("absorb huge/medium", classes=len(batch), added=len(used), status=res.status)
    return set(R1) - used, set(S1) - set(res.defects.values())


def _finish_graph(H, colors, final, final_cols, tag, U, hier, seed, rep) -> None:
    n = H.n
    pairs = [H.edges[e] for e in final]
    classes = _classes(colors)
    forbidden: Dict[int, Set[int]] = {}
    for c in final_cols:
        for e in classes.get(c, []):
            for v in H.edges[e]:
                forbidden.setdefault(v, set()).add(c)
    got: Optional[List[int]] = None
    route = ""
    if tag == "B" or forbidden:
        route = "hall"
        try:
            col = hall_finish(n, pairs, final_cols, forbidden, U, 2 * hier.delta)
        except PreconditionUnmet as err:
            rep.fallback(f"hall preconditions: {err}")
            try:
                col = hall_finish(n, pairs, final_cols, forbidden, U, 2 * hier.delta, check=False)
            except STAGE_ERRORS as err2:
                rep.fallback(f"hall: {err2}")
                col = None
        except STAGE_ERRORS as err:
            rep.fallback(f"hall: {err}")
            col = None
        if col is not None:
            got = list(col.colors)
    else:
        deg = [0] * n
        for u, v in pairs:
            deg[u] += 1
            deg[v] += 1
        if tag == "A2" and max(deg) > len(final_cols) - 1:
            route = "delta"
            col = delta_edge_color(n, pairs, seed=seed).coloring
        else:
            route = "vizing"
            col = vizing(n, pairs, seed=seed)
        got = [final_cols[c] if c < len(final_cols) else None for c in col.colors]
    if got is None:
        rep.step("finish", route=route, edges=len(final), colored=0)
        return
    done = 0
    for e, c in zip(final, got):
        if c is not None:
            colors[e] = c
            done += 1
    rep.step("finish", route=route, edges=len(final), colored=done, palette=len(final_cols))


class PreconditionFailed(ValueError):
    pass


def stability_color(H: LinearHypergraph, hier: Optional[Hierarchy] = None,
                    seed: int = 0) -> Tuple[EdgeColoring, Dict[str, object]]:
    """Coloring for instances with maximum degree at most (1-delta)n and few
    FPP-extremal edges, aiming for (1-sigma)n colors."""
    hier = Hierarchy() if hier is None else hier
    n = H.n
    if H.max_degree() > (1 - hier.delta) * n:
        raise PreconditionFailed(f"maximum degree {H.max_degree()} above (1-delta)n")
    ec = classify(H, hier)
    fpp = sum(ec.fpp_extremal)
    if fpp > (1 - 3 * hier.delta) * n:
        raise PreconditionFailed(f"{fpp} FPP-extremal edges, above (1-3 delta)n")
    info: Dict[str, object] = {"budget": (1 - hier.sigma) * n}
    if H.m and all(len(e) == 2 for e in H.edges):
        col = vizing(n, H.edges, seed=seed)
        info.update(route="vizing", colors=col.used, within_budget=col.used <= info["budget"])
        return col, info
    big = [i for i in range(H.m) if len(H.edges[i]) > hier.r1]
    small = [i for i in range(H.m) if len(H.edges[i]) <= hier.r1]
    colors: List[Optional[int]] = [None] * H.m
    stage_ok = True
    if big:
        phi = color_large_medium(H, hier, seed, idx=big)
        for i in big:
            colors[i] = phi.coloring.colors[i]
        stage_ok = phi.type_tag == "A" and all(phi.clauses.values())
        info["large_medium"] = phi.coloring.used
    start = max((c for c in colors if c is not None), default=-1) + 1
    limit = max(start, math.floor((1 - hier.sigma) * n))
    at: List[Set[int]] = [set() for _ in range(n)]
    for i in big:
        for v in H.edges[i]:
            at[v].add(colors[i])
    # conflict lists: colors of large/medium edges meeting e are excluded
    lists = {e: [c for c in range(limit) if not any(c in at[v] for v in H.edges[e])] for e in small}
    fixed = {i: colors[i] for i in big}
    col = list_greedy(H, size_order(H, small), lists, hier.beta, 2.0, fixed=fixed, spill=limit)
    for i in small:
        colors[i] = col.colors[i]
    out = EdgeColoring([c for c in colors], max(c for c in colors) + 1 if colors else 0)
    assert verify_coloring(H, out) is None
    used = len(set(out.colors))
    info.update(route="large-medium + list greedy", colors=used, spilled=col.meta.get("spilled", 0),
                stages_ok=stage_ok, within_budget=used <= info["budget"])
    if hier.strict and stage_ok:
        assert used <= info["budget"]
    return out, info


def sublinear_color(H: LinearHypergraph, eta: float, eps_target: float,
                    seed: int = 0) -> Tuple[EdgeColoring, Dict[str, object]]:
    """Coloring for instances with maximum degree at most eta*n and no edge
    size between eta*sqrt(n) and sqrt(n)/eta, aiming for eps_target*n colors.

    Tiny edges (size <= 1/eta) get DSATUR colors, giant edges (size >=
    sqrt(n)/eta) one color each, and the rest is split by repeated
    reordering into window parts (DSATUR each) and a good part (greedy in
    the combined order), every part on its own palette.
    """
    n = H.n
    root = math.sqrt(n)
    if H.max_degree() > eta * n:
        raise PreconditionFailed(f"maximum degree {H.max_degree()} above eta*n")
    if any(eta * root < len(e) < root / eta for e in H.edges):
        raise PreconditionFailed("an edge lies strictly between eta*sqrt(n) and sqrt(n)/eta")
    tiny = [i for i in range(H.m) if len(H.edges[i]) <= 1 / eta]
    giant = [i for i in range(H.m) if len(H.edges[i]) >= root / eta]
    mid = [i for i in range(H.m) if 1 / eta < len(H.edges[i]) < eta * root]
    colors: List[Optional[int]] = [None] * H.m
    ledger: Dict[str, int] = {}
    nxt = 0

    def place(col: EdgeColoring, ids: Sequence[int]) -> int:
        nonlocal nxt
        base = nxt
        for i in ids:
            colors[i] = base + col.colors[i]
        nxt = base + max((col.colors[i] for i in ids), default=-1) + 1
        return nxt - base

    ledger["tiny"] = place(dsatur_line(H, tiny), tiny) if tiny else 0
    for i in giant:
        colors[i] = nxt
        nxt += 1
    ledger["giant"] = len(giant)
    windows: List[int] = []
    good: List[int] = []
    left = list(mid)
    tau, K = 1 - eps_target / 6, eps_target ** -2
    rounds = 0
    while left:
        rounds += 1
        sub = H.sub(left)
        out = reorder(sub, tau, K)
        if out.good:
            good += [left[j] for j in out.ordering.perm]
            break
        pos = out.ordering.pos
        W = sorted(out.window, key=lambda j: pos[j])
        first, last = pos[W[0]], pos[W[-1]]
        span = [left[j] for j in out.ordering.perm[first:last + 1]]
        # edges after e* are good for this round
        good_part = [left[j] for j in out.ordering.perm[last + 1:]]
        before = [left[j] for j in out.ordering.perm[:first]]
        windows.append(place(dsatur_line(H, span), span))
        good = good_part + good
        left = before
    if good:
        lists = {e: list(range(H.m + 1)) for e in good}
        g = list_greedy(H, good, lists, eps_target / 6, 2.0)
        ledger["good"] = place(g, good)
    ledger["windows"] = sum(windows)
    out = EdgeColoring([0 if c is None else c for c in colors], nxt)
    assert verify_coloring(H, out) is None
    used = len(set(out.colors))
    return out, {"colors": used, "budget": eps_target * n, "within_budget": used <= eps_target * n,
                 "rounds": rounds, "ledger": ledger, "window_parts": len(windows)}
