"""Reservoirs of graph edges and the absorption steps that extend matchings
over the high-degree set U with reserved edges."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

from .finish import vizing
from .hypercore import (EdgeColoring, Hierarchy, LinearHypergraph, coverage, derived_views,
                        graph_degrees, is_full, verify_coloring)
from .matching import (Infeasible, NoMatching, OddOrder, RetriesExhausted, crossing_match,
                       dense_perfect_match, gf_factor)


class CertFailed(RuntimeError):
    def __init__(self, residuals: Dict[str, float]):
        super().__init__(f"reservoir certification failed: {residuals}")
        self.residuals = residuals


class NotFull(ValueError):
    pass


class FactorInfeasible(RuntimeError):
    pass


class WindowMiss(RuntimeError):
    def __init__(self, vertex: int, achieved: int, window: Tuple[float, float]):
        super().__init__(f"vertex {vertex} has degree {achieved}, window {window}")
        self.vertex = vertex
        self.achieved = achieved
        self.window = window


class AbsorptionFailed(RuntimeError):
    def __init__(self, index: int, step: str):
        super().__init__(f"absorption failed on matching {index}: {step}")
        self.index = index
        self.step = step


class DifficultRejected(ValueError):
    def __init__(self, index: int):
        super().__init__(f"matching {index} is difficult")
        self.index = index


class GraphView:
    """Size-2 edges of H as an adjacency structure, plus U and G'."""

    def __init__(self, H: LinearHypergraph, eps: float):
        dv = derived_views(H, eps)
        self.n = H.n
        self.eps = eps
        self.G = dv.G
        self.U: Set[int] = dv.U
        self.deg = dv.degrees
        self.cross: Set[int] = set(dv.G_cross)
        self.adj: List[Dict[int, int]] = [dict() for _ in range(H.n)]
        for i in dv.G:
            a, b = H.edges[i]
            self.adj[a][b] = i
            self.adj[b][a] = i

    def restricted(self, ids: Iterable[int], H: LinearHypergraph) -> List[Dict[int, int]]:
        adj: List[Dict[int, int]] = [dict() for _ in range(self.n)]
        for i in ids:
            a, b = H.edges[i]
            adj[a][b] = i
            adj[b][a] = i
        return adj


@dataclass
class Reservoir:
    edges: Set[int]
    kind: str
    rho: float
    xi: float
    eps: float
    certificates: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.edges)


@dataclass
class AbsorberCert:
    typicality: float
    upper_margin: float
    lower_margin: float
    contained: bool
    gamma: float
    n: int

    @property
    def certified(self) -> bool:
        return self.contained and self.typicality <= self.gamma * self.n and self.upper_margin >= 0


def _family(view: GraphView, extra: Optional[Iterable[Iterable[int]]] = None) -> List[Set[int]]:
    fam = [set(range(view.n)), set(view.U)]
    for X in extra or ():
        fam.append(set(X))
    return fam


def typicality_residual(H: LinearHypergraph, view: GraphView, R: Set[int], family: Sequence[Set[int]],
                        rho: float) -> float:
    """max over v and X of | |N_R(v) & X| - rho |N_G'(v) & X| | and the same for V \\ X."""
    radj = view.restricted([i for i in R if i in view.cross], H)
    gadj = view.restricted(view.cross, H)
    worst = 0.0
    for v in range(view.n):
        nr = set(radj[v])
        ng = set(gadj[v])
        for X in family:
            a = len(nr & X)
            b = len(ng & X)
            worst = max(worst, abs(a - rho * b), abs(len(nr) - a - rho * (len(ng) - b)))
    return worst


def certify_absorber(R: Iterable[int], H: LinearHypergraph, family: Sequence[Iterable[int]], rho: float,
                     gamma: float, xi: float, eps: float, sample_trials: int = 200, seed: int = 0) -> AbsorberCert:
    """Exact typicality against every member of family, sampled upper and lower
    regularity on random disjoint pairs (S, T) with |S|, |T| >= xi*n."""
    view = GraphView(H, eps)
    R = set(R)
    fam = [set(X) for X in family]
    contained = R <= view.cross
    typ = typicality_residual(H, view, R, fam, rho)
    n = H.n
    radj = view.restricted(R & view.cross, H)
    gadj = view.restricted(view.cross, H)
    rng = random.Random(seed)
    lo = max(1, math.ceil(xi * n))
    upper = lower = math.inf
    if 2 * lo <= n:
        for _ in range(sample_trials):
            s = rng.randint(lo, max(lo, n // 2))
            t = rng.randint(lo, max(lo, n - s))
            t = min(t, n - s)
            if t < lo:
                continue
            pick = rng.sample(range(n), s + t)
            S, T = pick[:s], set(pick[s:])
            eg = sum(len(T.intersection(gadj[v])) for v in S)
            er = sum(len(T.intersection(radj[v])) for v in S)
            upper = min(upper, rho * eg + xi * s * t - er)
            lower = min(lower, er - (rho * eg - xi * s * t))
    if upper == math.inf:
        upper = lower = 0.0
    return AbsorberCert(typ, upper, lower, contained, gamma, n)


def _degree_residual(view: GraphView, deg_r: Sequence[int], rho: float) -> float:
    return max((abs(deg_r[v] - rho * view.deg[v]) for v in range(view.n)), default=0.0)


def sample_reservoir(H: LinearHypergraph, rho: float, seed: int, xi: float = 0.05, eps: float = 0.1,
                     family: Optional[Iterable[Iterable[int]]] = None, kind: str = "A1",
                     retries: int = 10) -> Reservoir:
    """Each graph edge independently with probability rho (kind A1), or each
    edge of G' (kinds B and abs).  Degrees and the typicality of R & G' are
    checked against xi*n; a failing sample is redrawn up to `retries` times."""
    if not 0 <= rho < 1:
        raise ValueError("need 0 <= rho < 1")
    view = GraphView(H, eps)
    fam = _family(view, family)
    pool = view.G if kind == "A1" else sorted(view.cross)
    tol = xi * H.n
    last: Dict[str, float] = {}
    for attempt in range(retries):
        rng = random.Random(seed * 1_000_003 + attempt)
        R = {i for i in pool if rng.random() < rho}
        deg_r = graph_degrees(H, R)
        typ = typicality_residual(H, view, R, fam, rho)
        if kind == "A1":
            p1 = _degree_residual(view, deg_r, rho)
        else:
            p1 = typ
        last = {"degree": p1, "typicality": typ, "tolerance": tol, "attempt": attempt}
        if p1 <= tol and typ <= tol:
            return Reservoir(R, kind, rho, xi, eps, dict(last, attempts=attempt + 1))
    raise CertFailed(last)


def regularising_reservoir(H: LinearHypergraph, R_abs: Reservoir, rho: float, xi: float, eps: float,
                           seed: int = 0) -> Reservoir:
    """Top up an absorber to a reservoir whose degrees are nearly rho*d_G.

    Vertices outside U and U' get edges to a fixed set of full-degree
    vertices; U and U' are then balanced by a (g, f)-factor with g = f - 1.
    """
    full = is_full(H, rho, eps)
    if not full.full:
        raise NotFull(f"high={full.high}, complete={full.complete}")
    n = H.n
    view = GraphView(H, eps)
    U = view.U
    Uprime = {w for w in range(n) if w not in U and view.deg[w] >= (1 - 20 * eps / rho) * n}
    complete = sorted(v for v in range(n) if view.deg[v] == n - 1)
    need_s = math.ceil((rho - 20 * eps) * n)
    if need_s > len(complete):
        raise NotFull(f"{len(complete)} full-degree vertices, need {need_s}")
    S = complete[:max(need_s, 0)]
    base = set(R_abs.edges)
    deg_abs = graph_degrees(H, base)
    extra: Set[int] = set()
    rng = random.Random(seed)
    short: Dict[int, int] = {}
    for w in range(n):
        if w in U or w in Uprime:
            continue
        want = math.ceil((rho - 20 * eps) * n - deg_abs[w])
        if want <= 0:
            continue
        cands = [view.adj[w][s] for s in S if s in view.adj[w] and view.adj[w][s] not in base
                 and view.adj[w][s] in view.cross and view.adj[w][s] not in extra]
        rng.shuffle(cands)
        if len(cands) < want:
            short[w] = want - len(cands)
        extra.update(cands[:want])
    deg_extra = graph_degrees(H, extra)
    inner = sorted(U | Uprime)
    inner_set = set(inner)
    taken = base | extra
    pool = [i for i in view.G if i not in taken
            and H.edges[i][0] in inner_set and H.edges[i][1] in inner_set]
    f: Dict[int, int] = {}
    g: Dict[int, int] = {}
    clamped = 0
    for w in inner:
        fw = math.floor(rho * view.deg[w] + xi * n - deg_abs[w] - deg_extra[w])
        if fw < 1:
            clamped += 1
        f[w] = max(fw, 0)
        g[w] = max(fw - 1, 0)
    try:
        chosen = gf_factor(inner, [H.edges[i] for i in pool], g, f)
    except Infeasible as err:
        raise FactorInfeasible(str(err)) from err
    factor = {pool[j] for j in chosen}
    R = base | extra | factor
    deg_r = graph_degrees(H, R)
    r1 = max((abs(deg_r[w] - rho * view.deg[w]) for w in U), default=0.0)
    r2_fail = [w for w in range(n) if w not in U and not (
        max(rho * view.deg[w], (rho - 20 * eps) * n) - 1e-9 <= deg_r[w] <= rho * (1 - eps) * n + xi * n + 1e-9)]
    certs = {"R1_residual": r1, "R1_ok": r1 <= xi * n, "R2_failures": r2_fail, "short": short,
             "clamped": clamped, "U_prime": len(Uprime), "S": len(S)}
    return Reservoir(R, "A2", rho, xi, eps, certs)


@dataclass
class SmallRegular:
    """H_small minus the reservoir, padded with virtual singletons."""
    edges: List[int]
    padding: List[int]
    k: int
    degrees: List[int]
    window: Tuple[float, float]
    misses: Dict[int, int] = field(default_factory=dict)
    capped: Dict[int, int] = field(default_factory=dict)
    pre_ok: bool = True

    def as_hypergraph(self, H: LinearHypergraph) -> LinearHypergraph:
        out = [H.edges[i] for i in self.edges]
        for w, p in enumerate(self.padding):
            out += [(w,)] * p
        return LinearHypergraph(H.n, tuple(out), True)


def regularize_small(H: LinearHypergraph, R_res: Iterable[int], hier: Hierarchy, rho: float,
                     beta: Optional[float] = None, eps: float = 0.1, kind: str = "A1",
                     raise_on_miss: bool = True, exclude: Iterable[int] = ()) -> SmallRegular:
    """Pad each vertex of H_small minus R_res (and minus `exclude`) up to
    k = floor((1-rho)(n-1) - beta*n/2), never beyond n-3-d_H(w) singletons."""
    n = H.n
    beta = hier.beta if beta is None else beta
    R = set(R_res) | set(exclude)
    edges = [i for i, e in enumerate(H.edges) if len(e) <= hier.r1 and i not in R]
    d_small = [0] * n
    for i in edges:
        for v in H.edges[i]:
            d_small[v] += 1
    d_H = H.degrees()
    k = math.floor((1 - rho) * (n - 1) - beta * n / 2)
    lo = (1 - rho) * (n - 1 - beta * n)
    hi = (1 - rho) * (n - 1 + beta * n)
    padding = [0] * n
    capped: Dict[int, int] = {}
    misses: Dict[int, int] = {}
    for w in range(n):
        want = max(0, k - d_small[w])
        cap = max(0, n - 3 - d_H[w])
        if want > cap:
            capped[w] = want - cap
        padding[w] = min(want, cap)
        d = d_small[w] + padding[w]
        if not lo - 1e-9 <= d <= hi + 1e-9:
            misses[w] = d
    degrees = [d_small[w] + padding[w] for w in range(n)]
    out = SmallRegular(edges, padding, k, degrees, (lo, hi), misses, capped,
                       pre_ok=(kind != "B" or 3 * rho <= eps))
    if misses and raise_on_miss:
        w = min(misses)
        raise WindowMiss(w, misses[w], (lo, hi))
    return out


def is_difficult(H: LinearHypergraph, M: Iterable[int], eps: float, U: Optional[Set[int]] = None) -> bool:
    """M (edge ids) covers at least 3/4 of V \\ U, and |V \\ U| >= 2."""
    if U is None:
        U = derived_views(H, eps).U
    rest = H.n - len(U)
    if rest < 2:
        return False
    covered = {v for i in M for v in H.edges[i] if v not in U}
    return 4 * len(covered) >= 3 * rest


def pseudorandom_misses(H: LinearHypergraph, M: Iterable[int], sets: Sequence[Set[int]], gamma: float,
                        kappa: float, extra: Optional[Set[int]] = None) -> List[int]:
    """Indices of sets X with |X \\ V(M)| outside gamma|X| +- kappa*n."""
    covered = {v for i in M for v in H.edges[i]} | (extra or set())
    tol = kappa * H.n
    return [j for j, X in enumerate(sets) if abs(len(X - covered) - gamma * len(X)) > tol]


def reservoir_family(H: LinearHypergraph, view: GraphView, R: Set[int], S: Iterable[int]) -> List[Set[int]]:
    """N_R(u) & U and N_R(u) \\ U for u in U, plus U and S."""
    radj = view.restricted(R, H)
    fam: List[Set[int]] = []
    for u in sorted(view.U):
        nb = set(radj[u])
        fam.append(nb & view.U)
        fam.append(nb - view.U)
    fam.append(set(view.U))
    fam.append(set(S))
    return fam


@dataclass
class AbsorbResult:
    matchings: List[List[int]]
    added: List[List[int]]
    status: str
    branches: List[str]
    defects: Dict[int, int] = field(default_factory=dict)
    precheck: Dict[int, int] = field(default_factory=dict)


def _extend(H: LinearHypergraph, view: GraphView, matchings: Sequence[Sequence[int]], R: Set[int],
            S: Set[int], plans: Sequence[Tuple[str, str]], rho: float, xi: float, seed: int,
            expect: Sequence[str], virtual: Optional[Sequence[Set[int]]] = None) -> AbsorbResult:
    """Shared absorption loop.  plans[i] is (branch, regime): branch is
    "crossing" or "internal", regime "perfect" or "nearly" (internal only).
    virtual[i] holds vertices already covered by padding singletons."""
    n = H.n
    U = view.U
    rng = random.Random(seed)
    radj = view.restricted(R, H)
    used: Set[int] = set()
    designated: Set[int] = set()
    out: List[List[int]] = []
    added: List[List[int]] = []
    for i, N in enumerate(matchings):
        N = list(N)
        if R.intersection(N):
            raise ValueError(f"matching {i} uses reservoir edges")
        covered = {v for e in N for v in H.edges[e]}
        if virtual is not None:
            covered |= virtual[i]
        branch, regime = plans[i]
        new: List[int] = []
        if branch == "crossing":
            A = sorted(U - covered)
            Bset = set(range(n)) - U - covered
            adj = {a: [b for b in sorted(radj[a]) if b in Bset and radj[a][b] not in used] for a in A}
            try:
                res = crossing_match(A, sorted(Bset), adj, rho, xi, n)
            except NoMatching as err:
                raise AbsorptionFailed(i, f"crossing Hall step, violator of size {len(err.violator)}") from err
            new = [radj[a][b] for a, b in sorted(res.matching.items())]
        else:
            Ui = sorted(U - covered)
            free = set(range(n)) - covered
            if len(Ui) % 2:
                if regime == "perfect":
                    pick = None
                    for u in Ui:
                        if u in designated:
                            continue
                        v = next((v for v in sorted(radj[u]) if v not in U and v in free
                                  and radj[u][v] not in used), None)
                        if v is not None:
                            pick = (u, v)
                            break
                    if pick is None:
                        raise AbsorptionFailed(i, "no parity edge from U_i to V \\ U")
                    u, v = pick
                    new.append(radj[u][v])
                else:
                    u = next((u for u in Ui if u in S and u not in designated), None)
                    if u is None:
                        raise AbsorptionFailed(i, "no defect vertex available in S")
                designated.add(u)
                Ui = [x for x in Ui if x != u]
            inside = set(Ui)
            pairs = [(a, b) for a in Ui for b, e in radj[a].items()
                     if a < b and b in inside and e not in used]
            try:
                pm = dense_perfect_match(Ui, pairs, rho, xi, seed=rng.randrange(2 ** 31))
            except (RetriesExhausted, OddOrder) as err:
                raise AbsorptionFailed(i, f"perfect matching on {len(Ui)} vertices: {err}") from err
            new += [radj[a][b] for a, b in pm.pairs]
        used.update(new)
        out.append(N + new)
        added.append(new)
    rep = coverage([[H.edges[e] for e in M] + [(v,) for v in (virtual[i] if virtual else ())]
                    for i, M in enumerate(out)], U, S)
    for i, new in enumerate(added):
        assert set(new) <= R
    all_ids = [e for M in out for e in M]
    assert len(all_ids) == len(set(all_ids)), "extended matchings share an edge"
    if rep.status not in expect:
        raise AbsorptionFailed(-1, f"coverage status {rep.status}, expected {expect}")
    return AbsorbResult(out, added, rep.status, [p[0] for p in plans], rep.defects)


def absorb_batch(H: LinearHypergraph, matchings: Sequence[Sequence[int]], R: Iterable[int], S: Iterable[int],
                 rho: float, xi: float, eps: float, gamma: float = 0.05, kappa: float = 0.01,
                 seed: int = 0, precheck: bool = True,
                 virtual: Optional[Sequence[Set[int]]] = None) -> AbsorbResult:
    """Extend pseudorandom matchings over U with reservoir edges.

    |U| <= n/100: crossing matchings between U and V \\ U, perfect coverage.
    Otherwise internal matchings inside U; perfect coverage when
    |U| <= (1-2 eps)n, else nearly-perfect with defects in S.
    """
    view = GraphView(H, eps)
    R = set(R)
    S = set(S)
    n = H.n
    U = view.U
    checks: Dict[int, int] = {}
    if precheck and U:
        fam = reservoir_family(H, view, R, S)
        for i, N in enumerate(matchings):
            checks[i] = len(pseudorandom_misses(H, N, fam, gamma, kappa, virtual[i] if virtual else None))
    if len(U) <= n / 100:
        plans = [("crossing", "perfect")] * len(matchings)
        expect = ("perfect",)
    elif len(U) <= (1 - 2 * eps) * n:
        plans = [("internal", "perfect")] * len(matchings)
        expect = ("perfect",)
    else:
        plans = [("internal", "nearly")] * len(matchings)
        expect = ("perfect", "nearly-perfect")
    res = _extend(H, view, matchings, R, S, plans, rho, xi, seed, expect, virtual)
    res.precheck = checks
    return res


def absorb_small_typical(H: LinearHypergraph, matchings: Sequence[Sequence[int]], tags: Sequence[str],
                         R: Iterable[int], S: Iterable[int], rho: float, xi: float, eps: float,
                         gamma: float, seed: int = 0,
                         virtual: Optional[Sequence[Set[int]]] = None) -> AbsorbResult:
    """Extend matchings tagged "smallness" (v(M) <= gamma n) or "typicality"
    (|V(M) & U| <= eps n, not difficult).  Matchings leaving at most n/100
    vertices of U uncovered are completed by crossing edges, the others
    internally; perfect coverage when |U| <= (1-10 eps)n."""
    view = GraphView(H, eps)
    R = set(R)
    S = set(S)
    n = H.n
    U = view.U
    plans = []
    for i, (N, tag) in enumerate(zip(matchings, tags)):
        covered = {v for e in N for v in H.edges[e]} | (virtual[i] if virtual else set())
        if tag == "typicality":
            if is_difficult(H, N, eps, U):
                raise DifficultRejected(i)
            if len(covered & U) > eps * n:
                raise ValueError(f"matching {i} covers more than eps*n vertices of U")
        elif tag == "smallness":
            if len(covered) > gamma * n:
                raise ValueError(f"matching {i} covers more than gamma*n vertices")
        else:
            raise ValueError(f"unknown tag {tag!r}")
        regime = "perfect" if len(U) <= (1 - 10 * eps) * n else "nearly"
        plans.append(("crossing" if len(U - covered) <= n / 100 else "internal", regime))
    expect = ("perfect",) if len(U) <= (1 - 10 * eps) * n else ("perfect", "nearly-perfect")
    return _extend(H, view, matchings, R, S, plans, rho, xi, seed, expect, virtual)


@dataclass
class DifficultOutcome:
    branch: str
    matching: Optional[List[int]] = None
    coloring: Optional[EdgeColoring] = None
    uncovered: List[int] = field(default_factory=list)


def _max_matching(vertices: Sequence[int], adj: Sequence[Dict[int, int]], weight=None) -> List[Tuple[int, int]]:
    inside = set(vertices)
    G = nx.Graph()
    G.add_nodes_from(vertices)
    for a in vertices:
        for b in adj[a]:
            if a < b and b in inside:
                G.add_edge(a, b, weight=1 if weight is None else weight[a] + weight[b])
    M = nx.max_weight_matching(G, maxcardinality=weight is None)
    return sorted(tuple(sorted(p)) for p in M)


def _perfect(vertices: Sequence[int], adj: Sequence[Dict[int, int]]) -> Optional[List[Tuple[int, int]]]:
    vs = sorted(vertices)
    if len(vs) % 2:
        return None
    M = _max_matching(vs, adj)
    return M if 2 * len(M) == len(vs) else None


def absorb_difficult(H: LinearHypergraph, e: int, seed: int = 0) -> DifficultOutcome:
    """Either extend {e} with graph edges to cover every vertex of degree
    n-1 and all but five of degree n-2, or color H with n colors."""
    n = H.n
    if any(len(x) == 1 for x in H.edges):
        raise ValueError("singleton edges are not allowed")
    view = GraphView(H, 0.5)
    adj = view.adj
    dH = H.degrees()
    big = set(H.edges[e])
    U1 = sorted(v for v in range(n) if dH[v] >= n - 1)
    U2 = sorted(v for v in range(n) if dH[v] == n - 2)
    X = sorted(set(range(n)) - big - set(U1) - set(U2))
    assert big.isdisjoint(U1) and big.isdisjoint(U2)

    def done(pairs: Sequence[Tuple[int, int]]) -> Optional[DifficultOutcome]:
        M = [e] + [adj[a][b] for a, b in pairs]
        cov = {v for i in M for v in H.edges[i]}
        miss2 = [v for v in U2 if v not in cov]
        if all(v in cov for v in U1) and len(miss2) <= 5:
            return DifficultOutcome("a", M, None, miss2)
        return None

    if not U2:
        if len(U1) % 2 == 0:
            pm = _perfect(U1, adj)
            if pm is not None:
                return done(pm)
        elif X:
            for u in U1:
                v = next((v for v in X if v in adj[u]), None)
                if v is None:
                    continue
                pm = _perfect([x for x in U1 if x != u], adj)
                if pm is not None:
                    out = done(pm + [(min(u, v), max(u, v))])
                    if out is not None:
                        return out
        else:
            return _color_branch_b(H, e, U1, adj, seed)
    else:
        u = U2[0]
        core = U1 + U2
        if len(core) % 2:
            core = [x for x in core if x != u]
        pm = _perfect(core, adj)
        if pm is not None:
            out = done(pm)
            if out is not None:
                return out
    # small exceptional graphs: cover U1 first, then as much of U2 as possible
    weight = {v: 0 for v in range(n)}
    for v in U1:
        weight[v] = 4 * n
    for v in U2:
        weight[v] = 1
    pairs = _max_matching(sorted(set(range(n)) - big), adj, weight)
    out = done(pairs)
    if out is not None:
        return out
    if all(len(H.edges[i]) == 2 for i in range(H.m) if i != e):
        return _color_branch_b(H, e, U1, adj, seed)
    raise RuntimeError("difficult edge: neither branch applies")


def _color_branch_b(H: LinearHypergraph, e: int, U1: Sequence[int], adj, seed: int) -> DifficultOutcome:
    n = H.n
    M1 = _max_matching(U1, adj)
    special = {e} | {adj[a][b] for a, b in M1}
    rest = [i for i in range(H.m) if i not in special]
    assert all(len(H.edges[i]) == 2 for i in rest)
    col = vizing(n, [H.edges[i] for i in rest], seed=seed)
    if col.used > n - 1:
        raise RuntimeError("remaining graph needs n colors")
    colors: List[Optional[int]] = [None] * H.m
    for i, c in zip(rest, col.colors):
        colors[i] = c
    for i in special:
        colors[i] = n - 1
    out = EdgeColoring(colors, n)
    assert verify_coloring(H, out) is None
    out.meta["route"] = "difficult edge, direct coloring"
    return DifficultOutcome("b", None, out)


@dataclass
class AbsorbableBatch:
    H: LinearHypergraph
    R: Set[int]
    S: Set[int]
    matchings: List[List[int]]
    eps: float
    expect: str


def split_instance(n: int, core: int, seed: int = 0) -> LinearHypergraph:
    """A clique on `core` vertices joined to every other vertex, with a
    random linear packing of triples on the remaining vertices."""
    rng = random.Random(seed)
    edges: List[Tuple[int, ...]] = [(a, b) for a in range(core) for b in range(a + 1, n)]
    rest = list(range(core, n))
    pairs: Set[Tuple[int, int]] = set()
    for _ in range(3):
        rng.shuffle(rest)
        for j in range(0, len(rest) - 2, 3):
            t = tuple(sorted(rest[j:j + 3]))
            ps = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
            if not pairs.intersection(ps):
                pairs.update(ps)
                edges.append(t)
    return LinearHypergraph(n, tuple(edges))


def random_matchings(H: LinearHypergraph, k: int, gamma: float, forbidden: Set[int], seed: int,
                     inc: Optional[List[List[int]]] = None) -> List[List[int]]:
    """k edge-disjoint random maximal matchings avoiding `forbidden`, each
    thinned by dropping every edge with probability gamma."""
    rng = random.Random(seed)
    inc = H.incidence() if inc is None else inc
    used: Set[int] = set()
    out = []
    for _ in range(k):
        order = list(range(H.n))
        rng.shuffle(order)
        busy: Set[int] = set()
        M = []
        for v in order:
            if v in busy:
                continue
            cands = inc[v][:]
            for _try in range(64):
                if not cands:
                    break
                e = cands.pop(rng.randrange(len(cands)))
                if e in forbidden or e in used or busy.intersection(H.edges[e]):
                    continue
                M.append(e)
                busy.update(H.edges[e])
                break
        M = [e for e in M if rng.random() >= gamma]
        used.update(M)
        out.append(sorted(M))
    return out


def absorbable_batch(H: LinearHypergraph, rho: float, gamma: float, k: int, eps: float, seed: int,
                     inc: Optional[List[List[int]]] = None) -> AbsorbableBatch:
    """Reservoir = rho-sample of G'; matchings from random_matchings outside it; S = U."""
    view = GraphView(H, eps)
    rng = random.Random(seed)
    R = {i for i in sorted(view.cross) if rng.random() < rho}
    Ms = random_matchings(H, k, gamma, R, seed + 1, inc)
    n = H.n
    if len(view.U) <= n / 100 or len(view.U) <= (1 - 2 * eps) * n:
        expect = "perfect"
    else:
        expect = "nearly-perfect"
    return AbsorbableBatch(H, R, set(view.U), Ms, eps, expect)
