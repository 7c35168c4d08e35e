"""Instance families: projective planes, degenerate planes, cliques, random linear
hypergraphs and the uniformizing embedding."""
from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .hypercore import LinearHypergraph, build


class NotPrime(ValueError):
    pass


class InfeasibleParams(ValueError):
    pass


class DegreeSpreadUnreachable(RuntimeError):
    def __init__(self, spread: Tuple[int, int], target: Tuple[float, float]):
        super().__init__(f"achieved degrees {spread}, wanted within {target}")
        self.spread = spread
        self.target = target


class SlackTooSmall(ValueError):
    pass


class UniformityImpossible(RuntimeError):
    pass


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def next_prime(x: int) -> int:
    p = max(2, x)
    while not is_prime(p):
        p += 1
    return p


def _normalized_triples(q: int) -> List[Tuple[int, int, int]]:
    # one representative per 1-dimensional subspace of GF(q)^3, first nonzero entry = 1
    pts = [(1, b, c) for b in range(q) for c in range(q)]
    pts += [(0, 1, c) for c in range(q)]
    pts.append((0, 0, 1))
    return pts


def projective_plane(q: int) -> LinearHypergraph:
    """PG(2,q) for prime q: points and lines are normalized triples over GF(q)."""
    if not is_prime(q):
        raise NotPrime(f"{q} is not prime")
    pts = _normalized_triples(q)
    lines = []
    for a in pts:
        lines.append([i for i, p in enumerate(pts)
                      if (a[0] * p[0] + a[1] * p[1] + a[2] * p[2]) % q == 0])
    return build(len(pts), lines)


def degenerate(n: int) -> LinearHypergraph:
    """Pairs {0,i} for every other vertex plus the edge on all of 1..n-1."""
    if n < 3:
        raise InfeasibleParams("degenerate plane needs n >= 3")
    return build(n, [(0, i) for i in range(1, n)] + [tuple(range(1, n))])


def complete(n: int) -> LinearHypergraph:
    if n < 1:
        raise InfeasibleParams("need n >= 1")
    return build(n, combinations(range(n), 2))


SizeLaw = Union[Mapping[int, float], Sequence[int]]


def _law(size_law: SizeLaw) -> Tuple[List[int], List[float]]:
    if isinstance(size_law, Mapping):
        sizes = sorted(size_law)
        return sizes, [float(size_law[k]) for k in sizes]
    sizes = list(size_law)
    return sizes, [1.0] * len(sizes)


def random_linear(n: int, size_law: SizeLaw, m: int, seed: int) -> LinearHypergraph:
    """Greedy random insertion of up to m edges, rejecting linearity violations.

    Stops after 50*m attempts and returns whatever was placed.
    """
    sizes, weights = _law(size_law)
    if not sizes or min(sizes) < 1 or max(sizes) > n:
        raise InfeasibleParams(f"size law {size_law} incompatible with n={n}")
    rng = random.Random(seed)
    used: Set[Tuple[int, int]] = set()
    singles: Set[int] = set()
    edges: List[Tuple[int, ...]] = []
    attempts = 0
    while len(edges) < m and attempts < 50 * m:
        attempts += 1
        k = rng.choices(sizes, weights)[0]
        e = tuple(sorted(rng.sample(range(n), k)))
        if k == 1:
            if e[0] in singles:
                continue
            singles.add(e[0])
            edges.append(e)
            continue
        pairs = list(combinations(e, 2))
        if any(p in used for p in pairs):
            continue
        used.update(pairs)
        edges.append(e)
    return build(n, edges)


def uniform_near_regular(n: int, r: int, D: int, kappa: float, seed: int,
                         retries: int = 5) -> LinearHypergraph:
    """r-uniform linear hypergraph with all degrees in (1 +- kappa)D."""
    if D == 0:
        return build(n, [])
    if r < 2 or n < r:
        raise InfeasibleParams("need 2 <= r <= n")
    if r == 2 and D == n - 1:
        return complete(n)
    if r * D > (1 + kappa) * (n - 1) + r:
        raise InfeasibleParams(f"r*D={r * D} too large for n={n}")
    low = (1 - kappa) * D
    best: Optional[List[Tuple[int, ...]]] = None
    best_spread = (0, 0)
    for attempt in range(retries):
        rng = random.Random(f"{seed}:{attempt}")
        edges = _pack_regular(n, r, D, int((1 + kappa) * D), rng)
        deg = [0] * n
        for e in edges:
            for v in e:
                deg[v] += 1
        spread = (min(deg), max(deg))
        if best is None or spread[0] > best_spread[0]:
            best, best_spread = edges, spread
        if spread[0] >= low and spread[1] <= (1 + kappa) * D:
            return build(n, edges)
    raise DegreeSpreadUnreachable(best_spread, (low, (1 + kappa) * D))


def _pack_regular(n: int, r: int, D: int, cap: int, rng: random.Random) -> List[Tuple[int, ...]]:
    """Repeatedly give the lowest-degree vertex a new edge with random partners.

    Partners come from vertices below D; if none fit, vertices below cap are
    allowed.  A vertex that cannot be extended is retired.
    """
    deg = [0] * n
    nbrs: List[Set[int]] = [set() for _ in range(n)]
    edges: List[Tuple[int, ...]] = []
    heap = [(0, rng.random(), v) for v in range(n)]
    heapq.heapify(heap)
    open_v = list(range(n))
    where = {v: i for i, v in enumerate(open_v)}

    def close(v: int) -> None:
        i = where.pop(v)
        last = open_v.pop()
        if i < len(open_v):
            open_v[i] = last
            where[last] = i

    def partners(v: int, pool: List[int], tries: int) -> Optional[List[int]]:
        chosen = [v]
        for _ in range(tries):
            if len(chosen) == r:
                return chosen[1:]
            u = pool[rng.randrange(len(pool))]
            if u in chosen or any(u in nbrs[w] for w in chosen):
                continue
            chosen.append(u)
        return chosen[1:] if len(chosen) == r else None

    while heap:
        d, _, v = heapq.heappop(heap)
        if d != deg[v] or d >= D:
            continue
        pick = partners(v, open_v, 40 * r) if len(open_v) >= r else None
        if pick is None:
            wide = [u for u in range(n) if deg[u] < cap and u != v]
            pick = partners(v, wide, 40 * r) if len(wide) >= r - 1 else None
        if pick is None:
            if v in where:
                close(v)
            continue
        e = tuple(sorted([v] + pick))
        edges.append(e)
        for u in e:
            nbrs[u].update(e)
            nbrs[u].discard(u)
            deg[u] += 1
            if deg[u] >= D and u in where:
                close(u)
            if deg[u] < D:
                heapq.heappush(heap, (deg[u], rng.random(), u))
    return edges


@dataclass
class Embedding:
    H: LinearHypergraph
    injection: List[int]
    copies: int
    prime: int
    achieved_slack: int


def embed_uniform(H: LinearHypergraph, r: int, D: int, C: int) -> Embedding:
    """Embed H into an r-uniform linear hypergraph with degrees in [D-C, D].

    Edges are padded with private vertices up to size r.  The result is then
    taken in T = r*p copies, and every vertex whose degree is below D-C has
    its T clones joined by k parallel classes of a transversal design
    TD(r, p), where k is its missing degree.  The original vertex set is
    copy 0.
    """
    if C < 0:
        raise SlackTooSmall("slack must be non-negative")
    if any(len(e) > r for e in H.edges):
        raise InfeasibleParams(f"an edge is larger than r={r}")
    deg = H.degrees()
    if max(deg, default=0) > D:
        raise InfeasibleParams(f"max degree {max(deg)} exceeds D={D}")
    base: List[Tuple[int, ...]] = []
    nv = H.n
    for e in H.edges:
        pad = tuple(range(nv, nv + r - len(e)))
        nv += len(pad)
        base.append(e + pad)
    bdeg = deg + [1] * (nv - H.n)
    need = [D - d if d < D - C else 0 for d in bdeg]
    kmax = max(need, default=0)
    if kmax == 0:
        p, T = 0, 1
    else:
        p = next_prime(max(r, kmax))
        T = r * p
    edges: List[Tuple[int, ...]] = []
    for t in range(T):
        off = t * nv
        edges.extend(tuple(v + off for v in e) for e in base)
    if kmax:
        for x in range(nv):
            for slope in range(need[x]):
                for b in range(p):
                    # clone index of group i, position j is i*p + j
                    block = [(i * p + (b + slope * i) % p) * nv + x for i in range(r)]
                    edges.append(tuple(sorted(block)))
    out = build(T * nv, edges)
    _check_embedding(H, out, r, D, C)
    return Embedding(out, list(range(H.n)), T, p, C)


def _check_embedding(H: LinearHypergraph, out: LinearHypergraph, r: int, D: int, C: int) -> None:
    if any(len(e) != r for e in out.edges):
        raise UniformityImpossible("output is not uniform")
    restricted = {tuple(v for v in e if v < H.n) for e in out.edges}
    for e in H.edges:
        if len(e) > 1 and e not in restricted:
            raise UniformityImpossible(f"edge {e} lost")
    d_in = H.degrees()
    d_out = out.degrees()
    for v, d in enumerate(d_out):
        if not (D - C <= d <= D):
            raise UniformityImpossible(f"vertex {v} has degree {d}")
    for v in range(H.n):
        if d_in[v] >= D - C and d_out[v] != d_in[v]:
            raise UniformityImpossible(f"degree of {v} changed")
    if out.n > r * (r - 1) ** 2 * D ** 3 * max(H.n, 1):
        raise UniformityImpossible(f"{out.n} vertices exceeds the size bound")


@dataclass
class FamilySpec:
    family: str
    params: Dict[str, object] = field(default_factory=dict)


def generate(spec: FamilySpec) -> LinearHypergraph:
    p = spec.params
    if spec.family in ("projective-plane", "pg"):
        return projective_plane(int(p["q"]))
    if spec.family == "degenerate":
        return degenerate(int(p["n"]))
    if spec.family == "complete":
        return complete(int(p["n"]))
    if spec.family == "random-linear":
        return random_linear(int(p["n"]), p.get("size_law", [2, 3, 4]), int(p["m"]), int(p["seed"]))
    if spec.family == "uniform-near-regular":
        return uniform_near_regular(int(p["n"]), int(p["r"]), int(p["D"]),
                                    float(p.get("kappa", 0.05)), int(p["seed"]))
    raise InfeasibleParams(f"unknown family {spec.family!r}")
