"""Core data model for linear hypergraphs and their edge colorings."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple


class LinearityViolation(ValueError):
    def __init__(self, e: int, f: int):
        super().__init__(f"edges {e} and {f} share two or more vertices")
        self.pair = (e, f)


class DuplicateEdge(ValueError):
    pass


class BadVertexId(ValueError):
    pass


class Uncolored(ValueError):
    def __init__(self, edge: int):
        super().__init__(f"edge {edge} has no color")
        self.edge = edge


class NotAMatching(ValueError):
    def __init__(self, index: int):
        super().__init__(f"matching {index} has two intersecting edges")
        self.index = index


class HierarchyError(ValueError):
    pass


@dataclass(frozen=True)
class LinearHypergraph:
    n: int
    edges: Tuple[Tuple[int, ...], ...]
    multi: bool = False

    @property
    def m(self) -> int:
        return len(self.edges)

    def incidence(self) -> List[List[int]]:
        """Edge indices at each vertex, in increasing edge order."""
        inc: List[List[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return inc

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def sizes(self) -> List[int]:
        return [len(e) for e in self.edges]

    def sub(self, idx: Iterable[int]) -> "LinearHypergraph":
        return LinearHypergraph(self.n, tuple(self.edges[i] for i in idx), self.multi)


@dataclass
class EdgeColoring:
    colors: List[int]
    palette_size: int
    meta: Dict[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for c in self.colors:
            if c is not None and not (0 <= c < self.palette_size):
                raise ValueError(f"color {c} outside palette of size {self.palette_size}")

    @property
    def used(self) -> int:
        return len({c for c in self.colors if c is not None})

    def classes(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for i, c in enumerate(self.colors):
            out.setdefault(c, []).append(i)
        return out

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> "EdgeColoring":
        return cls(list(colors), max(colors, default=-1) + 1)

    def compact(self) -> "EdgeColoring":
        """Relabel colors to 0..k-1 by first appearance; None stays None."""
        remap: Dict[int, int] = {}
        out = []
        for c in self.colors:
            if c is None:
                out.append(None)
                continue
            if c not in remap:
                remap[c] = len(remap)
            out.append(remap[c])
        return EdgeColoring(out, len(remap))


@dataclass(frozen=True)
class Hierarchy:
    xi: float = 0.005
    r1: int = 16
    r0: int = 256
    beta: float = 0.008
    kappa: float = 0.012
    gamma1: float = 0.02
    eps1: float = 0.04
    rho1: float = 0.08
    sigma: float = 0.12
    delta: float = 0.16
    gamma2: float = 0.22
    rho2: float = 0.3
    eps2: float = 0.4
    strict: bool = False

    @property
    def inv_r1(self) -> float:
        return 1.0 / self.r1

    @property
    def inv_r0(self) -> float:
        return 1.0 / self.r0

    def chain(self) -> List[Tuple[str, float]]:
        names = ["xi", "beta", "kappa", "gamma1", "eps1", "rho1", "sigma",
                 "delta", "gamma2", "rho2", "eps2"]
        return [(k, getattr(self, k)) for k in names]

    def validate(self) -> "Hierarchy":
        ch = self.chain()
        for name, val in ch:
            if not 0 < val < 1:
                raise HierarchyError(f"{name}={val} not in (0,1)")
        for (a, x), (b, y) in zip(ch, ch[1:]):
            if not x < y:
                raise HierarchyError(f"{a}={x} must be below {b}={y}")
        if not (1 < self.r1 < self.r0):
            raise HierarchyError("need 1 < r1 < r0")
        if not self.inv_r0 < self.xi:
            raise HierarchyError("1/r0 must be below xi")
        if self.strict and not (self.xi < self.inv_r1 < self.beta):
            raise HierarchyError("1/r1 must sit between xi and beta")
        return self

    def as_dict(self) -> Dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def build(n: int, edges: Iterable[Iterable[int]], multi: bool = False) -> LinearHypergraph:
    """Validate and canonicalize a linear hypergraph."""
    canon: List[Tuple[int, ...]] = []
    for raw in edges:
        e = tuple(sorted(set(int(v) for v in raw)))
        if not e:
            raise ValueError("empty edge")
        if e[0] < 0 or e[-1] >= n:
            raise BadVertexId(f"edge {e} has ids outside [0, {n})")
        canon.append(e)
    seen_single: Set[int] = set()
    owner: Dict[Tuple[int, int], int] = {}
    for i, e in enumerate(canon):
        if len(e) == 1:
            if e[0] in seen_single and not multi:
                raise DuplicateEdge(f"singleton {e} repeated")
            seen_single.add(e[0])
            continue
        for a in range(len(e)):
            for b in range(a + 1, len(e)):
                key = (e[a], e[b])
                j = owner.get(key)
                if j is not None:
                    if canon[j] == e:
                        raise DuplicateEdge(f"edge {e} repeated at {j} and {i}")
                    raise LinearityViolation(j, i)
                owner[key] = i
    return LinearHypergraph(n, tuple(canon), multi)


def two_graph(H: LinearHypergraph) -> List[int]:
    """Indices of the size-2 edges."""
    return [i for i, e in enumerate(H.edges) if len(e) == 2]


def graph_degrees(H: LinearHypergraph, idx: Optional[Iterable[int]] = None) -> List[int]:
    deg = [0] * H.n
    for i in (two_graph(H) if idx is None else idx):
        a, b = H.edges[i]
        deg[a] += 1
        deg[b] += 1
    return deg


@dataclass
class DerivedViews:
    G: List[int]
    U: Set[int]
    G_cross: List[int]
    degrees: List[int]


def derived_views(H: LinearHypergraph, eps: float) -> DerivedViews:
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0,1)")
    G = two_graph(H)
    deg = graph_degrees(H, G)
    U = {v for v in range(H.n) if deg[v] >= (1 - eps) * H.n}
    cross = [i for i in G if H.edges[i][0] in U or H.edges[i][1] in U]
    return DerivedViews(G, U, cross, deg)


def line_graph(H: LinearHypergraph) -> List[Set[int]]:
    adj: List[Set[int]] = [set() for _ in range(H.m)]
    for lst in H.incidence():
        for a in range(len(lst)):
            for b in range(a + 1, len(lst)):
                adj[lst[a]].add(lst[b])
                adj[lst[b]].add(lst[a])
    return adj


def volume(H: LinearHypergraph, W: Optional[Iterable[int]] = None) -> float:
    if H.n < 2:
        return 0.0
    idx = range(H.m) if W is None else W
    return sum(comb(len(H.edges[i]), 2) for i in idx) / comb(H.n, 2)


@dataclass
class EdgeClass:
    tags: List[str]
    fpp_extremal: List[bool]
    huge: List[bool]

    def indices(self, tag: str) -> List[int]:
        return [i for i, t in enumerate(self.tags) if t == tag]


def classify(H: LinearHypergraph, hier: Hierarchy) -> EdgeClass:
    n = H.n
    root = math.sqrt(n)
    tags, fpp, huge = [], [], []
    for e in H.edges:
        k = len(e)
        tags.append("small" if k <= hier.r1 else "medium" if k <= hier.r0 else "large")
        fpp.append((1 - hier.delta) * root <= k <= (1 + hier.delta) * root)
        huge.append(k >= hier.beta * n / 4)
    assert huge_edge_bound_holds(H), "huge-edge count bound violated"
    return EdgeClass(tags, fpp, huge)


def huge_edge_bound_holds(H: LinearHypergraph) -> bool:
    """Check |{e : |e| >= a n}| <= 2/a at every threshold a realised by an edge.

    The bound needs a n to dominate 1/a, so thresholds with (2/a + 1)^2 >= 2n
    are checked in the exact form: the i-th edge adds at least a n - (i-1)
    fresh vertices, and the total cannot exceed n.
    """
    n = H.n
    sizes = sorted((len(e) for e in H.edges if len(e) >= 2), reverse=True)
    for count, k in enumerate(sizes, start=1):
        alpha = k / n
        if (2 / alpha + 1) ** 2 < 2 * n:
            if count > 2 / alpha + 1e-9:
                return False
        elif (count * k - count * (count - 1) // 2 if count <= k else k * (k + 1) // 2) > n:
            return False
    return True


def verify_coloring(H: LinearHypergraph, col: EdgeColoring) -> Optional[Tuple[int, int]]:
    """Return None when proper, else the first intersecting pair sharing a color."""
    if len(col.colors) != H.m:
        raise Uncolored(min(len(col.colors), H.m - 1))
    for i, c in enumerate(col.colors):
        if c is None:
            raise Uncolored(i)
    worst: Optional[Tuple[int, int]] = None
    for lst in H.incidence():
        seen: Dict[int, int] = {}
        for i in lst:
            c = col.colors[i]
            if c in seen:
                pair = (seen[c], i)
                if worst is None or pair < worst:
                    worst = pair
            else:
                seen[c] = i
    return worst


def is_proper(H: LinearHypergraph, colors: Sequence[int]) -> bool:
    return verify_coloring(H, EdgeColoring(list(colors), max(colors, default=-1) + 1)) is None


@dataclass
class CoverageReport:
    status: str
    defects: Dict[int, int] = field(default_factory=dict)
    misses: Dict[int, int] = field(default_factory=dict)


def coverage(matchings: Sequence[Iterable[Iterable[int]]], U: Iterable[int], S: Iterable[int]) -> CoverageReport:
    U = set(U)
    S = set(S)
    defects: Dict[int, int] = {}
    misses: Dict[int, int] = {u: 0 for u in U}
    nearly = True
    for i, M in enumerate(matchings):
        covered: Set[int] = set()
        for e in M:
            e = set(e)
            if covered & e:
                raise NotAMatching(i)
            covered |= e
        missing = sorted(U - covered)
        for u in missing:
            misses[u] += 1
        if len(missing) > 1 or (missing and missing[0] not in S):
            nearly = False
        elif missing:
            defects[i] = missing[0]
    if not defects and all(v == 0 for v in misses.values()):
        return CoverageReport("perfect", {}, misses)
    if nearly and all(v <= 1 for v in misses.values()):
        return CoverageReport("nearly-perfect", defects, misses)
    return CoverageReport("neither", {}, misses)


@dataclass
class Fullness:
    full: bool
    high: int
    complete: int


def is_full(H: LinearHypergraph, rho: float, eps: float) -> Fullness:
    n = H.n
    deg = graph_degrees(H)
    high = sum(1 for d in deg if d >= (1 - eps) * n)
    complete = sum(1 for d in deg if d == n - 1)
    ok = high >= (1 - 10 * eps) * n and complete >= (rho - 15 * eps) * n
    return Fullness(ok, high, complete)


def dumps_lhg(H: LinearHypergraph) -> str:
    lines = [f"n {H.n}"]
    lines += ["e " + " ".join(map(str, e)) for e in H.edges]
    return "\n".join(lines) + "\n"


def loads_lhg(text: str, multi: bool = False) -> LinearHypergraph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "n" and n is None:
            n = int(rest[0])
        elif head == "e":
            edges.append([int(x) for x in rest])
        else:
            raise ValueError(f"line {lineno}: unexpected token {head!r}")
    if n is None:
        raise ValueError("missing 'n <N>' header")
    return build(n, edges, multi=multi)


def read_lhg(path: str, multi: bool = False) -> LinearHypergraph:
    with open(path) as fh:
        return loads_lhg(fh.read(), multi)


def write_lhg(H: LinearHypergraph, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_lhg(H))


def dumps_coloring(col: EdgeColoring) -> str:
    return json.dumps({"palette_size": col.palette_size, "colors": col.colors}, sort_keys=True) + "\n"


def loads_coloring(text: str) -> EdgeColoring:
    obj = json.loads(text)
    return EdgeColoring([int(c) for c in obj["colors"]], int(obj["palette_size"]))
