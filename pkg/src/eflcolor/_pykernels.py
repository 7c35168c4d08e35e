"""Pure-Python versions of the hot loops; used when the compiled module is absent."""
from typing import List, Optional, Sequence, Tuple


def forward_degrees(indptr: Sequence[int], indices: Sequence[int], pos: Sequence[int]) -> List[int]:
    nv = len(indptr) - 1
    indptr = list(indptr)
    indices = list(indices)
    pos = list(pos)
    out = [0] * nv
    for v in range(nv):
        pv = pos[v]
        c = 0
        for j in range(indptr[v], indptr[v + 1]):
            if pos[indices[j]] < pv:
                c += 1
        out[v] = c
    return out


def dsatur(indptr: Sequence[int], indices: Sequence[int]) -> List[int]:
    """DSATUR greedy coloring of a graph in CSR form.

    Picks the uncolored vertex of largest saturation, then largest degree,
    then lowest index; assigns the smallest color absent from its neighbours.
    """
    nv = len(indptr) - 1
    indptr = list(indptr)
    indices = list(indices)
    deg = [indptr[v + 1] - indptr[v] for v in range(nv)]
    color = [-1] * nv
    seen = [set() for _ in range(nv)]
    for _ in range(nv):
        best = -1
        bs = bd = -1
        for v in range(nv):
            if color[v] >= 0:
                continue
            s = len(seen[v])
            if s > bs or (s == bs and deg[v] > bd):
                best, bs, bd = v, s, deg[v]
        c = 0
        sv = seen[best]
        while c in sv:
            c += 1
        color[best] = c
        for j in range(indptr[best], indptr[best + 1]):
            seen[indices[j]].add(c)
    return color


def color_search(indptr: Sequence[int], indices: Sequence[int], k: int,
                 node_limit: int) -> Tuple[int, Optional[List[int]]]:
    """Backtracking k-coloring with saturation-based branching.

    Returns (1, colors) on success, (0, None) if no k-coloring exists and
    (-1, None) when node_limit nodes were explored without a verdict.
    """
    nv = len(indptr) - 1
    indptr = list(indptr)
    indices = list(indices)
    if nv == 0:
        return 1, []
    deg = [indptr[v + 1] - indptr[v] for v in range(nv)]
    color = [-1] * nv
    cnt = [[0] * k for _ in range(nv)]
    sat = [0] * nv
    nodes = [0]

    def pick() -> int:
        best = -1
        bs = bd = -1
        for v in range(nv):
            if color[v] < 0 and (sat[v] > bs or (sat[v] == bs and deg[v] > bd)):
                best, bs, bd = v, sat[v], deg[v]
        return best

    def assign(v: int, c: int, delta: int) -> None:
        for j in range(indptr[v], indptr[v + 1]):
            u = indices[j]
            row = cnt[u]
            if delta > 0:
                if row[c] == 0:
                    sat[u] += 1
                row[c] += 1
            else:
                row[c] -= 1
                if row[c] == 0:
                    sat[u] -= 1

    def rec(depth: int, used: int) -> int:
        if depth == nv:
            return 1
        nodes[0] += 1
        if nodes[0] > node_limit:
            return -1
        v = pick()
        row = cnt[v]
        top = min(k, used + 1)
        for c in range(top):
            if row[c]:
                continue
            color[v] = c
            assign(v, c, 1)
            r = rec(depth + 1, max(used, c + 1))
            if r != 0:
                if r == -1:
                    assign(v, c, -1)
                    color[v] = -1
                return r
            assign(v, c, -1)
            color[v] = -1
        return 0

    r = rec(0, 0)
    if r == 1:
        return 1, list(color)
    return r, None
