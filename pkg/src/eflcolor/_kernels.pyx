# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops in _pykernels."""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, calloc, free


def forward_degrees(const long[:] indptr, const long[:] indices, const long[:] pos):
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef Py_ssize_t v, j
    cdef long pv, c
    out = np.zeros(nv, dtype=np.int64)
    cdef long[:] o = out
    for v in range(nv):
        pv = pos[v]
        c = 0
        for j in range(indptr[v], indptr[v + 1]):
            if pos[indices[j]] < pv:
                c += 1
        o[v] = c
    return [int(x) for x in out]


def dsatur(const long[:] indptr, const long[:] indices):
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef Py_ssize_t v, j, u, best, step
    cdef long bs, bd, c, s
    if nv == 0:
        return []
    cdef long *color = <long *> malloc(nv * sizeof(long))
    cdef long *deg = <long *> malloc(nv * sizeof(long))
    cdef long *sat = <long *> calloc(nv, sizeof(long))
    # neighbour-color counts, colors never exceed nv
    cdef long *cnt = <long *> calloc(nv * (nv + 1), sizeof(long))
    try:
        for v in range(nv):
            color[v] = -1
            deg[v] = indptr[v + 1] - indptr[v]
        for step in range(nv):
            best = -1
            bs = -1
            bd = -1
            for v in range(nv):
                if color[v] >= 0:
                    continue
                s = sat[v]
                if s > bs or (s == bs and deg[v] > bd):
                    best = v
                    bs = s
                    bd = deg[v]
            c = 0
            while cnt[best * (nv + 1) + c] != 0:
                c += 1
            color[best] = c
            for j in range(indptr[best], indptr[best + 1]):
                u = indices[j]
                if cnt[u * (nv + 1) + c] == 0:
                    sat[u] += 1
                cnt[u * (nv + 1) + c] += 1
        return [color[v] for v in range(nv)]
    finally:
        free(color)
        free(deg)
        free(sat)
        free(cnt)


cdef struct Search:
    Py_ssize_t nv
    long k
    const long *indptr
    const long *indices
    long *deg
    long *color
    long *cnt
    long *sat
    long nodes
    long limit


cdef inline void _assign(Search *st, Py_ssize_t v, long c, int delta) nogil:
    cdef Py_ssize_t j, u
    cdef long *row
    for j in range(st.indptr[v], st.indptr[v + 1]):
        u = st.indices[j]
        row = st.cnt + u * st.k
        if delta > 0:
            if row[c] == 0:
                st.sat[u] += 1
            row[c] += 1
        else:
            row[c] -= 1
            if row[c] == 0:
                st.sat[u] -= 1


cdef int _rec(Search *st, Py_ssize_t depth, long used) nogil:
    cdef Py_ssize_t v, best
    cdef long bs, bd, c, top
    cdef int r
    if depth == st.nv:
        return 1
    st.nodes += 1
    if st.nodes > st.limit:
        return -1
    best = -1
    bs = -1
    bd = -1
    for v in range(st.nv):
        if st.color[v] < 0 and (st.sat[v] > bs or (st.sat[v] == bs and st.deg[v] > bd)):
            best = v
            bs = st.sat[v]
            bd = st.deg[v]
    top = used + 1
    if top > st.k:
        top = st.k
    for c in range(top):
        if st.cnt[best * st.k + c] != 0:
            continue
        st.color[best] = c
        _assign(st, best, c, 1)
        r = _rec(st, depth + 1, used if used > c + 1 else c + 1)
        if r != 0:
            if r == -1:
                _assign(st, best, c, -1)
                st.color[best] = -1
            return r
        _assign(st, best, c, -1)
        st.color[best] = -1
    return 0


def color_search(const long[:] indptr, const long[:] indices, long k, long node_limit):
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef Py_ssize_t v
    cdef Search st
    cdef int r
    if nv == 0:
        return 1, []
    if k <= 0:
        return 0, None
    st.nv = nv
    st.k = k
    st.indptr = &indptr[0]
    st.indices = &indices[0] if indices.shape[0] > 0 else NULL
    st.deg = <long *> malloc(nv * sizeof(long))
    st.color = <long *> malloc(nv * sizeof(long))
    st.cnt = <long *> calloc(nv * k, sizeof(long))
    st.sat = <long *> calloc(nv, sizeof(long))
    st.nodes = 0
    st.limit = node_limit
    try:
        for v in range(nv):
            st.color[v] = -1
            st.deg[v] = indptr[v + 1] - indptr[v]
        with nogil:
            r = _rec(&st, 0, 0)
        if r == 1:
            return 1, [st.color[v] for v in range(nv)]
        return r, None
    finally:
        free(st.deg)
        free(st.color)
        free(st.cnt)
        free(st.sat)
