"""Selects the compiled kernels when built, else the pure-Python ones."""
import os
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np

from . import _pykernels

try:
    if os.environ.get("EFL_PURE_PYTHON"):
        raise ImportError("pure mode requested")
    from . import _kernels as _impl
    BACKEND = "cython"
except ImportError:
    _impl = _pykernels
    BACKEND = "python"


def to_csr(adj: Sequence[Set[int]]) -> Tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(len(adj) + 1, dtype=np.int64)
    for i, nb in enumerate(adj):
        indptr[i + 1] = indptr[i] + len(nb)
    indices = np.fromiter((j for nb in adj for j in sorted(nb)), dtype=np.int64, count=int(indptr[-1]))
    return indptr, indices


def forward_degrees(adj: Sequence[Set[int]], pos: Sequence[int], impl=None) -> List[int]:
    indptr, indices = to_csr(adj)
    return (impl or _impl).forward_degrees(indptr, indices, np.asarray(pos, dtype=np.int64))


def dsatur(adj: Sequence[Set[int]], impl=None) -> List[int]:
    indptr, indices = to_csr(adj)
    return (impl or _impl).dsatur(indptr, indices)


def color_search(adj: Sequence[Set[int]], k: int, node_limit: int = 5_000_000,
                 impl=None) -> Tuple[int, Optional[List[int]]]:
    indptr, indices = to_csr(adj)
    return (impl or _impl).color_search(indptr, indices, int(k), int(node_limit))
