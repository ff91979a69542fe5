"""Brute-force automorphism oracle: filter all n! permutations."""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .._accel import USE_NUMBA, njit
from ..errors import CapacityError
from .permgroup import PermGroup

BRUTE_LIMIT = 9


@lru_cache(maxsize=None)
def all_permutations(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int8)
    return np.array(list(itertools.permutations(range(n))), dtype=np.int8)


def _filter_loops_py(A, perms):
    m, n = perms.shape
    keep = np.zeros(m, dtype=np.bool_)
    for k in range(m):
        ok = True
        for i in range(n):
            pi = perms[k, i]
            for j in range(i + 1, n):
                if A[pi, perms[k, j]] != A[i, j]:
                    ok = False
                    break
            if not ok:
                break
        keep[k] = ok
    return keep


_filter_loops = njit(_filter_loops_py)


def _filter_numpy(A, perms):
    idx = np.arange(len(perms))
    P = perms.astype(np.int64)
    deg = A.sum(axis=1)
    alive = idx[(deg[P] == deg[None, :]).all(axis=1)]
    for i in range(A.shape[0]):
        rows = A[P[alive, i][:, None], P[alive]]
        alive = alive[(rows == A[i][None, :]).all(axis=1)]
    keep = np.zeros(len(perms), dtype=bool)
    keep[alive] = True
    return keep


def filter_kernel():
    return _filter_loops if USE_NUMBA else _filter_numpy


def brute_automorphisms(X) -> np.ndarray:
    """Every automorphism of ``X`` as rows of an array (n <= 9)."""
    if X.n > BRUTE_LIMIT:
        raise CapacityError(f"brute-force oracle is limited to n <= {BRUTE_LIMIT}, got {X.n}")
    perms = all_permutations(X.n)
    A = X.adjacency_matrix()
    keep = filter_kernel()(A, perms)
    return perms[keep].astype(np.int64)


def brute_aut(X) -> PermGroup:
    elems = brute_automorphisms(X)
    G = PermGroup(list(elems), X.n)
    G.elements = elems
    return G
