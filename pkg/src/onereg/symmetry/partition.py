"""Ordered partitions and equitable refinement.

Two kernels implement the same splitter-queue refinement: ``_refine_loops``
(compiled with numba unless ``ONEREG_DISABLE_NUMBA`` is set) and
``_refine_numpy`` (vectorised numpy).  They produce identical partitions,
cell orders and trace values, so canonical forms do not depend on the
backend.

Partition state, all int64 arrays of length n:

``lab``     vertex at each position
``pos``     position of each vertex
``cstart``  start position of the cell holding each position
``cend``    for a cell start ``c``, one past its last position
"""
from __future__ import annotations

from collections import deque

import numpy as np

from .._accel import USE_NUMBA, njit

HASH_MOD = 2147483647
HASH_MUL = 1000003


@njit
def _mix(h, x):
    return (h * HASH_MUL + x + 1) % HASH_MOD


def _refine_loops_py(indptr, indices, lab, pos, cstart, cend, queue, nq, ncells):
    n = lab.shape[0]
    qbuf = np.empty(3 * n + 1, dtype=np.int64)
    inq = np.zeros(n, dtype=np.bool_)
    head = 0
    tail = 0
    for k in range(nq):
        qbuf[tail] = queue[k]
        tail += 1
        inq[queue[k]] = True
    count = np.zeros(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    cellmark = np.zeros(n, dtype=np.bool_)
    cells = np.empty(n, dtype=np.int64)
    h = 0
    while head < tail and ncells < n:
        s = qbuf[head]
        head += 1
        inq[s] = False
        e = cend[s]
        nt = 0
        for p in range(s, e):
            v = lab[p]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if count[w] == 0:
                    touched[nt] = w
                    nt += 1
                count[w] += 1
        nc = 0
        for k in range(nt):
            c = cstart[pos[touched[k]]]
            if not cellmark[c]:
                cellmark[c] = True
                cells[nc] = c
                nc += 1
        sorted_cells = np.sort(cells[:nc])
        for k in range(nc):
            c = sorted_cells[k]
            cellmark[c] = False
            ce = cend[c]
            size = ce - c
            if size == 1:
                continue
            seg = lab[c:ce].copy()
            keys = np.empty(size, dtype=np.int64)
            kmin = count[seg[0]]
            kmax = kmin
            for q in range(size):
                keys[q] = count[seg[q]]
                if keys[q] < kmin:
                    kmin = keys[q]
                if keys[q] > kmax:
                    kmax = keys[q]
            if kmin == kmax:
                continue
            order = np.argsort(keys, kind="mergesort")
            for q in range(size):
                v = seg[order[q]]
                lab[c + q] = v
                pos[v] = c + q
            was_queued = inq[c]
            fs = c
            best_start = c
            best_size = -1
            nfrag = 0
            for q in range(1, size + 1):
                if q == size or keys[order[q]] != keys[order[q - 1]]:
                    fe = c + q
                    for r in range(fs, fe):
                        cstart[r] = fs
                    cend[fs] = fe
                    h = _mix(h, c)
                    h = _mix(h, keys[order[q - 1]])
                    h = _mix(h, fe - fs)
                    if fe - fs > best_size:
                        best_size = fe - fs
                        best_start = fs
                    nfrag += 1
                    fs = fe
            ncells += nfrag - 1
            # enqueue fragments
            fs = c
            while fs < ce:
                fe = cend[fs]
                if was_queued:
                    if fs != c and not inq[fs]:
                        qbuf[tail] = fs
                        tail += 1
                        inq[fs] = True
                elif fs != best_start and not inq[fs]:
                    qbuf[tail] = fs
                    tail += 1
                    inq[fs] = True
                fs = fe
        for k in range(nt):
            count[touched[k]] = 0
    return h, ncells


_refine_loops = njit(_refine_loops_py)


def _refine_numpy(indptr, indices, lab, pos, cstart, cend, queue, nq, ncells):
    n = lab.shape[0]
    deg = np.diff(indptr)
    q = deque(int(x) for x in queue[:nq])
    inq = np.zeros(n, dtype=bool)
    inq[np.asarray(queue[:nq], dtype=np.int64)] = True
    h = 0
    while q and ncells < n:
        s = q.popleft()
        inq[s] = False
        e = int(cend[s])
        members = lab[s:e]
        d = deg[members]
        total = int(d.sum())
        if total == 0:
            continue
        offs = np.repeat(indptr[members] - np.cumsum(d) + d, d) + np.arange(total)
        count = np.bincount(indices[offs], minlength=n)
        hit = np.flatnonzero(count)
        for c in np.unique(cstart[pos[hit]]).tolist():
            ce = int(cend[c])
            if ce - c == 1:
                continue
            seg = lab[c:ce]
            keys = count[seg]
            if keys.min() == keys.max():
                continue
            order = np.argsort(keys, kind="stable")
            seg = seg[order]
            keys = keys[order]
            lab[c:ce] = seg
            pos[seg] = np.arange(c, ce)
            cuts = (np.flatnonzero(np.diff(keys)) + 1 + c).tolist()
            starts = [c] + cuts
            ends = cuts + [ce]
            was_queued = bool(inq[c])
            sizes = [fe - fs for fs, fe in zip(starts, ends)]
            best = starts[int(np.argmax(sizes))]
            for fs, fe in zip(starts, ends):
                cstart[fs:fe] = fs
                cend[fs] = fe
                h = (h * HASH_MUL + c + 1) % HASH_MOD
                h = (h * HASH_MUL + int(keys[fs - c]) + 1) % HASH_MOD
                h = (h * HASH_MUL + (fe - fs) + 1) % HASH_MOD
            ncells += len(starts) - 1
            for fs in starts:
                if (fs != c if was_queued else fs != best) and not inq[fs]:
                    q.append(fs)
                    inq[fs] = True
    return h, ncells


def refine_kernel():
    return _refine_loops if USE_NUMBA else _refine_numpy


class OrderedPartition:
    """Mutable ordered partition of ``range(n)``; copy before branching."""

    __slots__ = ("lab", "pos", "cstart", "cend", "ncells")

    def __init__(self, lab, pos, cstart, cend, ncells):
        self.lab = lab
        self.pos = pos
        self.cstart = cstart
        self.cend = cend
        self.ncells = ncells

    @classmethod
    def unit(cls, n: int) -> "OrderedPartition":
        lab = np.arange(n, dtype=np.int64)
        cend = np.zeros(n, dtype=np.int64)
        if n:
            cend[0] = n
        return cls(lab, lab.copy(), np.zeros(n, dtype=np.int64), cend, 1 if n else 0)

    @classmethod
    def from_cells(cls, n: int, cells) -> "OrderedPartition":
        lab = np.concatenate([np.asarray(sorted(c), dtype=np.int64) for c in cells]) if cells else np.zeros(0, np.int64)
        if sorted(lab.tolist()) != list(range(n)):
            raise ValueError("cells do not partition the vertex set")
        pos = np.empty(n, dtype=np.int64)
        pos[lab] = np.arange(n)
        cstart = np.empty(n, dtype=np.int64)
        cend = np.zeros(n, dtype=np.int64)
        at = 0
        for c in cells:
            cstart[at:at + len(c)] = at
            cend[at] = at + len(c)
            at += len(c)
        return cls(lab, pos, cstart, cend, len(cells))

    def copy(self) -> "OrderedPartition":
        return OrderedPartition(self.lab.copy(), self.pos.copy(), self.cstart.copy(), self.cend.copy(), self.ncells)

    @property
    def n(self):
        return len(self.lab)

    @property
    def is_discrete(self) -> bool:
        return self.ncells == len(self.lab)

    def starts(self) -> np.ndarray:
        return np.flatnonzero(self.cstart == np.arange(len(self.lab)))

    def cells(self) -> list[list[int]]:
        return [sorted(self.lab[s:self.cend[s]].tolist()) for s in self.starts()]

    def cell_of(self, v: int) -> int:
        return int(self.cstart[self.pos[v]])

    def target_cell(self):
        """First smallest non-singleton cell as ``(start, end)``, or ``None``."""
        s = self.starts()
        sizes = self.cend[s] - s
        big = sizes > 1
        if not big.any():
            return None
        cand = np.flatnonzero(big)
        k = cand[np.argmin(sizes[cand])]
        return int(s[k]), int(self.cend[s[k]])

    def refine(self, graph, splitters=None) -> int:
        """Refine in place to the coarsest equitable refinement; return the trace."""
        if splitters is None:
            splitters = self.starts()
        queue = np.asarray(splitters, dtype=np.int64)
        h, nc = refine_kernel()(graph.indptr, graph.indices, self.lab, self.pos, self.cstart,
                                self.cend, queue, len(queue), self.ncells)
        self.ncells = int(nc)
        return int(h)

    def individualize(self, graph, v: int):
        """Child partition with ``v`` split off its cell, refined; returns (child, trace)."""
        child = self.copy()
        p = int(child.pos[v])
        c = int(child.cstart[p])
        e = int(child.cend[c])
        u = int(child.lab[c])
        child.lab[c], child.lab[p] = v, u
        child.pos[u], child.pos[v] = p, c
        if e - c > 1:
            child.cstart[c + 1:e] = c + 1
            child.cend[c + 1] = e
            child.cend[c] = c + 1
            child.ncells += 1
        h = child.refine(graph, [c])
        return child, (c, e - c, h)


def refine(X, partition=None) -> OrderedPartition:
    """Coarsest equitable refinement of ``partition`` (default: the unit partition)."""
    if partition is None:
        part = OrderedPartition.unit(X.n)
    elif isinstance(partition, OrderedPartition):
        part = partition.copy()
    else:
        part = OrderedPartition.from_cells(X.n, partition)
    part.refine(X)
    return part


def is_equitable(X, cells) -> bool:
    """Direct check used by tests: neighbour counts constant per (cell, cell)."""
    which = np.empty(X.n, dtype=np.int64)
    for k, c in enumerate(cells):
        which[list(c)] = k
    for c in cells:
        rows = {tuple(np.bincount(which[X.neighbors(v)], minlength=len(cells))) for v in c}
        if len(rows) > 1:
            return False
    return True
