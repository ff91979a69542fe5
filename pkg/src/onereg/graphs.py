"""Simple undirected graphs, Cayley/circulant constructors and graph6 I/O."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, Graph6ParseError, ValidationError
from .groups import FiniteGroup


class Graph:
    """Undirected simple graph on vertices ``0..n-1`` stored in CSR form.

    Neighbour lists are sorted, so the arc keys ``u*n + v`` come out sorted
    as well; several kernels rely on that.
    """

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, labels=None):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.labels = dict(labels) if labels else None

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        e = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise ValidationError("edge endpoint out of range")
        loops = e[e[:, 0] == e[:, 1]]
        if len(loops):
            raise ValidationError("self-loops are not allowed", [tuple(x) for x in loops.tolist()])
        arcs = np.concatenate([e, e[:, ::-1]]) if len(e) else e
        keys = np.unique(arcs[:, 0] * n + arcs[:, 1]) if len(arcs) else np.zeros(0, np.int64)
        src, dst = keys // max(n, 1), keys % max(n, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return cls(n, np.cumsum(indptr), dst, labels)

    @classmethod
    def from_adjacency(cls, A) -> "Graph":
        A = np.asarray(A)
        u, v = np.nonzero(np.triu(A, 1))
        return cls.from_edges(A.shape[0], zip(u.tolist(), v.tolist()))

    # -- queries ------------------------------------------------------------
    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def arc_count(self) -> int:
        return len(self.indices)

    def is_regular(self, k=None) -> bool:
        d = self.degrees
        if len(d) == 0:
            return True
        return bool((d == d[0]).all() and (k is None or d[0] == k))

    @cached_property
    def arc_keys(self) -> np.ndarray:
        """Sorted ``u*n + v`` for every ordered arc."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        return src * self.n + self.indices

    @cached_property
    def arc_sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return bool(k < len(nb) and nb[k] == v)

    def edges(self) -> list[tuple[int, int]]:
        src = self.arc_sources
        mask = src < self.indices
        return list(zip(src[mask].tolist(), self.indices[mask].tolist()))

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.uint8)
        A[self.arc_sources, self.indices] = 1
        return A

    def is_automorphism(self, perm) -> bool:
        perm = np.asarray(perm, dtype=np.int64)
        if len(perm) != self.n:
            return False
        mapped = np.sort(perm[self.arc_sources] * self.n + perm[self.indices])
        return bool(np.array_equal(mapped, self.arc_keys))

    def relabel(self, perm) -> "Graph":
        """The graph with vertex ``v`` renamed ``perm[v]``."""
        perm = np.asarray(perm, dtype=np.int64)
        e = np.array(self.edges(), dtype=np.int64).reshape(-1, 2)
        return Graph.from_edges(self.n, perm[e])

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and other.n == self.n
            and np.array_equal(other.indptr, self.indptr)
            and np.array_equal(other.indices, self.indices)
        )

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"

    # -- interchange --------------------------------------------------------
    def to_json(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self.edges()]}
        if self.labels:
            d["labels"] = {str(k): v for k, v in sorted(self.labels.items())}
        return d

    @classmethod
    def from_json(cls, data) -> "Graph":
        if isinstance(data, str):
            data = json.loads(data)
        labels = {int(k): v for k, v in data.get("labels", {}).items()} or None
        return cls.from_edges(int(data["n"]), data["edges"], labels)


def is_connected(X: Graph) -> bool:
    if X.n == 0:
        return True
    seen = np.zeros(X.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in X.neighbors(v):
            if not seen[w]:
                seen[w] = True
                queue.append(int(w))
    return bool(seen.all())


def components(X: Graph) -> np.ndarray:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    M = csr_matrix((np.ones(len(X.indices)), X.indices, X.indptr), shape=(X.n, X.n))
    return connected_components(M, directed=False)[1]


def is_bipartite(X: Graph):
    """Return a 0/1 colouring if ``X`` is bipartite, else ``None``."""
    color = np.full(X.n, -1, dtype=np.int64)
    for s in range(X.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in X.neighbors(v):
                if color[w] < 0:
                    color[w] = 1 - color[v]
                    queue.append(int(w))
                elif color[w] == color[v]:
                    return None
    return color


# -- Cayley graphs ----------------------------------------------------------
@dataclass(frozen=True)
class ConnectionSet:
    group: FiniteGroup
    elements: frozenset

    def __post_init__(self):
        G = self.group
        elems = frozenset(G.normalize(s) for s in self.elements)
        object.__setattr__(self, "elements", elems)
        bad = []
        if G.identity in elems:
            bad.append(G.identity)
        bad += sorted(s for s in elems if G.invert(s) not in elems)
        if bad:
            raise ValidationError(
                "connection set must omit the identity and be inverse-closed; offending: "
                + ", ".join(G.word(s) for s in bad),
                bad,
            )

    def sorted(self) -> list[tuple]:
        return sorted(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.sorted())

    def words(self) -> list[str]:
        return [self.group.word(s) for s in self.sorted()]


def cayley(G: FiniteGroup, S) -> Graph:
    """Cay(G, S): vertex ``g`` joined to ``s*g`` for every ``s`` in ``S``."""
    if not isinstance(S, ConnectionSet):
        S = ConnectionSet(G, frozenset(S))
    n = G.order
    s_idx = np.array([G.index(s) for s in S.sorted()], dtype=np.int64)
    g = np.arange(n, dtype=np.int64)
    nbrs = G.table[s_idx[:, None], g[None, :]].astype(np.int64)  # s * g
    u = np.repeat(g[None, :], len(s_idx), axis=0).ravel()
    labels = {k: G.label(G.element(k)) for k in range(n)}
    return Graph.from_edges(n, np.stack([u, nbrs.ravel()], axis=1), labels)


def circulant(n: int, C) -> Graph:
    C = sorted({int(c) % n for c in C})
    if 0 in C:
        raise ValidationError("0 cannot be in a circulant connection set", [0])
    bad = [c for c in C if (-c) % n not in C]
    if bad:
        raise ValidationError("circulant connection set is not closed under negation", bad)
    v = np.arange(n, dtype=np.int64)
    edges = [np.stack([v, (v + c) % n], axis=1) for c in C]
    return Graph.from_edges(n, np.concatenate(edges) if edges else [])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(k, (k + 1) % n) for k in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


# -- graph6 -----------------------------------------------------------------
def _encode_size(n: int) -> str:
    if n < 63:
        return chr(n + 63)
    if n < 258048:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(X: Graph) -> str:
    n = X.n
    bits = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    src, dst = X.arc_sources, X.indices
    mask = src < dst
    i, j = src[mask], dst[mask]
    # column-major upper triangle: bit for (i, j), i < j, sits at j(j-1)/2 + i
    bits[j * (j - 1) // 2 + i] = 1
    pad = (-len(bits)) % 6
    bits = np.concatenate([bits, np.zeros(pad, dtype=np.uint8)]).reshape(-1, 6)
    vals = bits @ (1 << np.arange(5, -1, -1)) + 63
    return _encode_size(n) + "".join(map(chr, vals.tolist()))


def from_graph6(text) -> Graph:
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii", errors="replace")
    text = text.strip()
    base = 0
    if text.startswith(">>graph6<<"):
        text, base = text[10:], 10
    for k, ch in enumerate(text):
        if not 63 <= ord(ch) <= 126:
            raise Graph6ParseError(f"invalid graph6 character {ch!r}", base + k)
    if not text:
        raise Graph6ParseError("empty graph6 string", base)
    if text[0] != "~":
        n, pos = ord(text[0]) - 63, 1
    elif len(text) >= 2 and text[1] == "~":
        if len(text) < 8:
            raise Graph6ParseError("truncated size header", base + len(text))
        n = 0
        for ch in text[2:8]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 8
    else:
        if len(text) < 4:
            raise Graph6ParseError("truncated size header", base + len(text))
        n = 0
        for ch in text[1:4]:
            n = (n << 6) | (ord(ch) - 63)
        pos = 4
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    body = text[pos:]
    if len(body) != need:
        raise Graph6ParseError(
            f"expected {need} data bytes for n={n}, found {len(body)}", base + pos + min(len(body), need)
        )
    vals = np.frombuffer(body.encode("ascii"), dtype=np.uint8).astype(np.int64) - 63
    bits = ((vals[:, None] >> np.arange(5, -1, -1)) & 1).ravel()[:nbits]
    k = np.flatnonzero(bits)
    j = ((1 + np.sqrt(1 + 8 * k)) // 2).astype(np.int64)
    # guard against floating error in the triangular-root estimate
    j = np.where(j * (j - 1) // 2 > k, j - 1, j)
    j = np.where((j + 1) * j // 2 <= k, j + 1, j)
    i = k - j * (j - 1) // 2
    return Graph.from_edges(n, np.stack([i, j], axis=1))


def read_graph6_file(path) -> Graph:
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        for line in fh:
            if line.strip():
                return from_graph6(line)
    raise Graph6ParseError("no graph6 line found", 0)


def require_valency(X: Graph, k: int):
    if not X.is_regular(k):
        raise DomainError(f"graph must be {k}-valent")
