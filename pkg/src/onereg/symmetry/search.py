"""Individualization-refinement search for automorphisms and canonical forms."""
from __future__ import annotations

import numpy as np

from ..errors import CapacityError, IntegrityError
from .partition import OrderedPartition
from .permgroup import PermGroup

DEFAULT_NODE_LIMIT = 2_000_000


def _orbit_labels(gens, n):
    if not gens:
        return np.arange(n)
    return PermGroup(gens, n).orbit_labels()


def _fixes(g, pts) -> bool:
    return all(g[p] == p for p in pts)


class AutomorphismSearch:
    """First-path automorphism search with orbit pruning.

    The first leaf is reached by always individualizing the smallest vertex
    of the first smallest non-singleton cell.  Working back up the path, each
    level's target cell is split into vertices equivalent to the path vertex
    (found as automorphisms or via orbits of those already found) and
    vertices whose subtrees hold no leaf matching the first leaf.
    """

    def __init__(self, graph, node_limit=DEFAULT_NODE_LIMIT):
        self.graph = graph
        self.n = graph.n
        self.node_limit = node_limit
        self.nodes = 0
        self.gens: list[np.ndarray] = []

    def _child(self, part, v):
        self.nodes += 1
        if self.nodes > self.node_limit:
            raise CapacityError(f"search exceeded {self.node_limit} nodes")
        return part.individualize(self.graph, v)

    def run(self):
        root = OrderedPartition.unit(self.n)
        root.refine(self.graph)
        parts, verts, traces = [root], [], []
        node = root
        while not node.is_discrete:
            c, e = node.target_cell()
            v = int(node.lab[c:e].min())
            node, t = self._child(node, v)
            parts.append(node)
            verts.append(v)
            traces.append(t)
        self.first_leaf = node.lab.copy()
        self.path, self.traces = verts, traces
        orbit_sizes = [0] * len(verts)
        for k in reversed(range(len(verts))):
            part = parts[k]
            c, e = part.target_cell()
            cell = np.sort(part.lab[c:e]).tolist()
            prefix = verts[:k]
            vk = verts[k]
            failed: list[int] = []
            labels = _orbit_labels([g for g in self.gens if _fixes(g, prefix)], self.n)
            for w in cell:
                if labels[w] == labels[vk] or any(labels[w] == labels[f] for f in failed):
                    continue
                g = self._probe(part, w, k, prefix + [w])
                if g is None:
                    failed.append(w)
                else:
                    self.gens.append(g)
                    labels = _orbit_labels([h for h in self.gens if _fixes(h, prefix)], self.n)
            orbit_sizes[k] = int(sum(1 for w in cell if labels[w] == labels[vk]))
        self.orbit_sizes = orbit_sizes
        order = 1
        for s in orbit_sizes:
            order *= s
        self.order = order
        return self

    def _probe(self, part, w, level, prefix):
        child, t = self._child(part, w)
        if t != self.traces[level]:
            return None
        return self._descend(child, level + 1, prefix)

    def _descend(self, node, level, prefix):
        if node.is_discrete:
            if level != len(self.path):
                return None
            gamma = np.empty(self.n, dtype=np.int64)
            gamma[self.first_leaf] = node.lab
            return gamma if self.graph.is_automorphism(gamma) else None
        if level >= len(self.path):
            return None
        c, e = node.target_cell()
        tried: list[int] = []
        labels = _orbit_labels([g for g in self.gens if _fixes(g, prefix)], self.n)
        for u in np.sort(node.lab[c:e]).tolist():
            if any(labels[u] == labels[x] for x in tried):
                continue
            tried.append(u)
            g = self._probe(node, u, level, prefix + [u])
            if g is not None:
                return g
        return None


class CanonicalSearch:
    """Least leaf certificate over the whole search tree.

    Children of a node are orbit representatives of the pointwise stabilizer
    of the node's individualized vertices inside the full automorphism group;
    subtrees whose trace already exceeds the best one are cut.
    """

    def __init__(self, graph, aut: PermGroup, node_limit=DEFAULT_NODE_LIMIT):
        self.graph = graph
        self.aut = aut
        self.n = graph.n
        self.node_limit = node_limit
        self.nodes = 0
        self.best = None  # (traces, certificate bytes, lab)
        self._stab_cache: dict[tuple, np.ndarray] = {}

    def _labels_for(self, prefix):
        key = tuple(prefix)
        if key not in self._stab_cache:
            stab = self.aut.pointwise_stabilizer(prefix) if self.aut.generators else None
            gens = stab.generators if stab is not None else []
            self._stab_cache[key] = _orbit_labels(gens, self.n)
        return self._stab_cache[key]

    def _certificate(self, lab):
        pos = np.empty(self.n, dtype=np.int64)
        pos[lab] = np.arange(self.n)
        g = self.graph
        keys = np.sort(pos[g.arc_sources] * self.n + pos[g.indices])
        return keys.tobytes()

    def run(self):
        root = OrderedPartition.unit(self.n)
        root_trace = root.refine(self.graph)
        self._visit(root, [], [(0, self.n, root_trace)])
        return self

    def _visit(self, node, prefix, traces):
        if self.best is not None:
            head = self.best[0][: len(traces)]
            if traces > head:
                return
        if node.is_discrete:
            cert = self._certificate(node.lab)
            cand = (traces, cert)
            if self.best is None or cand < self.best[:2]:
                self.best = (list(traces), cert, node.lab.copy())
            return
        c, e = node.target_cell()
        labels = self._labels_for(prefix)
        seen = set()
        for u in np.sort(node.lab[c:e]).tolist():
            if labels[u] in seen:
                continue
            seen.add(labels[u])
            self.nodes += 1
            if self.nodes > self.node_limit:
                raise CapacityError(f"canonical search exceeded {self.node_limit} nodes")
            child, t = node.individualize(self.graph, u)
            self._visit(child, prefix + [u], traces + [t])


def search_automorphisms(graph, node_limit=DEFAULT_NODE_LIMIT) -> AutomorphismSearch:
    s = AutomorphismSearch(graph, node_limit).run()
    for g in s.gens:
        if not graph.is_automorphism(g):
            raise IntegrityError("search produced a non-automorphism")
    return s
