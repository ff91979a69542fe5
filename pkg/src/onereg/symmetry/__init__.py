"""Automorphism groups, orbit analysis and isomorphism testing."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CapacityError, IntegrityError
from ..graphs import Graph, is_connected
from .brute import brute_aut, brute_automorphisms
from .partition import OrderedPartition, is_equitable, refine
from .permgroup import (
    PermGroup,
    StabChain,
    arc_action,
    cycle_string,
    orbits,
    perm_order,
    point_stabilizer,
)
from .search import AutomorphismSearch, CanonicalSearch, search_automorphisms

DEFAULT_AUT_BOUND = 5000

__all__ = [
    "AutResult",
    "CanonicalForm",
    "OrderedPartition",
    "PermGroup",
    "StabChain",
    "aut_group",
    "brute_aut",
    "brute_automorphisms",
    "canonical_form",
    "cycle_string",
    "is_equitable",
    "isomorphic",
    "orbits",
    "perm_order",
    "point_stabilizer",
    "refine",
]


@dataclass
class AutResult:
    perm_group: PermGroup = field(repr=False)
    order: int
    vertex_orbits: int
    arc_orbits: int
    vertex_transitive: bool
    arc_transitive: bool
    one_regular: bool
    connected: bool
    base: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "vertex_orbits": self.vertex_orbits,
            "arc_orbits": self.arc_orbits,
            "vertex_transitive": self.vertex_transitive,
            "arc_transitive": self.arc_transitive,
            "one_regular": self.one_regular,
        }

    @property
    def generators(self):
        return self.perm_group.generators

    def stabilizer_order(self, v: int = 0) -> int:
        return self.perm_group.point_stabilizer(v).order()


def _check_bound(X: Graph, bound: int):
    if X.n > bound:
        raise CapacityError(f"graph has {X.n} vertices; the automorphism engine bound is {bound}")


def aut_group(X: Graph, bound: int = DEFAULT_AUT_BOUND, seed: int = 0) -> AutResult:
    """Full automorphism group of ``X`` with orbit counts and transitivity flags.

    One-regularity additionally requires connectivity: a disconnected graph
    is never reported one-regular.
    """
    _check_bound(X, bound)
    search = search_automorphisms(X)
    G = PermGroup(search.gens, X.n, seed=seed)
    order = G.chain(search.path).order()
    if order != search.order:
        raise IntegrityError(
            f"search orbit product {search.order} disagrees with stabilizer chain order {order}"
        )
    v_orbits = len(G.orbits()) if X.n else 0
    a_orbits = len(arc_action(G, X).orbits()) if X.arc_count else 0
    vt = v_orbits == 1
    at = a_orbits == 1
    conn = is_connected(X)
    return AutResult(
        perm_group=G,
        order=order,
        vertex_orbits=v_orbits,
        arc_orbits=a_orbits,
        vertex_transitive=vt,
        arc_transitive=at,
        one_regular=bool(at and conn and order == X.arc_count),
        connected=conn,
        base=list(search.path),
    )


@dataclass
class CanonicalForm:
    certificate: bytes = field(repr=False)
    traces: list = field(repr=False)
    labeling: np.ndarray = field(repr=False)  # canonical position -> vertex
    aut: AutResult

    @property
    def position(self) -> np.ndarray:
        pos = np.empty(len(self.labeling), dtype=np.int64)
        pos[self.labeling] = np.arange(len(self.labeling))
        return pos

    def graph(self, X: Graph) -> Graph:
        return X.relabel(self.position)


def canonical_form(X: Graph, aut: AutResult | None = None, bound: int = DEFAULT_AUT_BOUND) -> CanonicalForm:
    _check_bound(X, bound)
    if aut is None:
        aut = aut_group(X, bound)
    cs = CanonicalSearch(X, aut.perm_group).run()
    traces, cert, lab = cs.best
    return CanonicalForm(cert, traces, lab, aut)


def isomorphic(X: Graph, Y: Graph, bound: int = DEFAULT_AUT_BOUND, forms=None):
    """An adjacency-preserving bijection ``X -> Y`` as an array, or ``None``."""
    if X.n != Y.n or X.edge_count != Y.edge_count:
        return None
    if not np.array_equal(np.sort(X.degrees), np.sort(Y.degrees)):
        return None
    cx, cy = forms if forms is not None else (canonical_form(X, bound=bound), canonical_form(Y, bound=bound))
    if cx.traces != cy.traces or cx.certificate != cy.certificate:
        return None
    witness = np.empty(X.n, dtype=np.int64)
    witness[cx.labeling] = cy.labeling
    mapped = np.sort(witness[X.arc_sources] * X.n + witness[X.indices])
    if not np.array_equal(mapped, Y.arc_keys):
        raise IntegrityError("canonical forms agree but the induced map is not an isomorphism")
    return witness
