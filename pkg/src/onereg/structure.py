"""Regular representation, Cayley normality, quotients by orbits and the
four-way reduction classifier for 4-valent arc-transitive graphs."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IntegrityError, ValidationError
from .graphs import ConnectionSet, Graph, is_bipartite, is_connected
from .groups import FiniteGroup, set_stabilizing_automorphisms
from .symmetry import AutResult, PermGroup, aut_group
from .symmetry.permgroup import StabChain, inverse


def regular_rep(G: FiniteGroup, elements=None) -> PermGroup:
    """Right multiplications ``R(g): h -> h*g`` for the generators of ``G``
    (or for ``elements``, giving ``R`` of the subgroup they generate)."""
    if elements is None:
        idx = G.gen_indices()
    else:
        idx = [G.index(G.normalize(e)) for e in elements]
    gens = [G.table[:, k].astype(np.int64) for k in idx]
    return PermGroup(gens, G.order)


def in_regular_rep(G: FiniteGroup, perm) -> bool:
    """``perm`` is some ``R(g)``: read ``g`` off the image of the identity."""
    g = int(perm[0])
    return bool(np.array_equal(perm, G.table[:, g]))


@dataclass
class NormalityReport:
    is_normal: bool
    aut_order: int
    stabilizer_order: int
    aut_gs_order: int
    methods_agree: bool
    xu_verdict: bool = True
    conjugation_verdict: bool = True

    def to_json(self) -> dict:
        return {
            "is_normal": self.is_normal,
            "aut_order": self.aut_order,
            "stabilizer_order": self.stabilizer_order,
            "aut_gs_order": self.aut_gs_order,
            "methods_agree": self.methods_agree,
        }


def is_normal_cayley(X: Graph, G: FiniteGroup, S, aut: AutResult | None = None) -> NormalityReport:
    """Decide whether R(G) is normal in Aut(X) two ways and insist they agree.

    Xu's criterion compares |Aut(X)_1| with |Aut(G, S)|; the direct test
    conjugates each generator of R(G) by each generator of Aut(X) and checks
    the result is again a right multiplication.
    """
    if not isinstance(S, ConnectionSet):
        S = ConnectionSet(G, frozenset(S))
    if X.n != G.order:
        raise DomainError("graph and group orders differ")
    aut = aut or aut_group(X)
    stab = aut.perm_group.point_stabilizer(0).order()
    autgs = set_stabilizing_automorphisms(G, S.sorted()).order
    xu = stab == autgs
    R = regular_rep(G)
    conj = True
    for a in aut.perm_group.generators:
        ainv = inverse(a)
        for r in R.generators:
            c = a[r[ainv]]  # a^-1 r a, applied left to right
            if not in_regular_rep(G, c):
                conj = False
                break
        if not conj:
            break
    report = NormalityReport(xu, aut.order, stab, autgs, xu == conj, xu, conj)
    if not report.methods_agree:
        raise IntegrityError(
            f"normality methods disagree: Xu criterion says {xu}, conjugation says {conj}"
        )
    return report


@dataclass
class QuotientReport:
    orbit_count: int
    orbit_size: int
    quotient: Graph = field(repr=False)
    kernel_order: int
    kernel_vertex_stab_order: int
    is_cycle: bool
    is_regular_cover: bool
    semiregular: bool
    orbit_labels: np.ndarray = field(repr=False)
    kernel: PermGroup | None = field(default=None, repr=False)
    case_label: int | None = None

    def to_json(self) -> dict:
        return {
            "orbit_count": self.orbit_count,
            "orbit_size": self.orbit_size,
            "quotient": self.quotient.to_json(),
            "kernel_order": self.kernel_order,
            "kernel_vertex_stab_order": self.kernel_vertex_stab_order,
            "is_cycle": self.is_cycle,
            "is_regular_cover": self.is_regular_cover,
            "case_label": self.case_label,
        }


def _block_labels(N: PermGroup) -> tuple[np.ndarray, list[int]]:
    raw = N.orbit_labels()
    reps = sorted(set(raw.tolist()))
    remap = {r: k for k, r in enumerate(reps)}
    return np.array([remap[x] for x in raw.tolist()], dtype=np.int64), reps


def is_cycle_graph(Y: Graph) -> bool:
    return Y.n >= 3 and Y.is_regular(2) and is_connected(Y)


def kernel_on_blocks(A: PermGroup, labels: np.ndarray, reps) -> PermGroup:
    """Subgroup of ``A`` fixing every block, via a chain whose base starts
    with the block points of the extended action."""
    n = A.n
    r = len(reps)
    ext = []
    for g in A.generators:
        img_blocks = labels[g[np.asarray(reps)]]
        moved = labels[g]
        if not np.array_equal(moved, img_blocks[labels]):
            raise ValidationError("ambient group does not preserve the orbit partition")
        ext.append(np.concatenate([g, n + img_blocks]))
    ch = StabChain(ext, n + r, base_prefix=range(n, n + r), seed=A.seed, known_order=A.order())
    gens = [s[:n] for s in ch.stabilizer_gens(r)]
    K = PermGroup(gens, n, A.seed)
    K.known_order = ch.stabilizer_order(r)
    return K


def quotient_by_orbits(X: Graph, N: PermGroup, A: PermGroup | None = None) -> QuotientReport:
    """Quotient of ``X`` by the orbits of ``N`` plus kernel data for ``A``
    (the full automorphism group unless supplied)."""
    for g in N.generators:
        if not X.is_automorphism(g):
            raise ValidationError("a generator of N does not preserve adjacency")
    labels, reps = _block_labels(N)
    r = len(reps)
    sizes = np.bincount(labels, minlength=r)
    src, dst = X.arc_sources, X.indices
    bs, bd = labels[src], labels[dst]
    keep = bs != bd
    Q = Graph.from_edges(r, np.stack([bs[keep], bd[keep]], axis=1))
    # covering check: the projection is a bijection N(v) -> N(block(v)) for all v
    cover = not (~keep).any()
    if cover:
        for v in range(X.n):
            nb = np.sort(labels[X.neighbors(v)])
            if len(np.unique(nb)) != len(nb) or not np.array_equal(nb, Q.neighbors(labels[v])):
                cover = False
                break
    semi = N.is_semiregular()
    if A is None:
        A = aut_group(X).perm_group
    K = kernel_on_blocks(A, labels, reps)
    k_order = K.known_order
    v_orbit = len(K.orbit(0)) if X.n else 1
    return QuotientReport(
        orbit_count=r,
        orbit_size=int(sizes[0]) if r else 0,
        quotient=Q,
        kernel_order=k_order,
        kernel_vertex_stab_order=k_order // v_orbit,
        is_cycle=is_cycle_graph(Q),
        is_regular_cover=bool(cover and semi),
        semiregular=semi,
        orbit_labels=labels,
        kernel=K,
    )


def is_normal_subgroup(N: PermGroup, A: PermGroup) -> bool:
    for a in A.generators:
        ainv = inverse(a)
        for g in N.generators:
            if not N.contains(a[g[ainv]]):
                return False
    return True


@dataclass
class ReductionCase:
    case: int
    orbit_count: int
    quotient: QuotientReport
    detail: str
    induced_order: int  # |A / K|

    def to_json(self) -> dict:
        return {
            "case": self.case,
            "orbit_count": self.orbit_count,
            "induced_order": self.induced_order,
            "detail": self.detail,
            "quotient": self.quotient.to_json(),
        }


def reduction_case(X: Graph, N: PermGroup, A: PermGroup) -> ReductionCase:
    """Which of the four normal-quotient cases holds for ``N`` normal in ``A``.

    Cases are tested in the fixed order 1, 2, 3, 4; the first match wins.
    """
    if not X.is_regular(4):
        raise DomainError("the reduction classifier needs a 4-valent graph")
    if not is_connected(X):
        raise DomainError("the reduction classifier needs a connected graph")
    if not is_normal_subgroup(N, A):
        raise ValidationError("N is not normal in A")
    from .symmetry.permgroup import arc_action

    if len(arc_action(A, X).orbits()) != 1:
        raise ValidationError("A is not arc-transitive on X")
    q = quotient_by_orbits(X, N, A)
    r = q.orbit_count
    induced = A.order() // q.kernel_order
    case, detail = None, ""
    if r == 1:
        case, detail = 1, "N is transitive on vertices"
    else:
        colors = is_bipartite(X)
        if colors is not None and r == 2:
            halves = {frozenset(np.flatnonzero(colors == c).tolist()) for c in (0, 1)}
            orbs = {frozenset(o) for o in N.orbits()}
            if halves == orbs:
                case, detail = 2, "X is bipartite and N is transitive on each part"
        if case is None and r >= 3 and q.is_cycle:
            case, detail = 3, f"quotient is a cycle of length {r}; A induces a group of order {induced}"
        if case is None and r >= 5 and q.semiregular and q.quotient.is_regular(4) and q.is_regular_cover:
            case, detail = 4, f"N is semiregular and X is a regular cover of a 4-valent quotient on {r} vertices"
    if case is None:
        raise IntegrityError("no reduction case applies; a hypothesis must be violated")
    q.case_label = case
    return ReductionCase(case, r, q, detail, induced)
