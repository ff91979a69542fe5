"""Named graph families and the candidate connection sets of the two
non-existence lemmas."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .graphs import ConnectionSet, Graph, cayley, circulant
from .groups import FiniteGroup, GroupSpec, _closure, make_group
from .modarith import (
    ResidueClass,
    crt_join,
    is_prime,
    mul_order,
    nontrivial_fifth_roots,
    require_prime,
    subgroup_h,
)

CPM1_SET = ("xy", "x^-1y", "x^-1y^-1", "xy^-1")
THM1_SET = ("y", "y^-1", "xy", "x^-1y^-1")
THM2_SET = ("y", "y^-2", "xy", "x^-2y^-2")


def c_pm1(p: int) -> Graph:
    """``C^{+-1}(p; 5p, 1)``: ``(i, j)`` joined to ``(i +- 1, j + 1)``.

    Vertex ``(i, j)`` gets id ``i*5p + j``, which is also its index as the
    element ``x^i y^j`` of ``Z_p x Z_5p``.
    """
    require_prime(p, odd=True)
    m = 5 * p
    edges = []
    for i in range(p):
        for j in range(m):
            for di in (1, -1):
                edges.append((i * m + j, ((i + di) % p) * m + (j + 1) % m))
    labels = {i * m + j: f"({i},{j})" for i in range(p) for j in range(m)}
    return Graph.from_edges(p * m, edges, labels)


def c_pm1_cayley(p: int) -> Graph:
    G = make_group(GroupSpec.direct(p))
    return cayley(G, [G.parse(w) for w in CPM1_SET])


# -- Praeger-Wang circulants ------------------------------------------------
@dataclass(frozen=True)
class PraegerWangParams:
    p: int
    t: int
    a: int
    u: int
    h_p2: tuple

    @classmethod
    def make(cls, p: int, t: int) -> "PraegerWangParams":
        require_prime(p, odd=True)
        if (p - 1) % 2:
            raise DomainError(f"2 does not divide p - 1 = {p - 1}")
        h5 = [r.value for r in subgroup_h(5, 2)]
        a = next(x for x in h5 if x != 1)  # the generator of H(5,2)
        hp = tuple(r.value for r in subgroup_h(p, 2))
        t = t % p
        if (-t) % p not in hp:
            raise DomainError(f"t = {t}: -t must lie in H({p},2) = {set(hp)}, i.e. t in -H({p},2)")
        u = math.lcm(2, mul_order(ResidueClass(t, p)))
        return cls(p, t, a, u, hp)


def legal_t(p: int) -> list[int]:
    hp = [r.value for r in subgroup_h(p, 2)]
    return sorted((-h) % p for h in hp)


def praeger_wang(p: int, t: int) -> Graph:
    """``G(5p; 2, 2, u)`` on ``Z_5 x Z_p``, built from its adjacency rule.

    ``(i, x) ~ (j, y)`` iff ``j - i = a^l`` and ``y - x in t^l H(p, 2)`` for
    some ``l``; ``l`` runs over a full period ``u`` of both sides.
    Vertex ``(i, x)`` has id ``i*p + x``.
    """
    prm = PraegerWangParams.make(p, t)
    edges = set()
    for i in range(5):
        for x in range(p):
            for l in range(prm.u):
                j = (i + pow(prm.a, l, 5)) % 5
                tl = pow(prm.t, l, p)
                for h in prm.h_p2:
                    y = (x + tl * h) % p
                    a, b = i * p + x, j * p + y
                    edges.add((min(a, b), max(a, b)))
    labels = {i * p + x: f"({i},{x})" for i in range(5) for x in range(p)}
    return Graph.from_edges(5 * p, sorted(edges), labels)


def praeger_wang_circulant_set(p: int) -> list[int]:
    """Connection set of the circulant on ``Z_5p`` matched to ``praeger_wang`` by CRT."""
    prm = PraegerWangParams.make(p, legal_t(p)[0])
    out = set()
    for l in range(prm.u):
        for h in prm.h_p2:
            d5 = pow(prm.a, l, 5)
            dp = pow(prm.t, l, p) * h % p
            out.add(crt_join(ResidueClass(d5, 5), ResidueClass(dp, p)).value)
    return sorted(out)


def crt_relabel(p: int) -> np.ndarray:
    """Map vertex ``(i, x)`` of ``praeger_wang`` to the residue ``k`` mod 5p
    with ``k = i (mod 5)`` and ``k = x (mod p)``."""
    out = np.empty(5 * p, dtype=np.int64)
    for i in range(5):
        for x in range(p):
            out[i * p + x] = crt_join(ResidueClass(i, 5), ResidueClass(x, p)).value
    return out


# -- theorem family -----------------------------------------------------------
@dataclass
class ValidationReport:
    family: str
    p: int
    printed_set: list
    violations: list
    interpretations: list
    ok: bool = False

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "p": self.p,
            "printed_set": self.printed_set,
            "violations": self.violations,
            "interpretations": self.interpretations,
            "ok": self.ok,
        }


THM2_READINGS = [
    "repair {y, y^-1, x^2y^2, x^-2y^-2}: keep the first pair, square the second",
    "repair {y^2, y^-2, xy, x^-1y^-1}: square the first pair, keep the second",
]
THM2_REPAIRS = (("y", "y^-1", "x^2y^2", "x^-2y^-2"), ("y^2", "y^-2", "xy", "x^-1y^-1"))


def theorem_family(p: int, variant: int):
    """Variant 1 returns the Cayley graph; variant 2 returns a ValidationReport.

    The second printed set is not closed under inversion, so no graph is
    built from it.
    """
    require_prime(p, above=5)
    G = make_group(GroupSpec.direct(p))
    if variant == 1:
        return cayley(G, [G.parse(w) for w in THM1_SET])
    if variant != 2:
        raise DomainError(f"variant must be 1 or 2, got {variant}")
    S = [G.parse(w) for w in THM2_SET]
    violations = []
    for w, s in zip(THM2_SET, S):
        inv = G.invert(s)
        if inv not in S:
            violations.append({"element": w, "missing_inverse": G.word(inv)})
    return ValidationReport(
        family="thm2",
        p=p,
        printed_set=list(THM2_SET),
        violations=violations,
        interpretations=list(THM2_READINGS),
        ok=not violations,
    )


# -- lemma candidates ---------------------------------------------------------
@dataclass(frozen=True)
class LemmaCandidate:
    which: str
    p: int
    i: int
    params: tuple
    S: tuple = field(repr=False)  # sorted normal-form elements
    generates: bool = False

    @property
    def index_name(self):
        return f"lem{self.which}/{self.p}/" + "/".join(map(str, self.params))


def lemma_group(p: int, which: str, i: int) -> FiniteGroup:
    if which == "A":
        return make_group(GroupSpec.meta1(p, i))
    return make_group(GroupSpec.meta2(p, i))


def lemma_roots(p: int, which: str) -> list[int]:
    require_prime(p, above=5)
    which = which.upper()
    if which not in ("A", "B"):
        raise DomainError(f"which must be A or B, got {which!r}")
    roots = nontrivial_fifth_roots(p if which == "A" else p * p)
    if not roots:
        mod = "p" if which == "A" else "p^2"
        raise DomainError(f"no nontrivial fifth root of unity mod {mod} for p = {p}")
    return roots


def lemma_parameter_space(p: int, which: str) -> int:
    return 4 * p * 4 * (p - 1) if which.upper() == "A" else 4 * p * p * 4


def lemma_candidates(p: int, which: str, i: int | None = None):
    """Yield every normalized candidate connection set, skipping degenerate ones.

    ``A``: ``{x y^t z, (x y^t z)^-1, x^m y^n z^k, (x^m y^n z^k)^-1}`` over
    ``t, n in Z_5^*``, ``m in Z_p``, ``k in Z_p^*`` in group ``meta1(p, i)``.
    ``B``: ``{x y^s, (x y^s)^-1, x^u y^v, (x^u y^v)^-1}`` over
    ``s, v in Z_5^*``, ``u in Z_{p^2}`` in ``meta2(p, i)``.
    """
    which = which.upper()
    roots = lemma_roots(p, which)
    i = roots[0] if i is None else i
    G = lemma_group(p, which, i)
    if which == "A":
        space = (
            ((t, m, n, k), (1, t, 1), (m, n, k))
            for t in range(1, 5)
            for m in range(p)
            for n in range(1, 5)
            for k in range(1, p)
        )
    else:
        space = (
            ((s, u, v), (1, s), (u, v))
            for s in range(1, 5)
            for u in range(p * p)
            for v in range(1, 5)
        )
    for params, first, second in space:
        first, second = G.normalize(first), G.normalize(second)
        S = {first, G.invert(first), second, G.invert(second)}
        if len(S) < 4:
            continue
        idx = [G.index(s) for s in S]
        gen = len(_closure(G, idx)) == G.order
        yield LemmaCandidate(which, p, i, params, tuple(sorted(S)), gen)


# -- name resolution ------------------------------------------------------------
def by_name(name: str):
    """Resolve ``cpm1/p``, ``pw/p/t``, ``thm1/p``, ``thm2/p``, ``lemA/p/index``,
    ``lemB/p/index`` (the lemma index counts emitted candidates for the
    smallest nontrivial root ``i``)."""
    parts = name.strip().split("/")
    try:
        kind, args = parts[0], [int(a) for a in parts[1:]]
    except ValueError as exc:
        raise DomainError(f"bad family name {name!r}") from exc
    if kind == "cpm1" and len(args) == 1:
        return c_pm1(args[0])
    if kind == "pw" and len(args) == 2:
        return praeger_wang(*args)
    if kind == "thm1" and len(args) == 1:
        return theorem_family(args[0], 1)
    if kind == "thm2" and len(args) == 1:
        return theorem_family(args[0], 2)
    if kind in ("lemA", "lemB") and len(args) == 2:
        p, index = args
        for k, cand in enumerate(lemma_candidates(p, kind[-1])):
            if k == index:
                G = lemma_group(p, kind[-1], cand.i)
                return cayley(G, ConnectionSet(G, frozenset(cand.S)))
        raise DomainError(f"candidate index {index} out of range")
    raise DomainError(f"unknown family name {name!r}")


def is_odd_prime(p) -> bool:
    return isinstance(p, int) and is_prime(p) and p != 2
