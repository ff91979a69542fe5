"""Normal-form arithmetic for the four finite group shapes used in the build.

Elements are plain tuples of exponents in normal form:

* ``cyclic(n)``:  ``(a,)``            meaning ``x^a``           (a mod n)
* ``direct(p)``:  ``(a, b)``          meaning ``x^a y^b``       (p, 5p)
* ``meta1(p, i)``: ``(a, b, c)``      meaning ``x^a y^b z^c``   (p, 5, p)
* ``meta2(p, i)``: ``(a, b)``         meaning ``x^a y^b``       (p^2, 5)

For the metacyclic kinds the rewriting rule ``y^b x^a = x^(a * i^-b) y^b``
(a consequence of ``y^-1 x y = x^i``) gives an O(1) product.  Elements are
numbered by lexicographic order of their exponent tuples; index 0 is the
identity.  Every group also carries a dense Cayley table over those indices,
which all vectorised routines work from.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import CapacityError, DomainError, ValidationError
from .modarith import euler_phi, is_prime

DEFAULT_AUT_BOUND = 2000
_PERM_CACHE_LIMIT = 60_000_000  # entries of the cached automorphism-permutation array

KINDS = ("cyclic", "direct", "meta1", "meta2")


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int = 0
    p: int = 0
    i: int = 0

    @classmethod
    def cyclic(cls, n):
        return cls("cyclic", n=n)

    @classmethod
    def direct(cls, p):
        return cls("direct", p=p)

    @classmethod
    def meta1(cls, p, i):
        return cls("meta1", p=p, i=i)

    @classmethod
    def meta2(cls, p, i):
        return cls("meta2", p=p, i=i)

    @property
    def order(self):
        if self.kind == "cyclic":
            return self.n
        return 5 * self.p * self.p

    @property
    def name(self):
        if self.kind == "cyclic":
            return f"Z{self.n}"
        if self.kind == "direct":
            return f"Z{self.p}xZ{5 * self.p}"
        return f"{self.kind}({self.p},{self.i})"

    def to_dict(self):
        d = {"kind": self.kind, "p": self.p or None, "i": self.i or None, "order": self.order}
        if self.kind == "cyclic":
            d["n"] = self.n
        return d


def _validate(spec: GroupSpec):
    if spec.kind not in KINDS:
        raise DomainError(f"unknown group kind {spec.kind!r}")
    if spec.kind == "cyclic":
        if spec.n < 1:
            raise DomainError(f"cyclic order must be positive, got {spec.n}")
        return
    p = spec.p
    if not is_prime(p) or p <= 5:
        raise DomainError(f"p must be a prime > 5, got {p}")
    if spec.kind == "direct":
        return
    m = p if spec.kind == "meta1" else p * p
    i = spec.i % m
    if math.gcd(i, m) != 1:
        raise DomainError(f"i = {spec.i} is not coprime to {m}")
    if pow(i, 5, m) != 1:
        raise DomainError(f"i^5 = {pow(i, 5, m)} != 1 (mod {m}) for i = {spec.i}")
    if i == 1:
        raise DomainError("i = 1 gives an abelian group; a nontrivial fifth root of unity is required")


class FiniteGroup:
    """A group of one of the four supported shapes, with normal-form elements."""

    def __init__(self, spec: GroupSpec):
        _validate(spec)
        self.spec = spec
        p, kind = spec.p, spec.kind
        if kind == "cyclic":
            self.moduli = (spec.n,)
            self.gen_names = ("x",)
        elif kind == "direct":
            self.moduli = (p, 5 * p)
            self.gen_names = ("x", "y")
        elif kind == "meta1":
            self.moduli = (p, 5, p)
            self.gen_names = ("x", "y", "z")
        else:
            self.moduli = (p * p, 5)
            self.gen_names = ("x", "y")
        self.order = math.prod(self.moduli)
        self.identity = (0,) * len(self.moduli)
        self.generators = {}
        for k, name in enumerate(self.gen_names):
            e = [0] * len(self.moduli)
            e[k] = 1
            self.generators[name] = tuple(e)
        if kind in ("meta1", "meta2"):
            m = self.moduli[0]
            self._i = spec.i % m
            # twist[b] = i^(-b) mod m
            inv_i = pow(self._i, -1, m)
            self._twist = tuple(pow(inv_i, b, m) for b in range(5))
        self._radix = tuple(math.prod(self.moduli[k + 1:]) for k in range(len(self.moduli)))

    # -- scalar API -------------------------------------------------------
    def __repr__(self):
        return f"FiniteGroup({self.spec.name}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    @property
    def is_abelian(self):
        return self.spec.kind in ("cyclic", "direct")

    def normalize(self, g) -> tuple:
        if len(g) != len(self.moduli):
            raise DomainError(f"element {g!r} has wrong length for {self.spec.name}")
        return tuple(int(a) % m for a, m in zip(g, self.moduli))

    def multiply(self, g, h) -> tuple:
        kind = self.spec.kind
        if kind in ("cyclic", "direct"):
            return tuple((a + b) % m for a, b, m in zip(g, h, self.moduli))
        m = self.moduli[0]
        a = (g[0] + h[0] * self._twist[g[1] % 5]) % m
        rest = tuple((u + v) % mod for u, v, mod in zip(g[1:], h[1:], self.moduli[1:]))
        return (a,) + rest

    def invert(self, g) -> tuple:
        kind = self.spec.kind
        if kind in ("cyclic", "direct"):
            return tuple(-a % m for a, m in zip(g, self.moduli))
        m = self.moduli[0]
        # (x^a y^b)^-1 = y^-b x^-a = x^(-a i^b) y^-b
        a = -g[0] * pow(self._i, g[1], m) % m
        return (a,) + tuple(-u % mod for u, mod in zip(g[1:], self.moduli[1:]))

    def power(self, g, k: int) -> tuple:
        if k < 0:
            g, k = self.invert(g), -k
        acc, base = self.identity, g
        while k:
            if k & 1:
                acc = self.multiply(acc, base)
            base = self.multiply(base, base)
            k >>= 1
        return acc

    def element_order(self, g) -> int:
        g = self.normalize(g)
        k, acc = 1, g
        while acc != self.identity:
            acc = self.multiply(acc, g)
            k += 1
        return k

    def elements(self) -> list[tuple]:
        return list(itertools.product(*(range(m) for m in self.moduli)))

    def index(self, g) -> int:
        return sum(int(a) % m * r for a, m, r in zip(g, self.moduli, self._radix))

    def element(self, k: int) -> tuple:
        return tuple(int(c) for c in self.coords[k])

    def label(self, g) -> str:
        return "(" + ",".join(str(a) for a in g) + ")"

    def word(self, g) -> str:
        parts = []
        for name, a in zip(self.gen_names, g):
            if a:
                parts.append(name if a == 1 else f"{name}^{a}")
        return "".join(parts) or "1"

    def parse(self, text: str) -> tuple:
        """Parse a word such as ``x^-1y^-1``, ``y^5``, ``1`` or a tuple ``(1,2,0)``."""
        text = text.strip()
        if text.startswith("("):
            try:
                return self.normalize(tuple(int(t) for t in text.strip("()").split(",")))
            except ValueError as exc:
                raise DomainError(f"cannot parse element {text!r}") from exc
        if text in ("1", "e", ""):
            return self.identity
        acc = self.identity
        pos = 0
        pattern = re.compile(r"\s*([a-z])(?:\^(-?\d+))?")
        while pos < len(text):
            mt = pattern.match(text, pos)
            if not mt or mt.group(1) not in self.generators:
                raise DomainError(f"cannot parse element {text!r} at offset {pos}")
            exp = int(mt.group(2)) if mt.group(2) else 1
            acc = self.multiply(acc, self.power(self.generators[mt.group(1)], exp))
            pos = mt.end()
        return acc

    # -- vectorised views -------------------------------------------------
    @cached_property
    def coords(self) -> np.ndarray:
        """``(order, rank)`` array of exponent tuples in index order."""
        grids = np.meshgrid(*(np.arange(m) for m in self.moduli), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def _encode(self, cols) -> np.ndarray:
        out = np.zeros_like(cols[0])
        for c, r in zip(cols, self._radix):
            out = out + c * r
        return out

    @cached_property
    def table(self) -> np.ndarray:
        """Dense multiplication table: ``table[g, h]`` is the index of ``g*h``."""
        C = self.coords
        L = [C[:, k][:, None] for k in range(C.shape[1])]
        R = [C[:, k][None, :] for k in range(C.shape[1])]
        if self.spec.kind in ("cyclic", "direct"):
            cols = [(l + r) % m for l, r, m in zip(L, R, self.moduli)]
        else:
            m = self.moduli[0]
            twist = np.array(self._twist, dtype=np.int64)
            cols = [(L[0] + R[0] * twist[L[1]]) % m]
            cols += [(l + r) % mod for l, r, mod in zip(L[1:], R[1:], self.moduli[1:])]
        return self._encode(cols).astype(np.int32)

    @cached_property
    def inverse_index(self) -> np.ndarray:
        return np.argmin(self.table, axis=1).astype(np.int32)

    @cached_property
    def orders(self) -> np.ndarray:
        """Element orders, indexed like :attr:`coords`."""
        n = self.order
        out = np.zeros(n, dtype=np.int64)
        cur = np.arange(n, dtype=np.int32)
        idx = np.arange(n)
        k = 1
        while True:
            hit = (cur == 0) & (out == 0)
            out[hit] = k
            if out.all():
                return out
            cur = self.table[cur, idx]
            k += 1

    def gen_indices(self) -> list[int]:
        return [self.index(self.generators[name]) for name in self.gen_names]

    def power_index(self, g: np.ndarray, k: int) -> np.ndarray:
        """Vectorised ``g**k`` for an index array ``g`` and integer ``k >= 0``."""
        g = np.asarray(g, dtype=np.int32)
        acc = np.zeros_like(g)
        base = g
        while k:
            if k & 1:
                acc = self.table[acc, base]
            base = self.table[base, base]
            k >>= 1
        return acc

    # -- automorphisms ----------------------------------------------------
    def _relations(self):
        """Relations beyond generator orders, as ``(needed_gens, predicate)``.

        Each predicate maps a tuple of image index arrays to a boolean mask.
        """
        T = self.table
        inv = self.inverse_index

        def commute(a, b):
            return lambda im: T[im[a], im[b]] == T[im[b], im[a]]

        kind = self.spec.kind
        if kind == "cyclic":
            return []
        if kind == "direct":
            return [(1, commute(0, 1))]
        i = self._i

        def conj(im):
            X, Y = im[0], im[1]
            return T[T[inv[Y], X], Y] == self.power_index(X, i)

        rels = [(1, conj)]
        if kind == "meta1":
            rels += [(2, commute(0, 2)), (2, commute(1, 2))]
        return rels

    def _hom_images(self, gens_img: np.ndarray) -> np.ndarray:
        """Images of every element under the homomorphisms fixed by ``gens_img``.

        ``gens_img`` has shape ``(T, rank)``; output has shape ``(T, order)``.
        """
        T = self.table
        C = self.coords
        out = None
        for k, m in enumerate(self.moduli):
            g = gens_img[:, k]
            powers = np.zeros((len(g), m), dtype=np.int32)
            for e in range(1, m):
                powers[:, e] = T[powers[:, e - 1], g]
            part = powers[:, C[:, k]]
            out = part if out is None else T[out, part]
        return out

    @cached_property
    def _automorphism_data(self):
        """(generator image tuples, permutation array or None)."""
        n = self.order
        if self.spec.kind == "cyclic":
            units = np.array([u for u in range(n) if math.gcd(u, n) == 1 or n == 1], dtype=np.int32)
            images = units[:, None]
            perms = None
            if len(units) * n <= _PERM_CACHE_LIMIT:
                perms = ((np.arange(n, dtype=np.int64)[None, :] * units[:, None]) % n).astype(np.int32)
            return images, perms
        if n > self.aut_bound:
            raise CapacityError(
                f"|G| = {n} exceeds the automorphism-search bound {self.aut_bound}; "
                "only cyclic groups have the closed-form path"
            )
        gen_orders = [self.element_order(self.generators[g]) for g in self.gen_names]
        cands = [np.flatnonzero(self.orders == o).astype(np.int32) for o in gen_orders]
        rels = self._relations()
        tuples = cands[0][:, None]
        for k in range(1, len(cands)):
            a = np.repeat(tuples, len(cands[k]), axis=0)
            b = np.tile(cands[k], len(tuples))[:, None]
            tuples = np.concatenate([a, b], axis=1)
            for needed, pred in rels:
                if needed == k and len(tuples):
                    tuples = tuples[pred(tuples.T)]
        keep, chunks = [], []
        step = max(1, 4_000_000 // n)
        for s in range(0, len(tuples), step):
            imgs = self._hom_images(tuples[s:s + step])
            ok = (imgs == 0).sum(axis=1) == 1  # trivial kernel
            keep.append(tuples[s:s + step][ok])
            chunks.append(imgs[ok])
        images = np.concatenate(keep) if keep else tuples[:0]
        perms = None
        if len(images) * n <= _PERM_CACHE_LIMIT:
            perms = np.concatenate(chunks) if chunks else np.zeros((0, n), dtype=np.int32)
        return images, perms

    aut_bound = DEFAULT_AUT_BOUND

    def automorphism_perms(self) -> np.ndarray:
        """All automorphisms as rows ``perm[g] = alpha(g)`` over element indices."""
        images, perms = self._automorphism_data
        if perms is None:
            raise CapacityError(
                f"{len(images)} automorphisms of a group of order {self.order} are too many to tabulate"
            )
        return perms

    def automorphism_count(self) -> int:
        return len(self._automorphism_data[0])

    def automorphism_generators(self, seed: int = 0) -> list[np.ndarray]:
        """A small generating set of Aut(G) as permutations of element indices."""
        from .symmetry.permgroup import PermGroup

        images, _ = self._automorphism_data
        total = len(images)
        rng = np.random.default_rng(seed)
        order = rng.permutation(total)
        gens: list[np.ndarray] = []
        group = PermGroup([], self.order)
        for k in order:
            if group.order() == total:
                break
            perm = self._hom_images(images[k:k + 1])[0]
            if not group.contains(perm):
                gens.append(perm)
                group = PermGroup(gens, self.order)
        return gens


def make_group(spec: GroupSpec) -> FiniteGroup:
    return FiniteGroup(spec)


def multiply(G: FiniteGroup, g, h):
    return G.multiply(g, h)


def invert(G: FiniteGroup, g):
    return G.invert(g)


def element_order(G: FiniteGroup, g) -> int:
    return G.element_order(g)


def _closure(G: FiniteGroup, gens_idx) -> np.ndarray:
    """Indices of the subgroup generated by ``gens_idx`` (sorted)."""
    gens_idx = np.asarray(sorted(set(int(g) for g in gens_idx)), dtype=np.int32)
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int32)
    while len(frontier):
        nxt = G.table[frontier[:, None], gens_idx[None, :]].ravel()
        nxt = np.unique(nxt[~seen[nxt]])
        seen[nxt] = True
        frontier = nxt
    return np.flatnonzero(seen)


def generated_subgroup(G: FiniteGroup, S) -> set:
    S = [G.normalize(s) for s in S]
    if not S:
        raise DomainError("generating set must be nonempty")
    idx = _closure(G, [G.index(s) for s in S])
    return {G.element(k) for k in idx}


def subgroup_order(G: FiniteGroup, S) -> int:
    return len(_closure(G, [G.index(G.normalize(s)) for s in S]))


@dataclass(frozen=True, eq=False)
class GroupAutomorphism:
    group: FiniteGroup
    images: tuple  # images of the generators, in ``group.gen_names`` order

    @property
    def generator_images(self) -> dict:
        return dict(zip(self.group.gen_names, self.images))

    def __call__(self, g):
        G = self.group
        acc = G.identity
        for img, a in zip(self.images, G.normalize(g)):
            acc = G.multiply(acc, G.power(img, a))
        return acc

    @cached_property
    def perm(self) -> np.ndarray:
        G = self.group
        idx = np.array([[G.index(im) for im in self.images]], dtype=np.int32)
        return G._hom_images(idx)[0]

    def __eq__(self, other):
        return isinstance(other, GroupAutomorphism) and self.group == other.group and self.images == other.images

    def __hash__(self):
        return hash((self.group, self.images))

    def __repr__(self):
        body = ", ".join(f"{k}->{self.group.word(v)}" for k, v in self.generator_images.items())
        return f"GroupAutomorphism({body})"


def automorphisms(G: FiniteGroup) -> list[GroupAutomorphism]:
    """Every automorphism of ``G`` (closed form for cyclic groups)."""
    images, _ = G._automorphism_data
    out = []
    for row in images:
        out.append(GroupAutomorphism(G, tuple(G.element(int(k)) for k in row)))
    return out


@dataclass
class SetStabilizer:
    """``Aut(G, S)`` together with its action on ``S``."""

    automorphisms: list
    perms: np.ndarray = field(repr=False)
    orbits: list  # orbits on S, as lists of elements
    route: str

    @property
    def order(self):
        return len(self.automorphisms)

    @property
    def transitive(self):
        return len(self.orbits) == 1

    def __len__(self):
        return len(self.automorphisms)

    def __iter__(self):
        return iter(self.automorphisms)


def _spanning_layers(G: FiniteGroup, T) -> list[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """BFS layers of the Cayley digraph on ``T`` as (nodes, parents, generator slot)."""
    table = G.table
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0])
    layers = []
    while len(frontier):
        nodes, parents, slots = [], [], []
        for k, t in enumerate(T):
            nxt = table[frontier, t]
            fresh = ~seen[nxt]
            nxt, par = nxt[fresh], frontier[fresh]
            nxt, first = np.unique(nxt, return_index=True)
            seen[nxt] = True
            nodes.append(nxt)
            parents.append(par[first])
            slots.append(np.full(len(nxt), k))
        frontier = np.concatenate(nodes)
        if len(frontier):
            layers.append((frontier, np.concatenate(parents), np.concatenate(slots)))
    return layers


def _extend_hom(G: FiniteGroup, T, images, layers=None) -> np.ndarray | None:
    """The homomorphism sending ``T[k] -> images[k]`` if one exists and is bijective.

    ``T`` must generate ``G``.
    """
    table = G.table
    n = G.order
    if layers is None:
        layers = _spanning_layers(G, T)
    imgs = np.asarray(images, dtype=np.int64)
    alpha = np.zeros(n, dtype=np.int64)
    for nodes, parents, slots in layers:
        alpha[nodes] = table[alpha[parents], imgs[slots]]
    for t, it in zip(T, images):
        if not np.array_equal(alpha[table[:, t]], table[alpha, it]):
            return None
    if np.count_nonzero(alpha == 0) != 1:
        return None
    return alpha.astype(np.int32)


def _orbits_on(perms: np.ndarray, S_idx: list[int]) -> list[list[int]]:
    parent = {s: s for s in S_idx}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for row in perms:
        for s in S_idx:
            ra, rb = find(s), find(int(row[s]))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for s in S_idx:
        groups.setdefault(find(s), []).append(s)
    return sorted(groups.values())


def set_stabilizing_automorphisms(G: FiniteGroup, S) -> SetStabilizer:
    """All automorphisms of ``G`` fixing ``S`` setwise.

    When ``S`` generates ``G`` an automorphism is pinned down by the images of
    a generating subset of ``S``, so only those candidates are tried.
    Otherwise the full automorphism list is filtered (subject to the
    capacity bound).
    """
    S = sorted({G.normalize(s) for s in S})
    S_idx = [G.index(s) for s in S]
    inv = G.inverse_index
    missing = [s for s, k in zip(S, S_idx) if int(inv[k]) not in S_idx]
    if missing:
        raise ValidationError("S is not closed under inversion", missing)
    S_arr = np.array(S_idx, dtype=np.int32)
    target = np.sort(S_arr)
    if len(_closure(G, S_idx)) == G.order:
        T: list[int] = []
        size = 1
        for s in S_idx:
            grown = len(_closure(G, T + [s]))
            if grown > size:
                T.append(s)
                size = grown
            if size == G.order:
                break
        found = {}
        layers = _spanning_layers(G, T)
        orders = G.orders
        for images in itertools.product(S_idx, repeat=len(T)):
            if any(orders[a] != orders[b] for a, b in zip(T, images)):
                continue
            alpha = _extend_hom(G, T, images, layers)
            if alpha is None or not np.array_equal(np.sort(alpha[S_arr]), target):
                continue
            found[alpha.tobytes()] = alpha
        perms = np.array(list(found.values()), dtype=np.int32).reshape(-1, G.order)
        route = "generating-subset"
    else:
        allp = G.automorphism_perms()
        mask = (np.sort(allp[:, S_arr], axis=1) == target).all(axis=1)
        perms = allp[mask]
        route = "filter"
    perms = perms[np.lexsort(perms.T[::-1])] if len(perms) else perms
    gen_idx = G.gen_indices()
    autos = [
        GroupAutomorphism(G, tuple(G.element(int(row[g])) for g in gen_idx)) for row in perms
    ]
    orbits = [[G.element(k) for k in orb] for orb in _orbits_on(perms, S_idx)]
    return SetStabilizer(autos, perms, orbits, route)


def aut_order_formula(G: FiniteGroup) -> int | None:
    """Closed-form |Aut(G)| where one is known (used only as a cross-check)."""
    kind, p = G.spec.kind, G.spec.p
    if kind == "cyclic":
        return euler_phi(G.order)
    if kind == "direct":
        return 4 * (p * p - 1) * (p * p - p)
    if kind == "meta1":
        return (p - 1) * p * (p - 1)
    return (p * p - p) * p * p
