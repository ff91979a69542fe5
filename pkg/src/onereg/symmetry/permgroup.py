"""Permutation groups with a Schreier-Sims stabilizer chain.

Permutations are int arrays with ``p[i]`` the image of ``i``.  Products read
left to right: ``mul(a, b)`` applies ``a`` first, i.e. ``b[a]``.
"""
from __future__ import annotations

import random

import numpy as np

from .. import errors


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return b[a]


def inverse(a: np.ndarray) -> np.ndarray:
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


_ARANGE: dict[int, np.ndarray] = {}


def is_identity(a: np.ndarray) -> bool:
    n = len(a)
    ref = _ARANGE.get(n)
    if ref is None:
        ref = _ARANGE[n] = np.arange(n)
    return np.array_equal(a, ref)


def cycle_string(p) -> str:
    """One-line cycle notation, e.g. ``(0 1 2)(3 4)``; ``()`` for the identity."""
    p = np.asarray(p)
    seen = np.zeros(len(p), dtype=bool)
    out = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            continue
        cyc = [i]
        seen[i] = True
        j = int(p[i])
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = int(p[j])
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def parse_cycles(text: str, n: int) -> np.ndarray:
    p = identity(n)
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk or chunk == "()":
            continue
        pts = [int(t) for t in chunk.strip("()").replace(",", " ").split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a] = b
    return p


class _Level:
    __slots__ = ("point", "gens", "orbit", "reps", "inv_reps")

    def __init__(self, point):
        self.point = point
        self.gens = []
        self.orbit = [point]
        self.reps = {}
        self.inv_reps = {}


class StabChain:
    """Base and strong generating set.

    Built by a seeded random Schreier-Sims phase followed by a deterministic
    pass that sifts every Schreier generator, so the result is exact whatever
    the seed.  ``base_prefix`` points are placed first in the base (levels with
    trivial basic orbits are kept), which is how pointwise stabilizers and
    kernels are read off.

    When the group order is already known (``known_order``) the random phase
    stops as soon as the chain reaches it and the deterministic pass is
    skipped; reaching the order certifies every level is complete.
    """

    def __init__(self, gens, n: int, base_prefix=(), seed: int = 0, random_rounds: int = 12,
                 known_order: int | None = None):
        self.n = n
        self.known_order = known_order
        self.gens = [np.asarray(g, dtype=np.int64) for g in gens if not is_identity(np.asarray(g))]
        self.levels: list[_Level] = [_Level(int(b)) for b in base_prefix]
        self._id = identity(n)
        for g in self.gens:
            self._ensure_moved(g)
        for lev in self.levels:
            lev.gens = [g for g in self.gens if self._fixes_prefix(g, self.levels.index(lev))]
        for k in range(len(self.levels)):
            self._rebuild(k)
        if self.gens:
            self._random_phase(random.Random(seed), random_rounds)
            if known_order is None or self.order() != known_order:
                self._deterministic_phase()
        if known_order is not None and self.order() != known_order:
            raise errors.IntegrityError(
                f"stabilizer chain order {self.order()} differs from the known order {known_order}"
            )

    # -- helpers -------------------------------------------------------------
    @property
    def base(self) -> list[int]:
        return [lev.point for lev in self.levels]

    def _fixes_prefix(self, g, k) -> bool:
        return all(g[self.levels[j].point] == self.levels[j].point for j in range(k))

    def _ensure_moved(self, g):
        """Extend the base so that ``g`` moves some base point."""
        if any(g[lev.point] != lev.point for lev in self.levels):
            return
        moved = np.flatnonzero(g != self._id)
        if len(moved):
            self.levels.append(_Level(int(moved[0])))

    def _rebuild(self, k: int):
        lev = self.levels[k]
        b = lev.point
        lev.reps = {b: self._id}
        lev.inv_reps = {b: self._id}
        lev.orbit = [b]
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                ux = lev.reps[x]
                for s in lev.gens:
                    y = int(s[x])
                    if y not in lev.reps:
                        uy = s[ux]  # ux then s
                        lev.reps[y] = uy
                        lev.orbit.append(y)
                        nxt.append(y)
            frontier = nxt

    def sift(self, g, start: int = 0):
        """Return ``(residue, level)``; level == len(base) means full sift."""
        for k in range(start, len(self.levels)):
            lev = self.levels[k]
            x = int(g[lev.point])
            ui = lev.inv_reps.get(x)
            if ui is None:
                u = lev.reps.get(x)
                if u is None:
                    return g, k
                ui = lev.inv_reps[x] = inverse(u)
            g = ui[g]
        return g, len(self.levels)

    def _add_strong(self, h, level: int):
        """Insert residue ``h`` (which fixes base[:level]) as a strong generator.

        It joins every level whose base prefix it fixes, so the generator sets
        stay nested down the chain.
        """
        self._ensure_moved(h)
        for k in range(len(self.levels)):
            if k > level and not self._fixes_prefix(h, k):
                break
            self.levels[k].gens.append(h)
            self._rebuild(k)
        self.gens.append(h)

    def _random_phase(self, rng: random.Random, rounds: int):
        pool = [g.copy() for g in self.gens]
        while len(pool) < 10:
            pool.append(pool[len(pool) % len(self.gens)].copy())
        acc = self._id.copy()
        for _ in range(50):
            self._pr_step(pool, rng)
        quiet = 0
        target = self.known_order
        while quiet < rounds:
            if target is not None and self.order() == target:
                return
            acc = mul(acc, self._pr_step(pool, rng))
            h, k = self.sift(acc)
            if k == len(self.levels) and is_identity(h):
                quiet += 1
                continue
            quiet = 0
            self._add_strong(h, k)

    @staticmethod
    def _pr_step(pool, rng):
        i, j = rng.sample(range(len(pool)), 2)
        if rng.random() < 0.5:
            pool[i] = mul(pool[i], pool[j])
        else:
            pool[i] = mul(pool[i], inverse(pool[j]))
        return pool[i]

    def _deterministic_phase(self):
        k = len(self.levels) - 1
        while k >= 0:
            restart = None
            for sch in self._nontrivial_schreier(self.levels[k]):
                h, j = self.sift(sch, k + 1)
                if j == len(self.levels) and is_identity(h):
                    continue
                self._add_strong(h, k + 1)
                restart = len(self.levels) - 1
                break
            if restart is not None:
                k = restart
            else:
                k -= 1

    def _nontrivial_schreier(self, lev):
        """Schreier generators ``u_x s u_{s(x)}^-1`` of a level that are not the identity."""
        orbit = lev.orbit
        U = np.stack([lev.reps[x] for x in orbit])
        where = {x: r for r, x in enumerate(orbit)}
        Uinv = np.empty_like(U)
        Uinv[np.arange(len(orbit))[:, None], U] = np.arange(self.n)
        ident = np.arange(self.n)
        for s in list(lev.gens):
            rows = np.fromiter((where[int(s[x])] for x in orbit), dtype=np.int64, count=len(orbit))
            sch = np.take_along_axis(Uinv[rows], s[U], axis=1)
            for r in np.flatnonzero((sch != ident).any(axis=1)):
                yield sch[r]

    # -- queries -------------------------------------------------------------
    def order(self) -> int:
        out = 1
        for lev in self.levels:
            out *= len(lev.orbit)
        return out

    def contains(self, g) -> bool:
        g = np.asarray(g, dtype=np.int64)
        h, k = self.sift(g)
        return k == len(self.levels) and is_identity(h)

    def stabilizer_gens(self, level: int) -> list[np.ndarray]:
        """Strong generators of the pointwise stabilizer of ``base[:level]``."""
        if level >= len(self.levels):
            return []
        return list(self.levels[level].gens)

    def stabilizer_order(self, level: int) -> int:
        out = 1
        for lev in self.levels[level:]:
            out *= len(lev.orbit)
        return out


class PermGroup:
    """Group generated by permutations of ``range(n)``; chain built lazily."""

    def __init__(self, generators, n: int, seed: int = 0):
        self.n = int(n)
        self.generators = [np.asarray(g, dtype=np.int64) for g in generators]
        for g in self.generators:
            if len(g) != self.n or not np.array_equal(np.sort(g), np.arange(self.n)):
                raise errors.ValidationError("generator is not a permutation of the domain")
        self.seed = seed
        self.known_order: int | None = None
        self._chains: dict[tuple, StabChain] = {}

    def __repr__(self):
        return f"PermGroup(degree={self.n}, generators={len(self.generators)})"

    def chain(self, base_prefix=()) -> StabChain:
        key = tuple(int(b) for b in base_prefix)
        if key not in self._chains:
            known = self.known_order
            if known is None and self._chains:
                known = next(iter(self._chains.values())).order()
            self._chains[key] = StabChain(self.generators, self.n, key, seed=self.seed, known_order=known)
        return self._chains[key]

    def order(self) -> int:
        return self.chain().order()

    def contains(self, g) -> bool:
        return self.chain().contains(g)

    def orbit_labels(self) -> np.ndarray:
        """Label each point with the smallest point of its orbit."""
        from scipy.sparse import coo_matrix
        from scipy.sparse.csgraph import connected_components

        n = self.n
        if not self.generators or n == 0:
            return np.arange(n)
        src = np.tile(np.arange(n), len(self.generators))
        dst = np.concatenate(self.generators)
        M = coo_matrix((np.ones(len(src)), (src, dst)), shape=(n, n)).tocsr()
        _, comp = connected_components(M, directed=True, connection="weak")
        first = np.full(comp.max() + 1, n, dtype=np.int64)
        np.minimum.at(first, comp, np.arange(n))
        return first[comp]

    def orbits(self) -> list[list[int]]:
        labels = self.orbit_labels()
        out: dict[int, list[int]] = {}
        for v, lab in enumerate(labels.tolist()):
            out.setdefault(lab, []).append(v)
        return [out[k] for k in sorted(out)]

    def orbit(self, v: int) -> list[int]:
        labels = self.orbit_labels()
        return np.flatnonzero(labels == labels[v]).tolist()

    def is_transitive(self) -> bool:
        return self.n <= 1 or len(set(self.orbit_labels().tolist())) == 1

    def pointwise_stabilizer(self, points) -> "PermGroup":
        points = [int(p) for p in points]
        ch = self.chain(points)
        H = PermGroup(ch.stabilizer_gens(len(points)), self.n, self.seed)
        H.known_order = ch.stabilizer_order(len(points))
        return H

    def point_stabilizer(self, v: int) -> "PermGroup":
        return self.pointwise_stabilizer([v])

    def is_semiregular(self) -> bool:
        """All point stabilizers trivial (checked orbit by orbit)."""
        total = self.order()
        for orb in self.orbits():
            if total != len(orb):
                return False
        return True


def perm_order(G: PermGroup) -> int:
    return G.order()


def point_stabilizer(G: PermGroup, v: int) -> PermGroup:
    return G.point_stabilizer(v)


def orbits(G: PermGroup, domain="vertices", graph=None) -> list[list[int]]:
    """Orbit partition on vertices or on the ordered arcs of ``graph``.

    Arcs are numbered by their position in the CSR arrays, i.e. in sorted
    ``(u, v)`` order.
    """
    if domain == "vertices":
        return G.orbits()
    if domain != "ordered_arcs":
        raise errors.DomainError(f"unknown orbit domain {domain!r}")
    if graph is None:
        raise errors.DomainError("arc orbits need the graph")
    return arc_action(G, graph).orbits()


def arc_action(G: PermGroup, graph) -> PermGroup:
    keys = graph.arc_keys
    n = graph.n
    src, dst = graph.arc_sources, graph.indices
    gens = []
    for g in G.generators:
        img = g[src] * n + g[dst]
        idx = np.searchsorted(keys, img)
        if (idx >= len(keys)).any() or not np.array_equal(keys[idx], img):
            raise errors.ValidationError("generator does not preserve adjacency")
        gens.append(idx)
    return PermGroup(gens, len(keys), G.seed)
