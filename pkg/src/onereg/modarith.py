"""Exact modular arithmetic for the group presentations and family parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True, order=True)
class ResidueClass:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise DomainError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self):
        return self.value

    def __mul__(self, other):
        other = self._coerce(other)
        return ResidueClass(self.value * other.value, self.modulus)

    def __add__(self, other):
        other = self._coerce(other)
        return ResidueClass(self.value + other.value, self.modulus)

    def __neg__(self):
        return ResidueClass(-self.value, self.modulus)

    def __pow__(self, k):
        return ResidueClass(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self):
        g = math.gcd(self.value, self.modulus)
        if g != 1:
            raise DomainError(f"{self.value} is not a unit mod {self.modulus} (gcd {g})")
        return ResidueClass(pow(self.value, -1, self.modulus), self.modulus)

    def _coerce(self, other):
        if isinstance(other, ResidueClass):
            if other.modulus != self.modulus:
                raise DomainError(f"moduli differ: {self.modulus} vs {other.modulus}")
            return other
        return ResidueClass(int(other), self.modulus)

    def __repr__(self):
        return f"{self.value} mod {self.modulus}"


def is_prime(n: int) -> bool:
    """Trial division; inputs here are desk-scale."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_prime(p: int, *, odd=False, above=None) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"{p!r} is not a prime")
    if odd and p == 2:
        raise DomainError("p must be an odd prime")
    if above is not None and p <= above:
        raise DomainError(f"p must be a prime > {above}, got {p}")
    return p


def _as_residue(t, modulus=None) -> ResidueClass:
    if isinstance(t, ResidueClass):
        return t
    if modulus is None:
        raise DomainError("a bare integer needs an explicit modulus")
    return ResidueClass(t, modulus)


def mul_order(t, modulus=None) -> int:
    """Multiplicative order of a unit residue."""
    t = _as_residue(t, modulus)
    if t.modulus < 2:
        raise DomainError("modulus must be at least 2")
    g = math.gcd(t.value, t.modulus)
    if g != 1:
        raise DomainError(f"{t.value} is not a unit mod {t.modulus}: gcd = {g}")
    k, acc = 1, t.value
    while acc != 1:
        acc = acc * t.value % t.modulus
        k += 1
    return k


def fifth_roots(modulus: int) -> list[ResidueClass]:
    """All units ``i`` with ``i**5 == 1`` modulo ``modulus``, sorted."""
    if modulus < 2:
        raise DomainError("modulus must be at least 2")
    return [
        ResidueClass(i, modulus)
        for i in range(1, modulus)
        if math.gcd(i, modulus) == 1 and pow(i, 5, modulus) == 1
    ]


def nontrivial_fifth_roots(modulus: int) -> list[int]:
    return [r.value for r in fifth_roots(modulus) if r.value != 1]


def subgroup_h(n: int, k: int) -> list[ResidueClass]:
    """The unique order-``k`` subgroup of the cyclic group of units mod prime ``n``."""
    if not is_prime(n):
        raise DomainError(f"{n} is not prime")
    if k < 1 or (n - 1) % k != 0:
        raise DomainError(f"{k} does not divide {n} - 1 = {n - 1}")
    out = [ResidueClass(t, n) for t in range(1, n) if pow(t, k, n) == 1]
    assert len(out) == k
    return out


def crt_split(x, m: int, n: int) -> tuple[ResidueClass, ResidueClass]:
    """Reduce ``x`` (mod m*n) to the pair ``(x mod m, x mod n)``."""
    if math.gcd(m, n) != 1:
        raise DomainError(f"gcd({m}, {n}) = {math.gcd(m, n)} != 1")
    x = _as_residue(x, m * n)
    if x.modulus != m * n:
        raise DomainError(f"expected a residue mod {m * n}, got mod {x.modulus}")
    return ResidueClass(x.value, m), ResidueClass(x.value, n)


def crt_join(a, b) -> ResidueClass:
    """Inverse of :func:`crt_split`."""
    m, n = a.modulus, b.modulus
    if math.gcd(m, n) != 1:
        raise DomainError(f"gcd({m}, {n}) != 1")
    x = (a.value * n * pow(n, -1, m) + b.value * m * pow(m, -1, n)) % (m * n)
    return ResidueClass(x, m * n)


def euler_phi(n: int) -> int:
    result, m, f = n, n, 2
    while f * f <= m:
        if m % f == 0:
            while m % f == 0:
                m //= f
            result -= result // f
        f += 1
    if m > 1:
        result -= result // m
    return result
