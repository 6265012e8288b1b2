"""
Finite and finitely generated abelian groups with exact element arithmetic.

A finite abelian group is stored as its primary decomposition
``Z/p1^e1 + ... + Z/pr^er`` with components sorted by ``(p, e)``; elements are
plain tuples of residues in that order.  A finitely generated group adds
``free_rank`` integer coordinates in front of the torsion coordinates.

Quasicyclic groups Z(p^inf) are not modelled directly.  A :class:`QuasiSpec`
describes a direct sum of cyclic and quasicyclic groups and materializes it at
a level n, replacing each Z(p^inf) by Z/p^n.  Level n embeds into level n+1
by multiplication by p on the quasicyclic coordinates.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from sympy import factorint, isprime

from .errors import GroupMismatch, InfiniteGroup, NotAPGroup, OrderCapExceeded
from .generic import DEFAULT_CAP, INFINITE

QUASI = math.inf


def _element_order(coords, moduli) -> int:
    n = 1
    for c, m in zip(coords, moduli):
        n = math.lcm(n, m // math.gcd(c, m))
    return n


@dataclass(frozen=True)
class FinAbelian:
    """Finite abelian group ``+ Z/p^e`` over the given ``(p, e)`` components."""

    components: tuple = ()
    cap: int = field(default=DEFAULT_CAP, compare=False, repr=False)

    def __post_init__(self):
        comps = []
        for p, e in self.components:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            if e < 1 or e != int(e):
                raise ValueError(f"exponent must be a positive integer, got {e}")
            comps.append((int(p), int(e)))
        object.__setattr__(self, "components", tuple(sorted(comps)))
        order = math.prod(p**e for p, e in comps)
        if order > self.cap:
            raise OrderCapExceeded(f"order {order} exceeds cap {self.cap}")
        object.__setattr__(self, "moduli", tuple(p**e for p, e in self.components))

    @classmethod
    def from_moduli(cls, *ns: int, cap: int = DEFAULT_CAP) -> FinAbelian:
        """Z/n1 + Z/n2 + ..., split into primary components."""
        comps = []
        for n in ns:
            if n < 1:
                raise ValueError(f"cyclic order must be positive, got {n}")
            comps.extend(factorint(n).items())
        return cls(tuple(comps), cap=cap)

    def __str__(self):
        if not self.components:
            return "1"
        return " + ".join(f"Z/{p}^{e}" if e > 1 else f"Z/{p}" for p, e in self.components)

    @property
    def free_rank(self) -> int:
        return 0

    @property
    def torsion(self) -> FinAbelian:
        return self

    @property
    def size(self) -> int:
        return math.prod(self.moduli)

    @property
    def exponent(self) -> int:
        return math.lcm(*self.moduli) if self.moduli else 1

    @property
    def primes(self) -> frozenset:
        return frozenset(p for p, _ in self.components)

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.components)

    zero = identity

    def _check(self, *xs):
        for x in xs:
            if len(x) != len(self.moduli):
                raise GroupMismatch(f"{x!r} is not an element of {self}")

    def contains(self, x) -> bool:
        return len(x) == len(self.moduli) and all(0 <= c < m for c, m in zip(x, self.moduli))

    def element(self, *coords: int) -> tuple:
        """Reduce integer coordinates into an element."""
        self._check(coords)
        return tuple(c % m for c, m in zip(coords, self.moduli))

    def add(self, a, b) -> tuple:
        self._check(a, b)
        return tuple((x + y) % m for x, y, m in zip(a, b, self.moduli))

    def neg(self, a) -> tuple:
        self._check(a)
        return tuple(-x % m for x, m in zip(a, self.moduli))

    def scale(self, a, n: int) -> tuple:
        return tuple(x * n % m for x, m in zip(a, self.moduli))

    mul = add
    inv = neg

    def order_of(self, a) -> int:
        self._check(a)
        return _element_order(a, self.moduli)

    def elements(self) -> Iterator[tuple]:
        return itertools.product(*(range(m) for m in self.moduli))

    def generators(self) -> tuple:
        n = len(self.moduli)
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def p_part(self, p: int) -> FinAbelian:
        return FinAbelian(tuple(c for c in self.components if c[0] == p), cap=self.cap)

    def p_indices(self, p: int) -> tuple:
        return tuple(i for i, (q, _) in enumerate(self.components) if q == p)

    def is_p_group(self, p: int) -> bool:
        return all(q == p for q, _ in self.components)

    def direct_sum(self, other: FinAbelian) -> FinAbelian:
        """
        The group ``self + other``.  Components are re-sorted, so coordinates of
        the result agree with the concatenation only when every prime of self
        is smaller than every prime of other.
        """
        return FinAbelian(self.components + other.components, cap=max(self.cap, other.cap))

    def omega(self, k: int, p: int | None = None) -> AbSubgroup:
        """Omega_k: the elements killed by p^k, for a p-group."""
        if p is None:
            ps = self.primes
            if len(ps) > 1:
                raise NotAPGroup(f"{self} is not a p-group")
            p = next(iter(ps)) if ps else 2
        if not self.is_p_group(p):
            raise NotAPGroup(f"{self} is not a {p}-group")
        if k < 0:
            raise ValueError(f"k must be >= 0, got {k}")
        return AbSubgroup(self, tuple(p ** max(e - k, 0) for _, e in self.components))


@dataclass(frozen=True)
class AbSubgroup:
    """
    The subgroup ``+ step_i * Z/p_i^e_i`` of ``parent``: coordinate i ranges over
    the multiples of ``step_i``.  Omega subgroups and the two-torsion of a
    finite abelian group have this shape.
    """

    parent: FinAbelian
    steps: tuple

    @property
    def size(self) -> int:
        return math.prod(m // s for m, s in zip(self.parent.moduli, self.steps))

    def __len__(self):
        return self.size

    def __contains__(self, a) -> bool:
        return self.parent.contains(a) and all(c % s == 0 for c, s in zip(a, self.steps))

    def elements(self) -> Iterator[tuple]:
        return itertools.product(*(range(0, m, s) for m, s in zip(self.parent.moduli, self.steps)))

    def __iter__(self):
        return self.elements()

    def iso_type(self) -> FinAbelian:
        comps = []
        for (p, e), m, s in zip(self.parent.components, self.parent.moduli, self.steps):
            q = m // s
            k = 0
            while q > 1:
                q //= p
                k += 1
            if k:
                comps.append((p, k))
        return FinAbelian(tuple(comps))


@dataclass(frozen=True)
class FgAbelian:
    """Finitely generated abelian group ``Z^free_rank + torsion``."""

    free_rank: int = 0
    torsion: FinAbelian = field(default_factory=FinAbelian)

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("free_rank must be >= 0")
        # 0 marks a free coordinate
        object.__setattr__(self, "moduli", (0,) * self.free_rank + self.torsion.moduli)

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        if self.torsion.components:
            parts.append(str(self.torsion))
        return " + ".join(parts) or "1"

    @property
    def components(self) -> tuple:
        return self.torsion.components

    @property
    def size(self):
        return INFINITE if self.free_rank else self.torsion.size

    @property
    def primes(self) -> frozenset:
        return self.torsion.primes

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.moduli)

    zero = identity

    def _check(self, *xs):
        for x in xs:
            if len(x) != len(self.moduli):
                raise GroupMismatch(f"{x!r} is not an element of {self}")

    def contains(self, x) -> bool:
        return len(x) == len(self.moduli) and all(
            m == 0 or 0 <= c < m for c, m in zip(x, self.moduli)
        )

    def element(self, *coords: int) -> tuple:
        self._check(coords)
        return tuple(c % m if m else c for c, m in zip(coords, self.moduli))

    def add(self, a, b) -> tuple:
        self._check(a, b)
        return tuple((x + y) % m if m else x + y for x, y, m in zip(a, b, self.moduli))

    def neg(self, a) -> tuple:
        self._check(a)
        return tuple(-x % m if m else -x for x, m in zip(a, self.moduli))

    def scale(self, a, n: int) -> tuple:
        return tuple(x * n % m if m else x * n for x, m in zip(a, self.moduli))

    mul = add
    inv = neg

    def order_of(self, a):
        self._check(a)
        r = self.free_rank
        if any(a[:r]):
            return INFINITE
        return _element_order(a[r:], self.torsion.moduli)

    def elements(self) -> Iterator[tuple]:
        if self.free_rank:
            raise InfiniteGroup(f"{self} is infinite")
        return self.torsion.elements()

    def window(self, radius: int) -> Iterator[tuple]:
        """Elements whose free coordinates lie in [-radius, radius]."""
        free = itertools.product(range(-radius, radius + 1), repeat=self.free_rank)
        return (f + t for f, t in itertools.product(list(free), list(self.torsion.elements())))

    def generators(self) -> tuple:
        n = len(self.moduli)
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def two_torsion(self) -> list:
        """All a with 2a = 0 (the free part contributes nothing)."""
        zero = (0,) * self.free_rank
        return [zero + t for t in self.torsion.elements() if not any(2 * c % m for c, m in zip(t, self.torsion.moduli))]


def as_fg(A) -> FgAbelian:
    return A if isinstance(A, FgAbelian) else FgAbelian(0, A)


def rank_p(A, p: int) -> int:
    """Number of cyclic p-components (the dimension of the p-socle)."""
    return sum(1 for q, _ in A.components if q == p)


def rank_0(A) -> int:
    return A.free_rank


def total_rank(A) -> int:
    return rank_0(A) + sum(rank_p(A, p) for p in A.primes)


@dataclass(frozen=True)
class QuasiSpec:
    """
    A direct sum of cyclic ``(p, e)`` and quasicyclic ``(p, QUASI)`` groups.

    Spec components are kept in their canonical spec order; materialized
    groups order their coordinates by ``(p, e)`` at the given level, and
    :meth:`coords_at` / :meth:`spec_coords` translate between the two.
    """

    components: tuple = ()

    def __post_init__(self):
        comps = []
        for p, e in self.components:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            if e != QUASI and (e < 1 or e != int(e)):
                raise ValueError(f"exponent must be positive or QUASI, got {e}")
            comps.append((int(p), QUASI if e == QUASI else int(e)))
        object.__setattr__(self, "components", tuple(sorted(comps)))

    def __str__(self):
        parts = [f"Z({p}^inf)" if e == QUASI else f"Z/{p}^{e}" for p, e in self.components]
        return " + ".join(parts) or "1"

    @property
    def primes(self) -> frozenset:
        return frozenset(p for p, _ in self.components)

    def is_infinite(self, p: int | None = None) -> bool:
        return any(e == QUASI and (p is None or q == p) for q, e in self.components)

    def p_part(self, p: int) -> QuasiSpec:
        return QuasiSpec(tuple(c for c in self.components if c[0] == p))

    def _level_exponents(self, level: int) -> list:
        if level < 1:
            raise ValueError(f"level must be >= 1, got {level}")
        return [(p, level if e == QUASI else e) for p, e in self.components]

    def _permutation(self, level: int) -> list:
        """perm[i] = coordinate of spec component i in the level group."""
        comps = self._level_exponents(level)
        order = sorted(range(len(comps)), key=lambda i: (comps[i], i))
        perm = [0] * len(comps)
        for pos, i in enumerate(order):
            perm[i] = pos
        return perm

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> FinAbelian:
        return FinAbelian(tuple(self._level_exponents(level)), cap=cap)

    def spec_coords(self, x, level: int) -> tuple:
        """Level-group element -> coordinates in spec component order."""
        perm = self._permutation(level)
        return tuple(x[perm[i]] for i in range(len(perm)))

    def coords_at(self, spec_x: Sequence[int], level: int) -> tuple:
        """Coordinates in spec component order -> level-group element."""
        perm = self._permutation(level)
        out = [0] * len(perm)
        for i, c in enumerate(spec_x):
            p, e = self._level_exponents(level)[i]
            out[perm[i]] = c % p**e
        return tuple(out)

    def embed(self, x, level: int) -> tuple:
        """Image of a level-n element in level n+1."""
        sx = self.spec_coords(x, level)
        lifted = [c * p if e == QUASI else c for c, (p, e) in zip(sx, self.components)]
        return self.coords_at(lifted, level + 1)

    def embed_to(self, x, level: int, target: int) -> tuple:
        if target < level:
            raise ValueError("cannot embed downwards")
        for n in range(level, target):
            x = self.embed(x, n)
        return x
