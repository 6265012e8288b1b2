"""
Dedekind groups: abelian groups, and Hamiltonian groups Q8 x E x B with E
elementary abelian of exponent 2 and B abelian of odd order.

Elements of a :class:`DedekindGroup` are pairs ``(q, a)`` where ``q`` indexes
an element of Q8 (always 0 for abelian groups) and ``a`` is a tuple of
abelian coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .abelian import QUASI, FgAbelian, FinAbelian, QuasiSpec, as_fg, rank_p
from .errors import NonPeriodic, SpecInvalid
from .generic import DEFAULT_CAP, INFINITE, cyclic_powers, conjugate, require_finite

Q8_NAMES = ("1", "-1", "i", "-i", "j", "-j", "k", "-k")
Q8_INDEX = {name: n for n, name in enumerate(Q8_NAMES)}


def _as_quaternion(n: int) -> tuple:
    v = [0, 0, 0, 0]
    v[n // 2] = -1 if n % 2 else 1
    return tuple(v)


def _hamilton(a, b) -> tuple:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


_QUAT = [_as_quaternion(n) for n in range(8)]
Q8_MUL = tuple(tuple(_QUAT.index(_hamilton(_QUAT[a], _QUAT[b])) for b in range(8)) for a in range(8))
Q8_INV = tuple(Q8_MUL[a].index(0) for a in range(8))
Q8_MUL_NP = np.array(Q8_MUL, dtype=np.int64)


def q8_conj(q: int, by: int) -> int:
    """q^by = by^-1 q by."""
    return Q8_MUL[Q8_MUL[Q8_INV[by]][q]][by]


def q8_order(q: int) -> int:
    return {0: 1, 1: 2}.get(q, 4)


@dataclass(frozen=True)
class DedekindGroup:
    """
    ``abelian`` is the abelian factor; when ``hamiltonian`` is set the group is
    Q8 x abelian, and the factor must be periodic with an elementary 2-part.
    """

    abelian: FgAbelian = field(default_factory=FgAbelian)
    hamiltonian: bool = False

    def __post_init__(self):
        object.__setattr__(self, "abelian", as_fg(self.abelian))
        if self.hamiltonian:
            if self.abelian.free_rank:
                raise SpecInvalid("a Hamiltonian group is periodic")
            if any(p == 2 and e > 1 for p, e in self.abelian.components):
                raise SpecInvalid("the 2-part of a Hamiltonian group is Q8 x elementary abelian")

    @classmethod
    def from_abelian(cls, A) -> DedekindGroup:
        return cls(as_fg(A), False)

    @classmethod
    def hamiltonian_group(cls, elem2_rank: int = 0, odd: FinAbelian | None = None,
                          cap: int = DEFAULT_CAP) -> DedekindGroup:
        odd = odd or FinAbelian()
        if 2 in odd.primes:
            raise SpecInvalid("odd factor must have odd order")
        comps = ((2, 1),) * elem2_rank + odd.components
        return cls(FgAbelian(0, FinAbelian(comps, cap=cap)), True)

    @classmethod
    def q8(cls) -> DedekindGroup:
        return cls.hamiltonian_group()

    def __str__(self):
        if not self.hamiltonian:
            return str(self.abelian)
        rest = str(self.abelian)
        return "Q8" if rest == "1" else f"Q8 x ({rest})"

    @property
    def size(self):
        return self.abelian.size * (8 if self.hamiltonian else 1)

    @property
    def is_periodic(self) -> bool:
        return self.abelian.free_rank == 0

    @property
    def identity(self) -> tuple:
        return (0, self.abelian.identity)

    def element(self, q: str | int = 0, *coords: int) -> tuple:
        if isinstance(q, str):
            q = Q8_INDEX[q]
        if q and not self.hamiltonian:
            raise SpecInvalid("abelian Dedekind groups have no Q8 coordinate")
        return (q, self.abelian.element(*coords))

    def contains(self, x) -> bool:
        q, a = x
        return (q == 0 or (self.hamiltonian and 0 <= q < 8)) and self.abelian.contains(a)

    def mul(self, x, y) -> tuple:
        return (Q8_MUL[x[0]][y[0]], self.abelian.add(x[1], y[1]))

    def inv(self, x) -> tuple:
        return (Q8_INV[x[0]], self.abelian.neg(x[1]))

    def order_of(self, x):
        n = self.abelian.order_of(x[1])
        return n if n == INFINITE else math.lcm(q8_order(x[0]), n)

    def elements(self) -> Iterator[tuple]:
        qs = range(8) if self.hamiltonian else (0,)
        ab = list(self.abelian.elements())
        return ((q, a) for q in qs for a in ab)

    def generators(self) -> tuple:
        gens = [(0, a) for a in self.abelian.generators()]
        if self.hamiltonian:
            gens = [(Q8_INDEX["i"], self.abelian.identity), (Q8_INDEX["j"], self.abelian.identity)] + gens
        return tuple(gens)

    def primes(self) -> frozenset:
        if not self.is_periodic:
            raise NonPeriodic(f"{self} is not periodic")
        ps = set(self.abelian.primes)
        if self.hamiltonian:
            ps.add(2)
        return frozenset(ps)

    def sylow(self, p: int) -> DedekindGroup:
        """The Sylow p-subgroup D_p, as a group in its own right."""
        if not self.is_periodic:
            raise NonPeriodic(f"{self} is not periodic")
        part = FgAbelian(0, self.abelian.torsion.p_part(p))
        return DedekindGroup(part, self.hamiltonian and p == 2)

    def project(self, x, p: int) -> tuple:
        """The p-component of x, as an element of sylow(p)."""
        idx = self.abelian.torsion.p_indices(p)
        q = x[0] if p == 2 else 0
        return (q, tuple(x[1][i] for i in idx))

    def prufer_rank(self, p: int) -> int:
        """Rank of D_p; Q8 counts as 2 generators."""
        r = rank_p(self.abelian, p)
        return r + 2 if self.hamiltonian and p == 2 else r

    # vectorized arithmetic over rows [q, a_1, ..., a_n], used by enumeration cores

    def element_matrix(self) -> np.ndarray:
        require_finite(self)
        moduli = self.abelian.moduli
        grids = np.meshgrid(*(np.arange(m) for m in moduli), indexing="ij") if moduli else []
        ab = np.stack([g.ravel() for g in grids], axis=1) if moduli else np.zeros((1, 0), dtype=np.int64)
        qs = np.arange(8) if self.hamiltonian else np.zeros(1, dtype=np.int64)
        rows = np.empty((len(qs) * len(ab), 1 + len(moduli)), dtype=np.int64)
        rows[:, 0] = np.repeat(qs, len(ab))
        rows[:, 1:] = np.tile(ab, (len(qs), 1))
        return rows

    def row(self, x) -> np.ndarray:
        return np.array((x[0],) + tuple(x[1]), dtype=np.int64)

    def from_row(self, r) -> tuple:
        return (int(r[0]), tuple(int(c) for c in r[1:]))

    def mul_rows(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        X, Y = np.broadcast_arrays(np.atleast_2d(X), np.atleast_2d(Y))
        out = np.empty(X.shape, dtype=np.int64)
        out[:, 0] = Q8_MUL_NP[X[:, 0], Y[:, 0]]
        out[:, 1:] = (X[:, 1:] + Y[:, 1:]) % np.array(self.abelian.moduli, dtype=np.int64)
        return out


@dataclass(frozen=True)
class DedekindSpec:
    """
    Level-indexed description of a periodic Dedekind group of finite rank:
    a :class:`QuasiSpec` for the abelian factor, plus an optional Q8 factor.
    """

    abelian: QuasiSpec = field(default_factory=QuasiSpec)
    hamiltonian: bool = False

    def __post_init__(self):
        if self.hamiltonian and any(p == 2 and e != 1 for p, e in self.abelian.components):
            raise SpecInvalid("Hamiltonian 2-part must be Q8 x elementary abelian (finite)")

    def __str__(self):
        return f"Q8 x ({self.abelian})" if self.hamiltonian else str(self.abelian)

    @property
    def primes(self) -> frozenset:
        return self.abelian.primes | ({2} if self.hamiltonian else set())

    def is_infinite(self, p: int | None = None) -> bool:
        return self.abelian.is_infinite(p)

    def is_abelian_at(self, p: int) -> bool:
        return not (self.hamiltonian and p == 2)

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> DedekindGroup:
        return DedekindGroup(FgAbelian(0, self.abelian.materialize(level, cap)), self.hamiltonian)

    def element_at(self, q, spec_coords, level: int) -> tuple:
        if isinstance(q, str):
            q = Q8_INDEX[q]
        return (q, self.abelian.coords_at(spec_coords, level))

    def embed(self, x, level: int) -> tuple:
        return (x[0], self.abelian.embed(x[1], level))

    def embed_to(self, x, level: int, target: int) -> tuple:
        return (x[0], self.abelian.embed_to(x[1], level, target))

    def exponent_at(self, p: int, level: int) -> int:
        """Largest e with Z/p^e a component at this level (0 if none)."""
        es = [level if e == QUASI else e for q, e in self.abelian.components if q == p]
        return max(es, default=0)


@dataclass(frozen=True)
class DedekindVerdict:
    is_dedekind: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.is_dedekind


def is_dedekind(G, cap: int = DEFAULT_CAP) -> DedekindVerdict:
    """
    Brute-force Dedekind test: every cyclic subgroup is normal.

    On failure the witness is ``(x, g)`` with g a generator of G such that
    ``<x>^g != <x>``.  Works on any finite group handle.
    """
    require_finite(G, cap)
    seen = set()
    for x in G.elements():
        if x in seen:
            continue
        powers = cyclic_powers(G, x)
        n = len(powers)
        seen.update(powers[j] for j in range(1, n) if math.gcd(j, n) == 1)
        cyc = set(powers)
        for g in G.generators():
            if conjugate(G, x, g) not in cyc:
                return DedekindVerdict(False, (x, g))
    return DedekindVerdict(True)
