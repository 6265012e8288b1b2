"""
Cyclic extensions G = <g> D of a Dedekind group D, where g acts on D by a
power automorphism phi (``d^g = phi(d)``).

The top is either infinite cyclic (a genuine semidirect product) or finite
of order m with ``g^m = d0`` in D.  Elements are kept in the normal form
``(k, d)`` standing for ``g^k d``; with a finite top ``0 <= k < m``.

Multiplication is ``(k1, d1)(k2, d2) = (k1 + k2, phi^k2(d1) d2)``, with a
factor d0 folded in when the exponent wraps around m.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np
from sympy import divisors

from .dedekind import Q8_NAMES, DedekindGroup
from .errors import (
    GroupMismatch,
    Inconsistent,
    IncompatibleBase,
    InfiniteBase,
    InfiniteGroup,
    InvalidCocycle,
    SpecInvalid,
)
from .generic import (
    DEFAULT_CAP,
    INFINITE,
    commutes,
    conjugate,
    cyclic_powers,
    derived_generators,
    is_abelian_set,
    power,
    require_finite,
)
from .pauto import PowerAut, inversion


@functools.cache
def _element_matrix(base: DedekindGroup) -> np.ndarray:
    return base.element_matrix()


@dataclass(frozen=True)
class CyclicExtension:
    base: DedekindGroup
    action: PowerAut
    top: int | None = None  # None: infinite cyclic top
    d0: tuple | None = None
    cap: int = field(default=DEFAULT_CAP, compare=False, repr=False)

    def __post_init__(self):
        if self.action.base != self.base:
            raise IncompatibleBase("action is not an automorphism of the base")
        if self.top is None:
            if self.d0 is not None:
                raise SpecInvalid("an infinite cyclic top takes no cocycle")
            if not self.base.is_periodic:
                raise SpecInvalid("infinite top over a non-periodic base is not supported")
            return
        if self.top < 1:
            raise SpecInvalid(f"top order must be >= 1, got {self.top}")
        d0 = self.base.identity if self.d0 is None else self.d0
        if not self.base.contains(d0):
            raise GroupMismatch(f"cocycle {d0!r} is not in {self.base}")
        object.__setattr__(self, "d0", d0)
        if self.action.apply(d0) != d0:
            raise InvalidCocycle("g must commute with g^m: phi(d0) != d0")
        for x in self.base.generators():
            if self.action.apply(x, self.top) != conjugate(self.base, x, d0):
                raise InvalidCocycle("phi^m must be conjugation by d0")

    def __str__(self):
        top = "Z" if self.top is None else f"C{self.top}"
        tail = "" if self.top is None or self.d0 == self.base.identity else f", g^{self.top}={format_base(self.base, self.d0)}"
        return f"<g:{top}> x| ({self.base}) via {self.action}{tail}"

    @property
    def size(self):
        if self.top is None:
            return INFINITE
        return self.top * self.base.size

    @property
    def is_finite(self) -> bool:
        return self.size != INFINITE

    @property
    def identity(self) -> tuple:
        return (0, self.base.identity)

    @property
    def g(self) -> tuple:
        return self.element(1)

    def element(self, k: int = 0, d=None) -> tuple:
        """Normal form of g^k d."""
        d = self.base.identity if d is None else d
        if not self.base.contains(d):
            raise GroupMismatch(f"{d!r} is not in {self.base}")
        if self.top is None:
            return (k, d)
        q, r = divmod(k, self.top)
        return (r, self.base.mul(self._d0_pow(q), d))

    def _d0_pow(self, n: int):
        return power(self.base, self.d0, n)

    def contains(self, x) -> bool:
        k, d = x
        return (self.top is None or 0 <= k < self.top) and self.base.contains(d)

    def mul(self, x, y) -> tuple:
        k1, d1 = x
        k2, d2 = y
        B = self.base
        d = B.mul(self.action.apply(d1, k2), d2)
        k = k1 + k2
        if self.top is not None and k >= self.top:
            k -= self.top
            d = B.mul(self.d0, d)
        return (k, d)

    def inv(self, x) -> tuple:
        k, d = x
        B = self.base
        if self.top is None:
            return (-k, B.inv(self.action.apply(d, -k)))
        if k == 0:
            return (0, B.inv(d))
        j = self.top - k
        return (j, B.inv(B.mul(self.d0, self.action.apply(d, j))))

    def order_of(self, x):
        k, d = x
        if self.top is None:
            return INFINITE if k else self.base.order_of(d)
        s = self.top // math.gcd(k, self.top)
        z = power(self, x, s)
        n = self.base.order_of(z[1])
        return n if n == INFINITE else s * n

    def elements(self) -> Iterator[tuple]:
        require_finite(self, self.cap)
        ds = list(self.base.elements())
        return ((k, d) for k in range(self.top) for d in ds)

    def window(self, radius: int) -> Iterator[tuple]:
        """g^k d with |k| <= radius (all k for a finite top) and d in the base."""
        ks = range(-radius, radius + 1) if self.top is None else range(self.top)
        if self.base.is_periodic:
            ds = list(self.base.elements())
        else:
            ds = [(0, a) for a in self.base.abelian.window(radius)]
        return ((k, d) for k in ks for d in ds)

    def generators(self) -> tuple:
        gens = [(0, b) for b in self.base.generators()]
        if self.top is None or self.top > 1:
            gens.insert(0, self.g)
        return tuple(gens)

    def finite_quotient(self, modulus: int | None = None) -> CyclicExtension:
        """
        G / <g^M> for an infinite top, with M a multiple of the order of phi
        (so that g^M is central).  Defaults to M = order of phi.
        """
        if self.top is not None:
            raise SpecInvalid("already a finite top")
        o = self.action.order()
        modulus = modulus or o
        if modulus % o:
            raise SpecInvalid(f"{modulus} is not a multiple of the action order {o}")
        return CyclicExtension(self.base, self.action, modulus, self.base.identity, cap=self.cap)


def format_base(D: DedekindGroup, d) -> str:
    q, a = d
    coords = ",".join(str(c) for c in a)
    if D.hamiltonian:
        return f"({Q8_NAMES[q]};{coords})" if a else f"({Q8_NAMES[q]})"
    return f"({coords})"


def format_element(G: CyclicExtension, x) -> str:
    k, d = x
    return f"g^{k}*{format_base(G.base, d)}"


def fg_abelian_extension(A, d0=None, cap: int = DEFAULT_CAP) -> CyclicExtension:
    """
    G = <g, A> with g of order at most 4, g^2 = d0 in A and a^g = a^-1.

    ``A`` is a finitely generated abelian group and ``d0`` a coordinate tuple
    of A with 2 d0 = 0.
    """
    base = DedekindGroup.from_abelian(A)
    phi = inversion(base)
    d = base.identity if d0 is None else (0, base.abelian.element(*d0))
    try:
        return CyclicExtension(base, phi, 2, d, cap=cap)
    except InvalidCocycle as exc:
        raise InvalidCocycle(f"g^2 = {d[1]} must satisfy 2 d0 = 0") from exc


@dataclass(frozen=True)
class CentralizerDesc:
    """
    C_G(x) = <y0> (C_G(x) n D) with ``y0 = (m0, e0)``; the projection of the
    centralizer onto the top is generated by m0.  For a finite top whose
    projection is trivial, ``m0 == top`` and ``e0`` is None.
    """

    group: CyclicExtension
    element: tuple
    torsion_part: frozenset
    m0: int
    e0: tuple | None

    @property
    def size(self):
        G = self.group
        if G.top is None:
            return INFINITE
        return (G.top // self.m0) * len(self.torsion_part)

    def __len__(self):
        return self.size

    @property
    def y0(self):
        return None if self.e0 is None else (self.m0, self.e0)

    def elements(self) -> Iterator[tuple]:
        G = self.group
        if G.top is None:
            raise InfiniteGroup("centralizer is infinite")
        y = G.identity
        for _ in range(G.top // self.m0):
            for c in sorted(self.torsion_part):
                yield G.mul(y, (0, c))
            if self.e0 is not None:
                y = G.mul(y, self.y0)

    def __contains__(self, y) -> bool:
        G = self.group
        m, e = y
        if m % self.m0:
            return False
        z = G.mul(G.inv(power(G, self.y0, m // self.m0)), y) if m else y
        return z[0] == 0 and z[1] in self.torsion_part


def _solvable_rows(G: CyclicExtension, x, m: int, lhs: np.ndarray, E: np.ndarray) -> np.ndarray:
    """Mask of e in D with phi^m(d) e = phi^k(e) d."""
    B = G.base
    d = B.row(x[1])
    rhs = B.mul_rows(G.action.apply_rows(d, m), E)
    return np.all(lhs == rhs, axis=1)


def centralizer(G: CyclicExtension, x) -> CentralizerDesc:
    """
    C_G(x) from the commutation equation: (m, e) commutes with (k, d) iff
    phi^m(d) e = phi^k(e) d in D.

    The torsion part is found by scanning all of D.  For an infinite top the
    projection is m0 Z where m0 divides gcd(k, o(phi)), so only those divisors
    are scanned; the result is checked to be a subgroup.
    """
    B = G.base
    if not B.is_periodic:
        raise InfiniteBase(f"{B} is not periodic; use centralizer_order")
    k, d = x
    E = _element_matrix(B)
    lhs = B.mul_rows(G.action.apply_rows(E, k), B.row(d))
    mask0 = _solvable_rows(G, x, 0, lhs, E)
    torsion = frozenset(B.from_row(r) for r in E[mask0])

    def first_solution(m):
        mask = _solvable_rows(G, x, m, lhs, E)
        idx = np.flatnonzero(mask)
        return B.from_row(E[idx[0]]) if len(idx) else None

    if G.top is None:
        o = G.action.order()
        span = math.gcd(abs(k), o)
        m0 = e0 = None
        for m in divisors(span):
            e0 = first_solution(m)
            if e0 is not None:
                m0 = m
                break
        if m0 is None or first_solution(o) is None or (k and first_solution(abs(k)) is None):
            raise Inconsistent(f"projection of C_G({x}) is not a subgroup")
        return CentralizerDesc(G, x, torsion, m0, e0)

    solvable = {m: first_solution(m) for m in range(1, G.top)}
    ms = [m for m, e in solvable.items() if e is not None]
    m0 = ms[0] if ms else G.top
    if G.top % m0 or ms != list(range(m0, G.top, m0)):
        raise Inconsistent(f"projection of C_G({x}) is not a subgroup of Z/{G.top}")
    return CentralizerDesc(G, x, torsion, m0, solvable.get(m0))


def _solve_double(A, c) -> list:
    """All b in the f.g. abelian group A with 2b = c."""
    options = []
    for ci, m in zip(c, A.moduli):
        if m == 0:
            if ci % 2:
                return []
            options.append([ci // 2])
        elif m % 2:
            options.append([ci * pow(2, -1, m) % m])
        else:
            if ci % 2:
                return []
            options.append([ci // 2, ci // 2 + m // 2])
    out = [()]
    for opts in options:
        out = [b + (o,) for b in out for o in opts]
    return out


def _require_thm43_shape(G: CyclicExtension):
    A = G.base.abelian
    inverts = all(G.action.apply(gen) == G.base.inv(gen) for gen in G.base.generators())
    if G.top != 2 or G.base.hamiltonian or not inverts:
        raise SpecInvalid("expected <g, A> with g^2 in A acting by inversion")
    return A


def fg_centralizer(G: CyclicExtension, x) -> list | None:
    """
    The centralizer of x in <g, A> (inversion action), listed explicitly when
    finite; None when infinite (x in A).
    """
    A = _require_thm43_shape(G)
    eps, (_, a) = x
    if eps == 0:
        return None
    same = [(0, (0, b)) for b in _solve_double(A, A.identity)]
    other = [(1, (0, b)) for b in _solve_double(A, A.add(a, a))]
    return same + other


def centralizer_order(G: CyclicExtension, x):
    """|C_G(x)| for the inversion-by-g extension; infinite for x in A."""
    C = fg_centralizer(G, x)
    return INFINITE if C is None else len(C)


def _fg_centralizer_index(G: CyclicExtension, x):
    A = _require_thm43_shape(G)
    eps, (_, a) = x
    if eps:
        return centralizer_order(G, x) // G.order_of(x)
    if G.order_of(x) != INFINITE:
        return INFINITE
    # x has infinite order, so 2a != 0 and C_G(x) = A
    if A.free_rank > 1:
        return INFINITE
    return abs(a[0]) * A.torsion.size


def centralizer_index(G: CyclicExtension, x):
    """|C_G(x) : <x>| (an int, or INFINITE)."""
    if not G.base.is_periodic:
        return _fg_centralizer_index(G, x)
    C = centralizer(G, x)
    if G.top is None:
        k = x[0]
        if k == 0:
            return INFINITE
        if k % C.m0:
            raise Inconsistent(f"m0 = {C.m0} does not divide k = {k}")
        return abs(k) // C.m0 * len(C.torsion_part)
    return C.size // G.order_of(x)


def in_cyclic(G: CyclicExtension, y, x) -> bool:
    """Whether y lies in <x>."""
    o = G.order_of(x)
    if o != INFINITE:
        return y in set(cyclic_powers(G, x))
    if G.top is None:
        k = x[0]
        return y[0] % k == 0 and power(G, x, y[0] // k) == y
    # finite top over a non-periodic base: y = x^r z^j with z = x^s in A
    A = G.base.abelian
    s = G.top // math.gcd(x[0], G.top)
    z = power(G, x, s)[1][1]
    lead = next(i for i in range(A.free_rank) if z[i])
    for r in range(s):
        w = G.mul(power(G, x, -r), y)
        if w[0] != 0:
            continue
        b = w[1][1]
        if b[lead] % z[lead]:
            continue
        if A.scale(z, b[lead] // z[lead]) == b:
            return True
    return False


def is_cyclic_normal(G: CyclicExtension, x) -> bool:
    """
    Whether <x> is normal in G, testing conjugation by a generating set
    (and g^-1, since an infinite top is not generated by g as a monoid).
    """
    conjugators = list(G.generators())
    if G.top is None:
        conjugators.append(G.inv(G.g))
    return all(in_cyclic(G, conjugate(G, x, s), x) for s in conjugators)


def torsion_subgroup(G: CyclicExtension) -> frozenset:
    if G.top is None:
        return frozenset((0, d) for d in G.base.elements())
    if not G.is_finite:
        raise InfiniteGroup("the torsion subgroup is infinite")
    return frozenset(G.elements())


def center(G: CyclicExtension) -> frozenset:
    gens = G.generators()
    return frozenset(x for x in G.elements() if all(commutes(G, x, s) for s in gens))


def is_metabelian(G) -> bool:
    """G' is abelian; G' is generated by the conjugates of generator commutators."""
    return is_abelian_set(G, derived_generators(G))
