"""
Brute-force helpers over any group object exposing the handle protocol.

A handle provides ``identity``, ``mul(x, y)``, ``inv(x)``, ``generators()``,
``size`` (an int, or ``math.inf``) and, for finite groups, ``elements()``.
Every group type in the package implements it, so the routines here work
uniformly on abelian groups, Dedekind groups and cyclic extensions.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Hashable, Iterable, Iterator, Protocol

from .errors import InfiniteGroup, OrderCapExceeded

INFINITE = math.inf
DEFAULT_CAP = 2**20


class GroupHandle(Protocol):
    identity: Hashable

    @property
    def size(self) -> int | float: ...

    def mul(self, x, y): ...

    def inv(self, x): ...

    def generators(self) -> tuple: ...

    def elements(self) -> Iterator: ...


def require_finite(G, cap: int = DEFAULT_CAP) -> int:
    n = G.size
    if n == INFINITE:
        raise InfiniteGroup(f"{G!r} is infinite")
    if n > cap:
        raise OrderCapExceeded(f"group order {n} exceeds cap {cap}")
    return int(n)


def power(G, x, n: int):
    """x**n by repeated squaring."""
    if n < 0:
        x, n = G.inv(x), -n
    result = G.identity
    while n:
        if n & 1:
            result = G.mul(result, x)
        x = G.mul(x, x)
        n >>= 1
    return result


def cyclic_powers(G, x, limit: int | None = None) -> list:
    """[1, x, x^2, ...] up to (excluding) the first repeat of the identity."""
    out = [G.identity]
    y = x
    while y != G.identity:
        out.append(y)
        if limit is not None and len(out) > limit:
            raise InfiniteGroup(f"element {x!r} has order > {limit}")
        y = G.mul(y, x)
    return out


def conjugate(G, x, g):
    """x^g = g^-1 x g."""
    return G.mul(G.mul(G.inv(g), x), g)


def commutes(G, x, y) -> bool:
    return G.mul(x, y) == G.mul(y, x)


def commutator(G, x, y):
    """[x, y] = x^-1 y^-1 x y."""
    return G.mul(G.mul(G.inv(x), G.inv(y)), G.mul(x, y))


def conjugacy_class(G, x) -> set:
    """Orbit of x under conjugation, generated from G.generators()."""
    gens = [(G.inv(g), g) for g in G.generators()]
    seen = {x}
    todo = deque([x])
    while todo:
        y = todo.popleft()
        for gi, g in gens:
            z = G.mul(G.mul(gi, y), g)
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return seen


def brute_centralizer(G, x, elements: Iterable | None = None) -> set:
    """{y : xy = yx} by exhaustive enumeration."""
    if elements is None:
        elements = G.elements()
    return {y for y in elements if G.mul(x, y) == G.mul(y, x)}


def is_normal_cyclic_finite(G, x, powers: Iterable | None = None) -> tuple[bool, object]:
    """
    Whether <x> is normal, for x of finite order.

    Returns ``(True, None)`` or ``(False, g)`` with g a generator such that
    x^g is not in <x>.
    """
    cyc = set(powers) if powers is not None else set(cyclic_powers(G, x))
    for g in G.generators():
        if conjugate(G, x, g) not in cyc:
            return False, g
    return True, None


def closure(G, seeds: Iterable) -> set:
    """Subgroup generated by seeds (finite groups only)."""
    seeds = list(seeds)
    sub = {G.identity}
    todo = deque([G.identity])
    while todo:
        y = todo.popleft()
        for s in seeds:
            z = G.mul(y, s)
            if z not in sub:
                sub.add(z)
                todo.append(z)
    return sub


def derived_generators(G) -> set:
    """
    A generating set of the derived subgroup: all conjugates of the
    commutators of pairs of generators.
    """
    gens = list(G.generators())
    seeds = set()
    for a in gens:
        for b in gens:
            c = commutator(G, a, b)
            if c != G.identity and c not in seeds:
                seeds |= conjugacy_class(G, c)
    return seeds


def is_abelian_set(G, elems: Iterable) -> bool:
    elems = list(elems)
    return all(commutes(G, a, b) for i, a in enumerate(elems) for b in elems[i + 1 :])
