"""
Brute-force reference computations.  These use only a group's ``mul``/``inv``
and element lists (or plain integer arithmetic), never the closed forms under
test.
"""

import itertools
import math


def brute_centralizer(G, x, elements=None):
    elements = list(G.elements()) if elements is None else elements
    return {y for y in elements if G.mul(x, y) == G.mul(y, x)}


def cyclic(G, x):
    out = [G.identity]
    y = x
    while y != G.identity:
        out.append(y)
        y = G.mul(y, x)
    return out


def subgroup_closure(G, seeds):
    H = {G.identity} | set(seeds)
    frontier = list(H)
    while frontier:
        new = []
        for a in frontier:
            for b in list(H):
                for c in (G.mul(a, b), G.mul(b, a)):
                    if c not in H:
                        H.add(c)
                        new.append(c)
        frontier = new
    return frozenset(H)


def all_subgroups(G):
    """Every subgroup, by joining cyclic subgroups until nothing new appears."""
    cyclics = {subgroup_closure(G, [x]) for x in G.elements()}
    subs = set(cyclics)
    frontier = set(cyclics)
    while frontier:
        new = set()
        for H in frontier:
            for C in cyclics:
                if not C <= H:
                    J = subgroup_closure(G, H | C)
                    if J not in subs:
                        new.add(J)
        subs |= new
        frontier = new
    return subs


def is_normal_subgroup(G, H):
    return all(G.mul(G.mul(G.inv(g), h), g) in H for g in G.elements() for h in H)


def dedekind_by_subgroups(G):
    return all(is_normal_subgroup(G, H) for H in all_subgroups(G))


def abelian_automorphisms(A):
    """All automorphisms of a finite abelian group, as dicts, via images of generators."""
    gens = A.generators()
    elems = list(A.elements())
    orders = {a: A.order_of(a) for a in elems}
    choices = [[a for a in elems if orders[a] == A.order_of(g)] for g in gens]
    autos = []
    for images in itertools.product(*choices):
        f = {}
        ok = True
        for x in elems:
            y = A.identity
            for c, im in zip(x, images):
                y = A.add(y, A.scale(im, c))
            f[x] = y
        if len(set(f.values())) != len(elems):
            continue
        for x, y in itertools.product(gens, elems):
            if f[A.add(x, y)] != A.add(f[x], f[y]):
                ok = False
                break
        if ok:
            autos.append(f)
    return autos


def fixed_points(A, t, k):
    """{a : t^k a = a} by direct integer arithmetic."""
    return {a for a in A.elements() if all((pow(t, k, m) * c - c) % m == 0 for c, m in zip(a, A.moduli))}


def v_p(n, p):
    if n == 0:
        return math.inf
    j = 0
    while n % p == 0:
        n //= p
        j += 1
    return j


def coset_index(G, x, elements_of_base):
    """
    |C_G(x) : <x>| for x = (k, d) with k != 0 in an infinite-top extension:
    every coset of <x> in C_G(x) has exactly one member g^m e with 0 <= m < |k|.
    """
    k = x[0]
    count = 0
    for m in range(abs(k)):
        for e in elements_of_base:
            y = (m, e)
            if G.mul(x, y) == G.mul(y, x):
                count += 1
    return count


def window_commuting(G, x, radius, elements_of_base):
    return {
        (m, e)
        for m in range(-radius, radius + 1)
        for e in elements_of_base
        if G.mul(x, (m, e)) == G.mul((m, e), x)
    }
