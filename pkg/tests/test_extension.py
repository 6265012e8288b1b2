import itertools
import random

import pytest

from fcigroups.abelian import QUASI, FgAbelian, FinAbelian, QuasiSpec
from fcigroups.dedekind import DedekindGroup, DedekindSpec
from fcigroups.errors import InfiniteBase, InvalidCocycle, SpecInvalid
from fcigroups.extension import (
    CyclicExtension,
    center,
    centralizer,
    centralizer_index,
    centralizer_order,
    fg_abelian_extension,
    fg_centralizer,
    format_element,
    in_cyclic,
    is_cyclic_normal,
    is_metabelian,
    torsion_subgroup,
)
from fcigroups.generic import INFINITE
from fcigroups.padic import make_unit
from fcigroups.pauto import identity_aut, inversion, power_aut
from fcigroups.verify import classify_thm32, classify_thm36

from oracles import brute_centralizer, coset_index, cyclic, window_commuting


def cyclic_base(n):
    return DedekindGroup.from_abelian(FinAbelian.from_moduli(n))


def semidirect(n, t, top=None):
    """<g> x| Z/p^e (n = p^e) with g acting as a -> a^t."""
    B = cyclic_base(n)
    (p,) = B.primes()
    return CyclicExtension(B, power_aut(B, {p: t}), top)


def dihedral(n):
    B = cyclic_base(n)
    return CyclicExtension(B, inversion(B), 2)


def affine(G, t, n, x):
    """(k, c) acting on Z/n as v -> t^k v + c (only for a single cyclic coordinate)."""
    k, (_, (c,)) = x
    return tuple((pow(t, k, n) * v + c) % n for v in range(n)) if k >= 0 else \
        tuple((pow(pow(t, -1, n), -k, n) * v + c) % n for v in range(n))


def then(f, g):
    return tuple(g[v] for v in f)


def test_multiplication_examples():
    G = semidirect(5, -1)
    assert G.mul((1, (0, (2,))), (1, (0, (3,)))) == (2, (0, (1,)))
    D8 = dihedral(4)
    x = (1, (0, (1,)))
    assert D8.mul(x, x) == D8.identity
    assert D8.order_of(x) == 2
    assert D8.mul(D8.identity, x) == x == D8.mul(x, D8.identity)


@pytest.mark.parametrize("n,t,top", [(9, 4, None), (8, 3, None), (8, 5, 2), (7, 2, 3), (27, 10, None), (4, -1, 2)])
def test_multiplication_matches_affine_maps(n, t, top):
    G = semidirect(n, t, top)
    ks = range(-3, 4) if top is None else range(top)
    elems = [(k, (0, (c,))) for k in ks for c in range(n)]
    rng = random.Random(n * 31 + t)
    for x, y in (rng.sample(elems, 2) for _ in range(400)):
        assert affine(G, t, n, G.mul(x, y)) == then(affine(G, t, n, x), affine(G, t, n, y))


FINITE = [
    ("D8", dihedral(4)),
    ("D12", dihedral(6)),
    ("Q16", CyclicExtension(cyclic_base(8), inversion(cyclic_base(8)), 2, (0, (4,)))),
    ("Z9:C3", semidirect(9, 4, 3)),
    ("thm32-3", classify_thm32(QuasiSpec(((2, QUASI),)), None, FinAbelian.from_moduli(3)).spec.materialize(3)),
    ("thm32-d0", classify_thm32(QuasiSpec(((2, QUASI), (2, 1))), (1, 1)).spec.materialize(3)),
    ("Q8xZ3:C2", CyclicExtension(DedekindGroup.hamiltonian_group(0, FinAbelian.from_moduli(3)),
                                 power_aut(DedekindGroup.hamiltonian_group(0, FinAbelian.from_moduli(3)), q0="i"), 2)),
    ("Z3^inf-quotient", classify_thm36(DedekindSpec(QuasiSpec(((3, QUASI),))), {3: make_unit(3, 8, 4)})
        .spec.materialize(2).finite_quotient()),
]


@pytest.mark.parametrize("name,G", FINITE, ids=[n for n, _ in FINITE])
def test_group_axioms(name, G):
    elems = list(G.elements())
    assert len(elems) == G.size
    for x in elems:
        assert G.contains(x)
        assert G.mul(x, G.inv(x)) == G.identity == G.mul(G.inv(x), x)
        assert G.mul(G.identity, x) == x
    triples = itertools.product(elems, repeat=3) if len(elems) <= 24 else \
        (random.Random(1).sample(elems, 3) for _ in range(3000))
    for x, y, z in triples:
        assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))


@pytest.mark.parametrize("name,G", FINITE, ids=[n for n, _ in FINITE])
def test_centralizer_matches_brute_force(name, G):
    elems = list(G.elements())
    for x in elems:
        C = centralizer(G, x)
        brute = brute_centralizer(G, x, elems)
        assert set(C.elements()) == brute
        assert C.size == len(brute)
        assert all(y in C for y in brute)
        assert centralizer_index(G, x) == len(brute) // len(cyclic(G, x))


@pytest.mark.parametrize("name,G", FINITE, ids=[n for n, _ in FINITE])
def test_order_and_normality(name, G):
    elems = list(G.elements())
    for x in elems:
        powers = cyclic(G, x)
        assert G.order_of(x) == len(powers)
        H = set(powers)
        normal = all(G.mul(G.mul(G.inv(g), x), g) in H for g in elems)
        assert is_cyclic_normal(G, x) == normal


def test_d8_examples():
    G = dihedral(4)
    g = G.g
    C = centralizer(G, g)
    assert set(C.elements()) == {(0, (0, (0,))), (0, (0, (2,))), (1, (0, (0,))), (1, (0, (2,)))}
    a = (0, (0, (1,)))
    assert is_cyclic_normal(G, a)
    assert not is_cyclic_normal(G, g)
    assert is_metabelian(G)
    assert center(G) == {(0, (0, (0,))), (0, (0, (2,)))}
    assert format_element(G, g) == "g^1*(0)"


def test_central_element_has_whole_group_as_centralizer():
    G = dihedral(4)
    z = (0, (0, (2,)))
    assert set(centralizer(G, z).elements()) == set(G.elements())


def test_infinite_top_examples():
    G = semidirect(9, 4)
    C = centralizer(G, G.g)
    assert C.torsion_part == {(0, (0,)), (0, (3,)), (0, (6,))}
    assert C.m0 == 1
    assert centralizer_index(G, G.g) == 3
    assert centralizer_index(G, G.element(2)) == 6
    assert torsion_subgroup(G) == {(0, d) for d in G.base.elements()}
    G1 = semidirect(9, 1)
    assert centralizer_index(G1, G1.g) == 9


INFINITE_TOPS = [
    semidirect(9, 4), semidirect(27, 4), semidirect(27, 10), semidirect(8, 3), semidirect(16, 5),
    semidirect(8, -1), semidirect(25, 6), semidirect(5, 2),
    CyclicExtension(DedekindGroup.q8(), power_aut(DedekindGroup.q8(), q0="j")),
    CyclicExtension(DedekindGroup.hamiltonian_group(1, FinAbelian.from_moduli(3)),
                    power_aut(DedekindGroup.hamiltonian_group(1, FinAbelian.from_moduli(3)), {3: 2}, q0="i")),
]


@pytest.mark.parametrize("G", INFINITE_TOPS, ids=str)
def test_centralizer_index_matches_coset_count(G):
    base = list(G.base.elements())
    o = G.action.order()
    rng = random.Random(7)
    for k in (1, 2, 3, -2, o, 2 * o):
        for d in rng.sample(base, min(6, len(base))):
            x = (k, d)
            assert centralizer_index(G, x) == coset_index(G, x, base)


@pytest.mark.parametrize("G", INFINITE_TOPS[:6], ids=str)
def test_centralizer_description_matches_window(G):
    base = list(G.base.elements())
    o = G.action.order()
    radius = 2 * o
    for x in [(1, base[1]), (2, base[-1]), (o, base[0])]:
        C = centralizer(G, x)
        brute = window_commuting(G, x, radius, base)
        described = {y for y in ((m, e) for m in range(-radius, radius + 1) for e in base) if y in C}
        assert described == brute


def test_torsion_is_the_base_on_a_window():
    G = semidirect(9, 4)
    finite = {x for x in G.window(3) if G.order_of(x) != INFINITE}
    assert finite == torsion_subgroup(G)
    for x in finite:
        assert all(G.mul(G.mul(G.inv(s), x), s) in finite for s in (G.g, G.inv(G.g)))


def test_normality_on_infinite_top():
    G = semidirect(9, 4)
    assert is_cyclic_normal(G, (0, (0, (1,))))
    assert not is_cyclic_normal(G, G.g)
    assert in_cyclic(G, G.element(3), G.g)
    assert not in_cyclic(G, G.element(3), G.element(2))


def test_thm32_instance_inverts_the_base():
    G = classify_thm32(QuasiSpec(((2, QUASI), (2, 1))), None, FinAbelian.from_moduli(9)).spec.materialize(4)
    g = G.g
    for d in G.base.elements():
        a = (0, d)
        conj = G.mul(G.mul(G.inv(g), a), g)
        two_part = tuple(-c % m for c, m in zip(d[1][:2], G.base.abelian.moduli[:2]))
        assert conj == (0, (0, two_part + d[1][2:]))


def test_cocycle_validation():
    B = cyclic_base(4)
    with pytest.raises(InvalidCocycle):
        CyclicExtension(B, inversion(B), 2, (0, (1,)))
    with pytest.raises(InvalidCocycle):
        CyclicExtension(B, inversion(B), 3)
    with pytest.raises(InvalidCocycle):
        fg_abelian_extension(FgAbelian(1, FinAbelian.from_moduli(4)), (0, 1))
    with pytest.raises(SpecInvalid):
        CyclicExtension(B, inversion(B), None, (0, (2,)))


def test_trivial_top_collapses_to_base():
    B = cyclic_base(6)
    G = CyclicExtension(B, identity_aut(B), 1)
    assert G.size == 6
    assert G.generators() == tuple((0, b) for b in B.generators())


def test_thm43_examples():
    G = fg_abelian_extension(FgAbelian(2, FinAbelian.from_moduli(4)))
    assert centralizer_order(G, G.g) == 4
    assert sorted(fg_centralizer(G, G.g)) == [(0, (0, (0, 0, 0))), (0, (0, (0, 0, 2))),
                                               (1, (0, (0, 0, 0))), (1, (0, (0, 0, 2)))]
    Dinf = fg_abelian_extension(FgAbelian(1))
    assert centralizer_order(Dinf, Dinf.g) == 2
    assert [centralizer_index(Dinf, (0, (0, (n,)))) for n in range(1, 8)] == list(range(1, 8))
    assert centralizer_order(Dinf, (0, (0, (3,)))) == INFINITE
    with pytest.raises(InfiniteBase):
        centralizer(Dinf, Dinf.g)


def test_thm43_centralizer_matches_window():
    G = fg_abelian_extension(FgAbelian(1, FinAbelian.from_moduli(2, 2)))
    window = list(G.window(4))
    for x in [G.g, (1, (0, (3, 1, 0))), (1, (0, (-2, 1, 1)))]:
        C = set(fg_centralizer(G, x))
        brute = {y for y in window if G.mul(x, y) == G.mul(y, x)}
        assert C == brute


@pytest.mark.parametrize("name,G", FINITE, ids=[n for n, _ in FINITE])
def test_metabelian(name, G):
    assert is_metabelian(G)
