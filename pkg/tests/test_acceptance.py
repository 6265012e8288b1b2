"""
Acceptance criteria 1-9.  Each test carries a ``criterion`` marker; the
conftest prints one PASS/FAIL line per criterion at the end of the run.
Budgets are wall-clock limits for the whole criterion.
"""

import math
import random
import time
from contextlib import contextmanager

import pytest
from sympy import primerange, totient
from sympy.utilities.iterables import partitions

from fcigroups.abelian import QUASI, FgAbelian, FinAbelian, QuasiSpec
from fcigroups.dedekind import DedekindGroup, DedekindSpec, is_dedekind
from fcigroups.extension import CyclicExtension, centralizer, centralizer_index, is_metabelian
from fcigroups.padic import make_unit, valuation_pow_minus_one
from fcigroups.pauto import enumerate_paut, fixed_points, inversion
from fcigroups.verify import (
    LadderVerdict,
    Probe,
    Status,
    check_bci_bound_thm43,
    check_fci_finite,
    classify_thm32,
    classify_thm36,
    classify_thm43,
    ladder,
)

from oracles import brute_centralizer, cyclic, fixed_points as brute_fixed_points
from test_abelian import small_abelian_groups


@contextmanager
def budget(seconds):
    start = time.perf_counter()
    yield
    elapsed = time.perf_counter() - start
    assert elapsed < seconds, f"took {elapsed:.2f} s, budget {seconds} s"


def p_groups_upto(p, bound):
    """Every abelian p-group of order <= bound, from partitions of the exponent."""
    out = []
    e = 1
    while p**e <= bound:
        for part in partitions(e):
            comps = sorted((p, k) for k, mult in part.items() for _ in range(mult))
            out.append(FinAbelian(tuple(comps)))
        e += 1
    return out


def thm32_instances():
    for a in (((2, QUASI),), ((2, QUASI), (2, 1))):
        for q in (1, 3, 9):
            spec = classify_thm32(QuasiSpec(a), None, FinAbelian.from_moduli(q) if q > 1 else None).spec
            yield f"{a}x{q}", spec


def thm36(components, t, hamiltonian=False, precision=32):
    D = DedekindSpec(QuasiSpec(components), hamiltonian)
    return classify_thm36(D, {p: make_unit(p, precision, v) for p, v in t.items()})


THM36_CASES = {
    "a": (((3, QUASI),), {3: 4}, False),
    "b": (((3, QUASI),), {3: 1}, False),
    "c": (((2, QUASI),), {2: -1}, False),
    "d": (((2, 1),), {}, True),
}
LADDER_LEVELS = range(2, 7)


@pytest.mark.criterion(1, "PAut(Q8) has 4 elements, all inner")
def test_criterion_1_paut_q8():
    with budget(1):
        P = enumerate_paut(DedekindGroup.q8())
        assert len(P) == 4
        # q0 records the inner part: conjugation by 1, i, j, k
        assert sorted(phi.q0 for phi in P) == [0, 2, 4, 6]
        H = DedekindGroup.q8()
        for phi in P:
            for x in H.elements():
                assert phi.apply(x) == H.mul(H.mul(H.inv((phi.q0, ())), x), (phi.q0, ()))


def _unit_generators(n):
    units = [u for u in range(1, n) if math.gcd(u, n) == 1]
    gens, span = [], {1 % n}
    for u in units:
        if u not in span:
            gens.append(u)
            frontier = set(span)
            while frontier:
                new = {a * b % n for a in frontier for b in gens} - span
                span |= new
                frontier = new
    return gens


@pytest.mark.criterion(2, "PAut of abelian p-groups of order <= 3^6 is (Z/exp A)^x")
def test_criterion_2_paut_p_groups():
    with budget(10):
        groups = [A for p in primerange(2, 3**6 + 1) for A in p_groups_upto(p, 3**6)]
        assert len(groups) == 277
        for A in groups:
            (p,) = A.primes
            n = A.exponent
            P = enumerate_paut(DedekindGroup.from_abelian(A))
            assert len(P) == totient(n)
            expmap = {phi.exponent(p).residue % n: phi for phi in P}
            # injective and onto the units
            assert len(expmap) == len(P)
            assert set(expmap) == {u for u in range(1, n) if u % p}
            # multiplicative on a generating set of the units, hence everywhere
            for s in _unit_generators(n):
                for u, phi in expmap.items():
                    assert phi.compose(expmap[s]).exponent(p).residue % n == u * s % n


@pytest.mark.criterion(3, "fixed points of phi^k equal brute force on 200+ random 2-groups")
def test_criterion_3_fixed_points():
    with budget(30):
        rng = random.Random(20240613)
        groups = p_groups_upto(2, 2**12)
        checked = 0
        while checked < 240:
            A = rng.choice(groups)
            N = max(e for _, e in A.components)
            t = rng.randrange(1, 2**N, 2)
            k = rng.randint(1, 16)
            unit = make_unit(2, N, t)
            W = fixed_points(unit, A, k)
            assert set(W.elements()) == brute_fixed_points(A, t, k)
            j = valuation_pow_minus_one(unit, k)
            assert W.steps == A.omega(N if j is None else j).steps
            checked += 1


@pytest.mark.criterion(4, "extensions of quasicyclic 2-groups stabilize across levels 3..7")
def test_criterion_4_stabilization():
    with budget(60):
        for name, spec in thm32_instances():
            assert classify_thm32(spec.a_spec, spec.d0, spec.q).status is Status.PASS
            bounds = []
            for n in range(3, 8):
                G = spec.materialize(n)
                assert not is_dedekind(G), (name, n)
                assert is_metabelian(G), (name, n)
                bounds.append(check_fci_finite(G).bci_bound)
            assert len(set(bounds)) == 1, (name, bounds)


@pytest.mark.criterion(5, "dichotomy for power-automorphism extensions")
def test_criterion_5_dichotomy():
    with budget(60):
        a = thm36(*THM36_CASES["a"])
        assert a.overall is Status.PASS
        r = ladder(a.spec, LADDER_LEVELS, probes=[Probe(1)])
        assert r.verdict is LadderVerdict.STABILIZED and r.value == 3

        b = thm36(*THM36_CASES["b"])
        assert b.overall is Status.FAIL and b.cond_ii.status is Status.FAIL
        assert b.cond_ii.reason.startswith("(ii)")
        r = ladder(b.spec, LADDER_LEVELS, probes=[Probe(1)])
        assert r.verdict is LadderVerdict.DIVERGING
        assert r.values == [3**n for n in LADDER_LEVELS]

        c = thm36(*THM36_CASES["c"])
        assert c.overall is Status.FAIL and c.cond_iii.status is Status.FAIL
        assert c.cond_iii.reason == "(iii) t_2 = -1"
        # x = g^2 d with d of order 4
        r = ladder(c.spec, LADDER_LEVELS, probes=[Probe(2, (1,), level=2)])
        assert r.verdict is LadderVerdict.DIVERGING

        d = thm36(*THM36_CASES["d"])
        assert d.overall is Status.PASS


THM43_CASES = [
    (1, ()),
    (2, ()),
    (2, (4,)),
    (1, (2, 2)),
    (1, (8, 5)),
]


@pytest.mark.criterion(6, "non-normal centralizers in <g, A> reach 2^(r+1)")
def test_criterion_6_bound():
    with budget(30):
        for free, torsion in THM43_CASES:
            A = FgAbelian(free, FinAbelian.from_moduli(*torsion) if torsion else FinAbelian())
            r2 = sum(1 for m in torsion if m % 2 == 0)
            G = classify_thm43(A).spec.materialize()
            rep = check_bci_bound_thm43(G)
            assert rep.bound == 2 ** (r2 + 1)
            assert rep.max_order == 2 ** (r2 + 1), (free, torsion, rep.max_order)
            assert rep.infinite_order_normal


@pytest.mark.criterion(7, "infinite dihedral: |C(a^n) : <a^n>| = n")
def test_criterion_7_infinite_dihedral():
    with budget(5):
        B = DedekindGroup.from_abelian(FgAbelian(1))
        G = CyclicExtension(B, inversion(B), 2)
        assert [centralizer_index(G, G.element(0, (0, (n,)))) for n in range(1, 51)] == list(range(1, 51))


def finite_instances(limit=512):
    for name, spec in thm32_instances():
        for n in range(3, 8):
            G = spec.materialize(n)
            if G.size <= limit:
                yield f"{name}@{n}", G
    for key, case in THM36_CASES.items():
        spec = thm36(*case).spec
        for n in LADDER_LEVELS:
            Q = spec.materialize(n).finite_quotient()
            if Q.size <= limit:
                yield f"36{key}@{n}", Q


@pytest.mark.criterion(8, "closed-form centralizers equal brute force on finite instances")
def test_criterion_8_centralizer_oracle():
    with budget(120):
        count = 0
        for name, G in finite_instances():
            elems = list(G.elements())
            for x in elems:
                C = brute_centralizer(G, x, elems)
                desc = centralizer(G, x)
                assert set(desc.elements()) == C, (name, x)
                assert centralizer_index(G, x) == len(C) // len(cyclic(G, x)), (name, x)
            count += 1
        assert count >= 20


@pytest.mark.criterion(9, "Dedekind predicate on Hamiltonian, abelian and dihedral groups")
def test_criterion_9_dedekind_predicate():
    with budget(30):
        yes = [
            DedekindGroup.q8(),
            DedekindGroup.hamiltonian_group(0, FinAbelian.from_moduli(3)),
            DedekindGroup.hamiltonian_group(1, FinAbelian.from_moduli(9)),
        ]
        yes += [DedekindGroup.from_abelian(A) for A in small_abelian_groups(64)]
        for G in yes:
            assert is_dedekind(G), G

        def dihedral(n):
            C = DedekindGroup.from_abelian(FinAbelian.from_moduli(n))
            return CyclicExtension(C, inversion(C), 2)

        no = [dihedral(4), dihedral(6)]
        no += [spec.materialize(n) for _, spec in thm32_instances() for n in range(3, 8)]
        for G in no:
            assert not is_dedekind(G), G
