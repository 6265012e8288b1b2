"""
FCI/BCI verdicts and the theorem-shaped group families.

* :func:`check_fci_finite` inventories the non-normal cyclic subgroups of a
  finite group and their centralizer indices.
* :func:`classify_thm32`, :func:`classify_thm36`, :func:`classify_thm43`
  test the structural conditions of the three families and hand back a spec
  object that materializes concrete groups.
* :func:`ladder` materializes an infinite family at growing levels and
  decides whether the largest centralizer index stabilizes or diverges.
* :func:`check_bci_bound_thm43` verifies the bound ``|C_G(x)| <= 2^(r+1)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .abelian import QUASI, FgAbelian, FinAbelian, QuasiSpec, rank_p
from .dedekind import DedekindGroup, DedekindSpec
from .errors import SpecInvalid
from .extension import (
    CyclicExtension,
    centralizer_index,
    centralizer_order,
    fg_abelian_extension,
    is_cyclic_normal,
)
from .generic import DEFAULT_CAP, INFINITE, conjugacy_class, cyclic_powers, is_normal_cyclic_finite, require_finite
from .padic import PadicUnit, has_infinite_order_heuristic, make_unit
from .pauto import PowerAut, power_aut


class Status(enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class Condition:
    status: Status
    reason: str = ""

    def __bool__(self):
        return self.status is Status.PASS


def _overall(conds: Iterable[Condition]) -> Status:
    statuses = [c.status for c in conds]
    if Status.FAIL in statuses:
        return Status.FAIL
    if Status.UNDECIDABLE in statuses:
        return Status.UNDECIDABLE
    return Status.PASS


# finite groups


@dataclass(frozen=True)
class CyclicRecord:
    element: tuple
    order: int
    is_normal: bool
    index: int | None  # None for normal subgroups


@dataclass
class FciReport:
    records: list
    max_index: int
    bci_bound: int | None
    dedekind: bool

    @property
    def non_normal(self) -> list:
        return [r for r in self.records if not r.is_normal]


def check_fci_finite(G, cap: int = DEFAULT_CAP) -> FciReport:
    """
    One record per cyclic subgroup (generator = least element of the
    subgroup's generators).  Centralizer orders come from the orbit-stabilizer
    relation ``|C_G(x)| = |G| / |x^G|``.

    A Dedekind group has no non-normal cyclic subgroups; its max_index and
    bci_bound are reported as 0.
    """
    n = require_finite(G, cap)
    seen = set()
    records = []
    for x in sorted(G.elements()):
        if x in seen:
            continue
        powers = cyclic_powers(G, x)
        o = len(powers)
        seen.update(powers[j] for j in range(1, o) if math.gcd(j, o) == 1)
        normal, _ = is_normal_cyclic_finite(G, x, powers)
        index = None
        if not normal:
            index = n // len(conjugacy_class(G, x)) // o
        records.append(CyclicRecord(x, o, normal, index))
    indices = [r.index for r in records if not r.is_normal]
    max_index = max(indices, default=0)
    return FciReport(records, max_index, max_index, not indices)


# thm32 family: P x Q with P = <g, A>, A a 2-group, a^g = a^-1, g^2 in A


@dataclass(frozen=True)
class Thm32Spec:
    """
    ``a_spec`` is the 2-group A, ``d0`` the cocycle g^2 given in spec
    coordinates at level 1, ``q`` the odd abelian factor.
    """

    a_spec: QuasiSpec
    d0: tuple
    q: FinAbelian

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> CyclicExtension:
        if 2 in self.q.primes or any(p != 2 for p in self.a_spec.primes):
            raise SpecInvalid("cannot materialize: A must be a 2-group and Q a 2'-group")
        A = self.a_spec.materialize(level, cap)
        base = DedekindGroup.from_abelian(A.direct_sum(self.q))
        prec = max((e for _, e in A.components), default=1)
        exps = {2: make_unit(2, prec, -1)} if A.components else {}
        phi = power_aut(base, exps)
        d0 = self.a_spec.embed_to(self.a_spec.coords_at(self.d0, 1), 1, level)
        d0 += (0,) * len(self.q.components)
        return CyclicExtension(base, phi, 2, (0, d0), cap=cap)

    def element_at(self, probe: Probe, level: int) -> tuple:
        """Probe coordinates are A in spec order, then Q."""
        r = len(self.a_spec.components)
        a = self.a_spec.coords_at(probe.coords[:r], probe.level)
        a = self.a_spec.embed_to(a, probe.level, level)
        G = self.materialize(level)
        return G.element(probe.k, (0, a + tuple(probe.coords[r:])))

    def probe(self, x, level: int) -> Probe:
        r = len(self.a_spec.components)
        k, (_, coords) = x
        a = self.a_spec.spec_coords(coords[:r], level)
        return Probe(k, a + tuple(coords[r:]), 0, level)


@dataclass(frozen=True)
class Thm32Verdict:
    status: Status
    reasons: tuple
    spec: Thm32Spec

    def __bool__(self):
        return self.status is Status.PASS


def classify_thm32(a_spec: QuasiSpec, d0: Sequence[int] | None = None, q: FinAbelian | None = None) -> Thm32Verdict:
    """Check that (A, d0, Q) has the shape P x Q of the periodic family."""
    q = q or FinAbelian()
    d0 = tuple(d0) if d0 is not None else (0,) * len(a_spec.components)
    if len(d0) != len(a_spec.components):
        raise SpecInvalid(f"d0 has {len(d0)} coordinates, A has {len(a_spec.components)} components")
    reasons = []
    if any(p != 2 for p in a_spec.primes):
        reasons.append("(i) A is not a 2-group")
    if not a_spec.is_infinite():
        reasons.append("(i) A is not infinite abelian (no quasicyclic component)")
    if 2 in q.primes:
        reasons.append("(ii) Q is not a 2'-group")
    if all(p == 2 for p in a_spec.primes):
        x = a_spec.coords_at(d0, 1)
        if any(2 * c % m for c, m in zip(x, a_spec.materialize(1).moduli)):
            reasons.append("(i) g^2 = d0 is not inverted by g (2 d0 != 0)")
    status = Status.FAIL if reasons else Status.PASS
    return Thm32Verdict(status, tuple(reasons), Thm32Spec(a_spec, d0, q))


# thm36 family: <g> x| D, g of infinite order acting by a power automorphism


@dataclass(frozen=True)
class Thm36Spec:
    base: DedekindSpec
    exponents: tuple = ()  # ((p, PadicUnit), ...)
    q0: int = 0

    def exponent(self, p: int) -> PadicUnit | None:
        return dict(self.exponents).get(p)

    def materialize(self, level: int, cap: int = DEFAULT_CAP) -> CyclicExtension:
        D = self.base.materialize(level, cap)
        exps = {}
        for p in D.primes():
            t = self.exponent(p)
            if t is None:
                t = make_unit(p, max(1, self.base.exponent_at(p, level)), 1)
            exps[p] = t
        phi = power_aut(D, exps, q0=self.q0)
        phi.order()  # fail early on insufficient precision
        return CyclicExtension(D, phi, None, cap=cap)

    def element_at(self, probe: Probe, level: int) -> tuple:
        d = self.base.element_at(probe.q, probe.coords, probe.level)
        return (probe.k, self.base.embed_to(d, probe.level, level))

    def probe(self, x, level: int) -> Probe:
        k, (q, coords) = x
        return Probe(k, self.base.abelian.spec_coords(coords, level), q, level)


@dataclass(frozen=True)
class Thm36Verdict:
    cond_i: Condition
    cond_ii: Condition
    cond_iii: Condition
    spec: Thm36Spec

    @property
    def overall(self) -> Status:
        return _overall((self.cond_i, self.cond_ii, self.cond_iii))

    @property
    def reasons(self) -> tuple:
        return tuple(c.reason for c in (self.cond_i, self.cond_ii, self.cond_iii) if c.status is not Status.PASS)

    def __bool__(self):
        return self.overall is Status.PASS


def classify_thm36(base: DedekindSpec, exponents: dict | None = None, q0: int = 0) -> Thm36Verdict:
    """
    Conditions on (D, phi) for <g> x| D (g of infinite order):

    (i)   D_2 non-abelian => phi_2 is the identity;
    (ii)  p odd => t_p = 1 mod p, and t_p != 1 when D_p is infinite;
    (iii) D_2 abelian and infinite => t_2 != 1, -1.

    Units are compared by residue at their stated precision; a unit whose
    residue class leaves the infinite-order question open is undecidable.
    """
    exponents = dict(exponents or {})
    for p, t in exponents.items():
        if not isinstance(t, PadicUnit) or t.prime != p:
            raise SpecInvalid(f"exponent for {p} must be a unit of Z_{p}")
    spec = Thm36Spec(base, tuple(sorted(exponents.items())), q0 - q0 % 2)
    primes = sorted(base.primes)

    cond_i = Condition(Status.PASS)
    if base.hamiltonian and spec.q0 != 0:
        cond_i = Condition(Status.FAIL, "(i) phi_2 is not the identity on the non-abelian D_2")

    def unit(p):
        return exponents.get(p) or make_unit(p, 1, 1)

    cond_ii = Condition(Status.PASS)
    for p in (p for p in primes if p > 2):
        t = unit(p)
        if t.residue % p != 1:
            cond_ii = Condition(Status.FAIL, f"(ii) t_{p} = {t.signed()} is not 1 mod {p}")
            break
        if base.is_infinite(p):
            verdict = has_infinite_order_heuristic(t)
            if verdict is False:
                cond_ii = Condition(Status.FAIL, f"(ii) t_{p} = 1 with D_{p} infinite")
                break
            if verdict is None:
                cond_ii = Condition(Status.UNDECIDABLE, f"(ii) t_{p} order undecided at precision {t.precision}")

    cond_iii = Condition(Status.PASS)
    if 2 in primes and base.is_abelian_at(2) and base.is_infinite(2):
        t = unit(2)
        if t.is_one():
            cond_iii = Condition(Status.FAIL, "(iii) t_2 = 1")
        elif t.is_minus_one():
            cond_iii = Condition(Status.FAIL, "(iii) t_2 = -1")
        elif has_infinite_order_heuristic(t) is None:
            cond_iii = Condition(Status.UNDECIDABLE, f"(iii) t_2 undecided at precision {t.precision}")
    return Thm36Verdict(cond_i, cond_ii, cond_iii, spec)


# thm43 family: <g, A>, A non-periodic f.g. abelian, a^g = a^-1


@dataclass(frozen=True)
class Thm43Spec:
    A: FgAbelian
    d0: tuple | None = None

    def materialize(self, level: int | None = None, cap: int = DEFAULT_CAP) -> CyclicExtension:
        return fg_abelian_extension(self.A, self.d0, cap=cap)


@dataclass(frozen=True)
class Thm43Verdict:
    status: Status
    reasons: tuple
    spec: Thm43Spec

    def __bool__(self):
        return self.status is Status.PASS


def classify_thm43(A: FgAbelian, d0: Sequence[int] | None = None) -> Thm43Verdict:
    reasons = []
    if A.free_rank == 0:
        reasons.append("(iii) A is periodic")
    if d0 is not None:
        x = A.element(*d0)
        if any(A.add(x, x)):
            reasons.append("(iii) g^2 = d0 is not inverted by g (2 d0 != 0)")
    status = Status.FAIL if reasons else Status.PASS
    return Thm43Verdict(status, tuple(reasons), Thm43Spec(A, tuple(d0) if d0 is not None else None))


@dataclass
class BciBoundReport:
    max_order: int
    bound: int
    two_rank: int
    sampled: int
    non_normal: int
    infinite_order_normal: bool
    witness: tuple | None

    @property
    def within_bound(self) -> bool:
        return self.max_order <= self.bound

    @property
    def achieved(self) -> bool:
        return self.max_order == self.bound


def check_bci_bound_thm43(G: CyclicExtension, window: int = 2) -> BciBoundReport:
    """
    Max |C_G(x)| over the sampled non-normal cyclic subgroups, against
    2^(r+1) with r the 2-rank of A.  Also checks that every sampled element
    of infinite order generates a normal subgroup.
    """
    A = G.base.abelian
    r = rank_p(A, 2)
    best, witness = 0, None
    sampled = non_normal = 0
    inf_normal = True
    for x in G.window(window):
        sampled += 1
        normal = is_cyclic_normal(G, x)
        if G.order_of(x) == INFINITE and not normal:
            inf_normal = False
        if normal:
            continue
        non_normal += 1
        c = centralizer_order(G, x)
        if c > best:
            best, witness = c, x
    return BciBoundReport(best, 2 ** (r + 1), r, sampled, non_normal, inf_normal, witness)


# truncation ladders


@dataclass(frozen=True)
class Probe:
    """
    g^k d with d given at a reference level (``coords`` in spec component
    order); it is carried up the directed system to each ladder level.
    """

    k: int
    coords: tuple = ()
    q: int | str = 0
    level: int = 1


class LadderVerdict(enum.Enum):
    STABILIZED = "stabilized"
    DIVERGING = "diverging"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LadderLevel:
    level: int
    max_index: int | float
    probed: int
    witness: tuple | None


@dataclass
class LadderResult:
    levels: list
    verdict: LadderVerdict
    stable_from: int | None = None
    value: int | float | None = None

    @property
    def values(self) -> list:
        return [lv.max_index for lv in self.levels]


def ladder_verdict(values: Sequence) -> tuple:
    """
    Stabilized: the top two values agree (reported from the start of the final
    constant run).  Diverging: the top three values strictly increase.
    """
    if len(values) >= 2 and values[-1] == values[-2]:
        i = len(values) - 1
        while i > 0 and values[i - 1] == values[-1]:
            i -= 1
        return LadderVerdict.STABILIZED, i
    if len(values) >= 3 and values[-3] < values[-2] < values[-1]:
        return LadderVerdict.DIVERGING, None
    return LadderVerdict.INCONCLUSIVE, None


def sample_indices(G: CyclicExtension, window: int = 3) -> tuple:
    """Max centralizer index over non-normal <x>, x = g^k d with |k| <= window."""
    best, witness, probed = 0, None, 0
    seen = set()
    for x in G.window(window):
        if x in seen:
            continue
        if x[0] == 0:
            seen.update(cyclic_powers(G, x))
        elif G.inv(x) < x:
            continue
        if is_cyclic_normal(G, x):
            continue
        probed += 1
        idx = centralizer_index(G, x)
        if idx > best:
            best, witness = idx, x
    return best, witness, probed


def ladder(spec, levels: Iterable[int], window: int = 3, probes: Sequence[Probe] | None = None,
           cap: int = DEFAULT_CAP) -> LadderResult:
    """
    Materialize ``spec`` at each level and record the largest centralizer
    index.  With ``probes`` only those elements are measured (normal or not);
    otherwise every non-normal cyclic subgroup in the window is.  Finite
    materializations are measured exhaustively.
    """
    rows = []
    for n in levels:
        G = spec.materialize(n, cap)
        if probes:
            xs = [spec.element_at(p, n) for p in probes]
            vals = [(centralizer_index(G, x), x) for x in xs]
            best, witness = max(vals, key=lambda v: v[0])
            rows.append(LadderLevel(n, best, len(xs), witness))
        elif G.is_finite:
            rep = check_fci_finite(G, cap)
            rows.append(LadderLevel(n, rep.max_index, len(rep.non_normal), None))
        else:
            best, witness, probed = sample_indices(G, window)
            rows.append(LadderLevel(n, best, probed, witness))
    verdict, i = ladder_verdict([r.max_index for r in rows])
    if verdict is LadderVerdict.STABILIZED:
        return LadderResult(rows, verdict, rows[i].level, rows[i].max_index)
    return LadderResult(rows, verdict)
