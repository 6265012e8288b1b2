"""
Power automorphisms of Dedekind groups.

On a periodic base a power automorphism is given by one p-adic unit ``t_p``
per prime (``a -> a^t_p`` on the Sylow p-subgroup), plus an inner part
``q0`` acting by conjugation on the Q8 factor of a Hamiltonian base.  On a
non-periodic abelian base the only power automorphisms are the identity and
the inversion, so a global ``sign`` is stored instead.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from .abelian import AbSubgroup, FinAbelian
from .dedekind import Q8_INV, Q8_MUL, DedekindGroup, q8_conj
from .errors import Inconsistent, IncompatibleBase, NotAPGroup, PrecisionTooLow
from .generic import DEFAULT_CAP, cyclic_powers, require_finite
from .padic import PadicUnit, make_unit, valuation_pow_minus_one


def _canonical_q0(q0: int) -> int:
    # conjugation by q and -q agree
    return q0 - q0 % 2


def _q8_pow(q: int, k: int) -> int:
    r = 0
    base = q if k >= 0 else Q8_INV[q]
    for _ in range(abs(k) % 4):
        r = Q8_MUL[r][base]
    return r


@dataclass(frozen=True)
class PowerAut:
    base: DedekindGroup
    exponents: tuple = ()  # ((p, PadicUnit), ...) sorted by p
    q0: int = 0
    sign: int = 1

    def __str__(self):
        parts = [f"t_{p}={t.signed()}" for p, t in self.exponents]
        if self.q0:
            parts.append(f"q0={['1', 'i', 'j', 'k'][self.q0 // 2]}")
        if not self.base.is_periodic:
            parts.append("inversion" if self.sign == -1 else "identity")
        return "phi[" + ", ".join(parts) + "]"

    def exponent(self, p: int) -> PadicUnit:
        for q, t in self.exponents:
            if q == p:
                return t
        raise KeyError(p)

    @functools.cache
    def _multipliers(self, k: int) -> tuple:
        A = self.base.abelian
        if not self.base.is_periodic:
            return (self.sign**k,) * len(A.moduli)
        mults = []
        units = dict(self.exponents)
        for p, e in A.components:
            t = units[p]
            if t.precision < e:
                raise PrecisionTooLow(
                    f"t_{p} known mod {p}^{t.precision}, component Z/{p}^{e} needs more"
                )
            mults.append(pow(t.residue, k, p**e))
        return tuple(mults)

    def _q_map(self, k: int) -> int:
        return _q8_pow(self.q0, k)

    def apply(self, x, k: int = 1):
        """phi^k(x)."""
        q, a = x
        if self.q0:
            q = q8_conj(q, self._q_map(k))
        mults = self._multipliers(k)
        return (q, tuple(c * u % m if m else c * u for c, u, m in zip(a, mults, self.base.abelian.moduli)))

    __call__ = apply

    def apply_rows(self, X: np.ndarray, k: int = 1) -> np.ndarray:
        """Vectorized phi^k over element rows of a periodic base."""
        X = np.atleast_2d(X)
        out = np.empty(X.shape, dtype=np.int64)
        by = self._q_map(k)
        table = np.array([q8_conj(q, by) for q in range(8)], dtype=np.int64)
        out[:, 0] = table[X[:, 0]]
        mults = np.array(self._multipliers(k), dtype=np.int64)
        moduli = np.array(self.base.abelian.moduli, dtype=np.int64)
        out[:, 1:] = X[:, 1:] * mults % moduli
        return out

    def compose(self, other: PowerAut) -> PowerAut:
        if self.base != other.base:
            raise IncompatibleBase("power automorphisms of different groups")
        other_t = dict(other.exponents)
        exps = tuple((p, t * other_t[p]) for p, t in self.exponents)
        return PowerAut(self.base, exps, _canonical_q0(Q8_MUL[self.q0][other.q0]), self.sign * other.sign)

    def inverse(self) -> PowerAut:
        exps = tuple((p, t.inverse()) for p, t in self.exponents)
        return PowerAut(self.base, exps, self.q0, self.sign)

    def order(self) -> int:
        """Order of phi as an automorphism of the base."""
        self._multipliers(1)  # precision check
        n = 1
        units = dict(self.exponents)
        A = self.base.abelian
        for p in A.primes:
            e = max(e for q, e in A.components if q == p)
            n = math.lcm(n, units[p].reduce(e).order())
        if self.q0:
            n = math.lcm(n, 2)
        if self.sign == -1 and A.free_rank:
            n = math.lcm(n, 2)
        return n

    def is_identity(self) -> bool:
        return self.order() == 1

    def signature(self) -> tuple:
        """Images of the base generators; determines phi."""
        return tuple(self.apply(g) for g in self.base.generators())

    def as_mapping(self) -> dict:
        require_finite(self.base)
        return {x: self.apply(x) for x in self.base.elements()}


def power_aut(base: DedekindGroup, exponents: Mapping[int, PadicUnit | int] | None = None,
              q0: int | str = 0, sign: int = 1, precision: int | None = None) -> PowerAut:
    """
    Build a power automorphism of ``base``.

    Integer exponents are turned into units at ``precision`` (default: the
    exponent of the matching Sylow subgroup).  Primes of the base without an
    exponent get t_p = 1.
    """
    from .dedekind import Q8_INDEX

    exponents = dict(exponents or {})
    if isinstance(q0, str):
        q0 = Q8_INDEX[q0]
    if q0 and not base.hamiltonian:
        raise IncompatibleBase("inner part q0 needs a Hamiltonian base")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not base.is_periodic:
        if exponents:
            raise IncompatibleBase("non-periodic abelian bases admit only sign = +-1")
        return PowerAut(base, (), 0, sign)
    if sign == -1:
        raise IncompatibleBase("on a periodic base, express inversion as t_p = -1")
    primes = base.primes()
    A = base.abelian
    units = {}
    for p in sorted(primes):
        e = max((e for q, e in A.components if q == p), default=1)
        t = exponents.pop(p, 1)
        units[p] = t if isinstance(t, PadicUnit) else make_unit(p, precision or e, t)
        if units[p].prime != p:
            raise IncompatibleBase(f"unit for prime {p} lives in Z_{units[p].prime}")
    if exponents:
        raise IncompatibleBase(f"primes {sorted(exponents)} do not divide |{base}|")
    return PowerAut(base, tuple(sorted(units.items())), _canonical_q0(q0), 1)


def identity_aut(base: DedekindGroup) -> PowerAut:
    return power_aut(base)


def inversion(base: DedekindGroup, precision: int | None = None) -> PowerAut:
    """a -> a^-1; only defined on abelian bases."""
    if base.hamiltonian:
        raise IncompatibleBase("inversion is not an automorphism of Q8")
    if not base.is_periodic:
        return power_aut(base, sign=-1)
    return power_aut(base, {p: -1 for p in base.primes()}, precision=precision)


def is_power_auto(f: Callable | Mapping, G, cyclic_cache: dict | None = None) -> bool:
    """Whether f(x) lies in <x> for every x of the finite group G."""
    if isinstance(f, Mapping):
        f = f.__getitem__
    cache = cyclic_cache if cyclic_cache is not None else {}
    for x in G.elements():
        cyc = cache.get(x)
        if cyc is None:
            # every generator of <x> shares the same subgroup
            powers = cyclic_powers(G, x)
            n = len(powers)
            cyc = frozenset(powers)
            for j in range(1, n):
                if math.gcd(j, n) == 1:
                    cache[powers[j]] = cyc
            cache[x] = cyc
        if f(x) not in cyc:
            return False
    return True


def q8_automorphisms() -> list[dict]:
    """All 24 automorphisms of Q8, as maps on element indices."""
    # every element of Q8 is uniquely i^a j^b with 0 <= a < 4, 0 <= b < 2
    words = {}
    for a in range(4):
        for b in range(2):
            words[Q8_MUL[_q8_pow(2, a)][_q8_pow(4, b)]] = (a, b)
    autos = []
    for ii, jj in itertools.product(range(2, 8), repeat=2):
        f = {x: Q8_MUL[_q8_pow(ii, a)][_q8_pow(jj, b)] for x, (a, b) in words.items()}
        if len(set(f.values())) != 8:
            continue
        if all(f[Q8_MUL[x][y]] == Q8_MUL[f[x]][f[y]] for x in range(8) for y in range(8)):
            autos.append(f)
    return autos


def inner_part(f: Mapping[int, int]) -> int | None:
    """The canonical q0 with f = conjugation by q0, if f is inner."""
    for q0 in (0, 2, 4, 6):
        if all(f[q] == q8_conj(q, q0) for q in range(8)):
            return q0
    return None


@dataclass(frozen=True)
class PAutGroup:
    base: DedekindGroup
    elements: tuple

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, phi):
        sig = phi.signature()
        return any(psi.signature() == sig for psi in self.elements)

    def is_closed(self) -> bool:
        return all(phi.compose(psi) in self for phi in self for psi in self)

    def is_abelian(self) -> bool:
        return all(
            phi.compose(psi).signature() == psi.compose(phi).signature() for phi in self for psi in self
        )


def _cyclic_labels(G, elems: list) -> np.ndarray:
    """Label each element by the cyclic subgroup it generates."""
    index = {x: i for i, x in enumerate(elems)}
    labels = np.full(len(elems), -1, dtype=np.int64)
    for i, x in enumerate(elems):
        if labels[i] >= 0:
            continue
        powers = cyclic_powers(G, x)
        n = len(powers)
        for j in range(1, n):
            if math.gcd(j, n) == 1:
                labels[index[powers[j]]] = i
        labels[i] = i
    return labels


def enumerate_paut(B: DedekindGroup, cap: int = DEFAULT_CAP) -> PAutGroup:
    """
    All power automorphisms of a finite Dedekind group.

    Candidates are unit tuples modulo the exponent of each Sylow subgroup,
    together with the 24 automorphisms of Q8 for a Hamiltonian base.  Every
    candidate is an automorphism, so f(x) lies in <x> iff <f(x)> = <x>; that
    is checked for all x at once against a table of cyclic-subgroup labels.
    """
    require_finite(B, cap)
    A = B.abelian
    primes = sorted(A.primes)
    exps = {p: max(e for q, e in A.components if q == p) for p in primes}
    unit_lists = [[make_unit(p, exps[p], u) for u in range(1, p ** exps[p]) if u % p] for p in primes]
    q_candidates = q8_automorphisms() if B.hamiltonian else [{0: 0}]

    elems = list(B.elements())
    labels = _cyclic_labels(B, elems)
    moduli = np.array(A.moduli, dtype=np.int64)
    size_a = A.size
    qs = np.arange(8) if B.hamiltonian else np.zeros(1, dtype=np.int64)
    # abelian coordinates in the order B.elements() lists them
    coords = np.indices(A.moduli).reshape(len(A.moduli), -1) if A.moduli else np.zeros((0, 1), dtype=np.int64)

    found = []
    for qmap in q_candidates:
        q_img = np.array([qmap[int(q)] for q in qs], dtype=np.int64)
        for units in itertools.product(*unit_lists):
            trial = power_aut(B, dict(zip(primes, units)))
            mults = np.array(trial._multipliers(1), dtype=np.int64)
            if A.moduli:
                img = coords * mults[:, None] % moduli[:, None]
                lin = np.ravel_multi_index(tuple(img), A.moduli)
            else:
                lin = np.zeros(1, dtype=np.int64)
            image = (q_img[:, None] * size_a + lin[None, :]).ravel()
            if not np.array_equal(labels[image], labels):
                continue
            q0 = inner_part(qmap) if B.hamiltonian else 0
            if q0 is None:
                raise Inconsistent("non-inner power automorphism of Q8")
            found.append(PowerAut(B, trial.exponents, q0, 1))
    found.sort(key=lambda phi: (phi.q0, [t.residue for _, t in phi.exponents]))
    return PAutGroup(B, tuple(found))


def fixed_points(phi: PowerAut | PadicUnit, A: FinAbelian, k: int = 1) -> AbSubgroup:
    """
    Fixed points of phi^k on an abelian p-group A, in closed form.

    With j = v_p(t^k - 1) the fixed points are exactly Omega_j(A).
    """
    ps = A.primes
    if len(ps) > 1:
        raise NotAPGroup(f"{A} is not a p-group")
    if not ps:
        return A.omega(0, 2)
    (p,) = ps
    t = phi if isinstance(phi, PadicUnit) else phi.exponent(p)
    if t.prime != p:
        raise IncompatibleBase(f"unit in Z_{t.prime} acting on a {p}-group")
    top = max(e for _, e in A.components)
    if t.precision < top:
        raise PrecisionTooLow(f"t known mod {p}^{t.precision}, A has exponent {p}^{top}")
    j = valuation_pow_minus_one(t, k)
    # exhausted: t^k = 1 mod p^N with p^N >= exp A, so phi^k is the identity on A
    return A.omega(top if j is None else j, p)
