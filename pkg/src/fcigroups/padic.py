"""
Units of the p-adic integers held at a fixed finite precision.

A :class:`PadicUnit` is a residue class ``t mod p**N`` with ``t`` coprime to
``p``.  The precision is part of the value: two units only combine when both
prime and precision agree.

>>> t = make_unit(3, 5, 4)
>>> valuation_pow_minus_one(t, 1)
1
>>> unit_pow(make_unit(3, 3, 4), -1).residue
7
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy import isprime

from .errors import NotAUnit, PrecisionMismatch


@dataclass(frozen=True, order=True)
class PadicUnit:
    prime: int
    precision: int
    residue: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError(f"precision must be >= 1, got {self.precision}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(f"residue {self.residue} not reduced mod {self.modulus}")
        if self.residue % self.prime == 0:
            raise NotAUnit(f"{self.residue} is divisible by {self.prime}")

    @property
    def modulus(self) -> int:
        return self.prime**self.precision

    def _check(self, other: PadicUnit):
        if (self.prime, self.precision) != (other.prime, other.precision):
            raise PrecisionMismatch(
                f"cannot combine units of Z_{self.prime} mod p^{self.precision} "
                f"and Z_{other.prime} mod p^{other.precision}"
            )

    def __mul__(self, other: PadicUnit) -> PadicUnit:
        self._check(other)
        return PadicUnit(self.prime, self.precision, self.residue * other.residue % self.modulus)

    def __pow__(self, k: int) -> PadicUnit:
        return unit_pow(self, k)

    def inverse(self) -> PadicUnit:
        return unit_pow(self, -1)

    def is_one(self) -> bool:
        return self.residue == 1

    def is_minus_one(self) -> bool:
        return self.residue == self.modulus - 1

    def reduce(self, precision: int) -> PadicUnit:
        """Truncate to a lower precision (never widens)."""
        if precision > self.precision:
            raise PrecisionMismatch(
                f"cannot widen precision {self.precision} to {precision}"
            )
        return PadicUnit(self.prime, precision, self.residue % self.prime**precision)

    def order(self) -> int:
        """Multiplicative order of the residue class in (Z/p^N)^x."""
        n, x = 1, self.residue
        while x != 1:
            x = x * self.residue % self.modulus
            n += 1
        return n

    def signed(self) -> int:
        """Representative in (-p^N/2, p^N/2], handy for printing -1."""
        r = self.residue
        return r - self.modulus if 2 * r > self.modulus else r

    def __str__(self):
        return f"{self.signed()} (mod {self.prime}^{self.precision})"


def make_unit(p: int, precision: int, value: int) -> PadicUnit:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    residue = value % p**precision
    if residue % p == 0:
        raise NotAUnit(f"{value} is not a unit in Z_{p}")
    return PadicUnit(p, precision, residue)


def unit_pow(t: PadicUnit, k: int) -> PadicUnit:
    return PadicUnit(t.prime, t.precision, pow(t.residue, k, t.modulus))


def valuation_pow_minus_one(t: PadicUnit, k: int) -> int | None:
    """
    Return ``j = v_p(t**k - 1)``.

    ``None`` means the precision is exhausted: ``t**k == 1 mod p**N``, so the
    valuation is at least ``N`` and may be infinite.  Callers decide what that
    means for them.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    x = (pow(t.residue, k, t.modulus) - 1) % t.modulus
    if x == 0:
        return None
    j = 0
    while x % t.prime == 0:
        x //= t.prime
        j += 1
    return j


def has_infinite_order_heuristic(t: PadicUnit) -> bool | None:
    """
    Decide whether ``t`` is of infinite order in Z_p^x, as far as the
    residue allows.

    The torsion of Z_p^x is the group of (p-1)-th roots of unity for odd p and
    {1, -1} for p = 2.  The residue class of ``t`` contains a torsion unit iff
    ``t**(p-1) == 1 mod p**N`` (odd p) or ``t == +-1 mod 2**N``.

    Returns True if no unit of the class has finite order, False if ``t`` is
    literally 1 or -1 at this precision, and None (unknown) otherwise.
    """
    if t.is_one() or t.is_minus_one():
        return False
    if t.prime == 2:
        return True
    if pow(t.residue, t.prime - 1, t.modulus) != 1:
        return True
    return None
