"""Exact coefficient arithmetic: rationals, prime fields, prime generation."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "BigRational",
    "BadPrime",
    "PrimeFieldElement",
    "PIPELINE_CONSTANTS",
    "rational_arith",
    "is_prime",
    "gen_primes",
    "reduce_mod",
    "residue",
]

# Fraction already keeps lowest terms with a positive denominator, zero as 0/1.
BigRational = Fraction
Coefficient = Union[int, Fraction]

# Constants the G31 pipeline divides by; a usable prime must not divide any.
PIPELINE_CONSTANTS = (486, 265531392, 1620, 5, 60)


class BadPrime(ArithmeticError):
    """The modulus divides a denominator, so the reduction is undefined."""

    def __init__(self, p: int, value: object = None):
        self.p = p
        self.value = value
        super().__init__(f"denominator of {value} vanishes modulo {p}")


def rational_arith(a: Coefficient, b: Coefficient, op: str) -> Fraction:
    a, b = Fraction(a), Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("rational division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Miller-Rabin with the first 12 prime bases; deterministic below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_primes(count: int, bits: int = 62, seed: int = 0) -> list[int]:
    """Return ``count`` distinct primes with exactly ``bits`` bits.

    The output is a pure function of the arguments. Primes dividing one of
    :data:`PIPELINE_CONSTANTS` are skipped (only relevant for tiny moduli,
    but the guard is kept unconditional).
    """
    if count < 1:
        raise ValueError("count must be positive")
    if not 31 <= bits <= 62:
        raise ValueError("bits must lie in [31, 62]")
    rng = random.Random(f"arrmono-primes/{bits}/{seed}")
    lo, hi = 1 << (bits - 1), (1 << bits) - 1
    out: list[int] = []
    while len(out) < count:
        cand = rng.randint(lo, hi) | 1
        if cand > hi or cand in out or not is_prime(cand):
            continue
        if any(c % cand == 0 for c in PIPELINE_CONSTANTS):
            continue
        out.append(cand)
    return out


def residue(x: Coefficient, p: int) -> int:
    """Image of an integer or rational in [0, p); raises BadPrime."""
    if isinstance(x, int):
        return x % p
    den = x.denominator % p
    if den == 0:
        raise BadPrime(p, x)
    return x.numerator * pow(den, -1, p) % p


def reduce_mod(x: Coefficient, p: int) -> "PrimeFieldElement":
    return PrimeFieldElement(residue(x, p), p)


@dataclass(frozen=True)
class PrimeFieldElement:
    residue: int
    modulus: int

    def __post_init__(self):
        if not 0 <= self.residue < self.modulus:
            raise ValueError("residue out of range")

    def _coerce(self, other) -> int:
        if isinstance(other, PrimeFieldElement):
            if other.modulus != self.modulus:
                raise ValueError("moduli differ")
            return other.residue
        return residue(other, self.modulus)

    def __add__(self, other):
        return PrimeFieldElement((self.residue + self._coerce(other)) % self.modulus, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return PrimeFieldElement((self.residue - self._coerce(other)) % self.modulus, self.modulus)

    def __rsub__(self, other):
        return PrimeFieldElement((self._coerce(other) - self.residue) % self.modulus, self.modulus)

    def __mul__(self, other):
        return PrimeFieldElement(self.residue * self._coerce(other) % self.modulus, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElement(-self.residue % self.modulus, self.modulus)

    def inverse(self) -> "PrimeFieldElement":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return PrimeFieldElement(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = PrimeFieldElement(self._coerce(other), self.modulus)
        return self * o.inverse()

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"
