from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arrmono.exactring import (
    PIPELINE_CONSTANTS,
    BadPrime,
    PrimeFieldElement,
    gen_primes,
    is_prime,
    rational_arith,
    reduce_mod,
    residue,
)

fractions = st.fractions(max_denominator=10**6).filter(lambda q: abs(q.numerator) < 10**12)


def test_rational_examples():
    assert rational_arith(Fraction(1, 6), Fraction(1, 4), "add") == Fraction(5, 12)
    assert rational_arith(-486, Fraction(1, 1), "mul") == Fraction(-486, 1)
    assert rational_arith(Fraction(1, 265531392), 265531392, "mul") == 1
    with pytest.raises(ZeroDivisionError):
        rational_arith(1, 0, "div")


def test_gen_primes_contract():
    a = gen_primes(2, 62, 0)
    assert a == gen_primes(2, 62, 0)
    assert len(set(a)) == 2 and all(p.bit_length() == 62 and is_prime(p) for p in a)
    (q,) = gen_primes(1, 31, 7)
    assert q.bit_length() == 31 and is_prime(q)
    for p in a + [q]:
        assert all(c % p for c in PIPELINE_CONSTANTS)
    assert gen_primes(2, 62, 1) != a


def test_is_prime_small():
    naive = [n for n in range(2, 2000) if all(n % d for d in range(2, int(n ** 0.5) + 1))]
    assert [n for n in range(2000) if is_prime(n)] == naive
    assert is_prime(2 ** 61 - 1) and not is_prime(2 ** 61 + 1)


def test_reduce_examples():
    assert reduce_mod(Fraction(1, 6), 7).residue == 6
    p = gen_primes(1)[0]
    assert residue(-486, p) == p - 486 % p
    with pytest.raises(BadPrime):
        reduce_mod(Fraction(1, 2), 2)


@given(fractions, fractions)
def test_reduction_is_a_homomorphism(a, b):
    p = 1_000_003
    assert reduce_mod(a * b, p) == reduce_mod(a, p) * reduce_mod(b, p)
    assert reduce_mod(a + b, p) == reduce_mod(a, p) + reduce_mod(b, p)


@given(fractions, fractions, st.sampled_from(["add", "sub", "mul", "div"]))
def test_lowest_terms(a, b, op):
    if op == "div" and b == 0:
        return
    r = rational_arith(a, b, op)
    assert r.denominator > 0
    from math import gcd

    assert gcd(r.numerator, r.denominator) == 1


@given(st.integers(1, 10**6 + 2))
def test_field_inverse(n):
    p = 1_000_003
    x = PrimeFieldElement(n % p, p)
    if x.residue:
        assert (x * x.inverse()).residue == 1
