from __future__ import annotations

from math import comb

import pytest

from arrmono.g31build import (
    IdentityFailed,
    InvariantSet,
    build_invariants,
    build_syzygy_basis,
    primed_columns,
)
from arrmono.gradlin import mult_map, rank_mod_p
from arrmono.poly import Polynomial, dot

x, y, z, t = Polynomial.gens()


def test_f_basics(arr):
    f = arr.f
    assert f.degree == 60 and f.is_homogeneous() and f.is_integral()
    assert f.eval((1, 0, 0, 0)) == 0


def test_invariants(arr):
    inv = arr.invariants
    assert inv.s[0] == 1
    assert inv.s[4] - 9 * inv.F8 ** 2 == 0
    assert [p.degree for p in inv.basic] == [8, 12, 20, 24]
    assert all(p.is_homogeneous() for p in inv.basic)
    assert all(a.degree == 4 for a in inv.A)


def test_f4_integral(arr):
    # the normalization constant leaves f4 with integer coefficients
    f4 = arr.invariants.f4
    assert f4.is_integral() and len(f4) == 85


def test_syzygy_basis(arr, grad):
    E = arr.E
    assert all(E.checks.values()) and len(E.checks) >= 8
    assert E.column(0) == (x, y, z, t)
    assert dot(E.column(0), grad) == 60 * arr.f
    for j in (1, 2, 3):
        assert dot(E.column(j), grad).is_zero()
    assert E.column_degrees == (1, 29, 13, 17)
    assert E.E.det() == -486 * arr.f
    for j in range(4):
        assert all(p.homogenize_check(E.column_degrees[j]) for p in E.column(j))


def test_primed(arr):
    P = arr.P
    assert [p.degree for p in P.m] == [28, 12, 16]
    assert [len(p) for p in P.m] == [136, 24, 45]
    for row, v, i in zip(P.rows, (x, y, z, t), range(4)):
        assert [p.degree for p in row] == [28, 12, 16]
        for j in range(3):
            assert v * row[j] == arr.E.E[i, j + 1]
    assert x * P.m[1] - arr.E.E[0, 2] == 0


def test_corrupted_invariants_fail(arr):
    inv = arr.invariants
    bad = InvariantSet(**{**inv.__dict__, "f4": inv.f4 + x ** 24})
    with pytest.raises((IdentityFailed, ArithmeticError)):
        build_syzygy_basis(bad, arr.f)


def test_structural_ar_dimensions(grad, primes):
    """dim AR(f)_D = sum_j dim S_{D - e_j} for e = (13, 17, 29), checked by direct kernels."""
    for D, expected in ((8, 0), (13, 1), (17, 36)):
        structural = sum(comb(D - e + 3, 3) for e in (13, 17, 29) if D >= e)
        assert structural == expected
        M = mult_map(grad, 59 + D)
        dim_p = M.ncols - rank_mod_p(M, primes[0])
        # the free basis gives the lower bound, the mod-p kernel the upper bound
        assert dim_p == expected
