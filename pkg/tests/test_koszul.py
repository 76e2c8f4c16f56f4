from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from arrmono.gradlin import Certificate, Verdict, kernel_trivial_certificate, mult_map, rank_mod_p
from arrmono.koszul import (
    EIGENVALUE_ORDERS,
    MonodromyCase,
    ParamVector,
    TwoForm,
    closedness_system,
    d_residuals,
    exterior_d_one_form,
    general_wedge_kernel,
    monodromy_report,
    param_from_families,
    param_matrix,
    param_omega,
    wedge_residuals,
)
from arrmono.poly import Polynomial, random_homogeneous

x, y, z, t = Polynomial.gens()
ZERO = Polynomial.zero()


def test_two_form_degree_invariant():
    with pytest.raises(ValueError):
        TwoForm(5, x ** 3, x ** 2, ZERO, ZERO, ZERO, ZERO)
    w = TwoForm.zero(7)
    assert w.is_zero() and (w + w).is_zero()


def test_wedge_examples(arr, grad):
    assert all(r.is_zero() for r in wedge_residuals(TwoForm.zero(10), grad))
    fx, fy, fz, ft = grad
    w = TwoForm.from_dict(61, {"34": fz, "24": fy})
    assert wedge_residuals(w, arr.f)[0].is_zero()


def test_d_examples():
    one = Polynomial.one()
    const = TwoForm(2, one, 2 * one, 3 * one, 4 * one, 5 * one, 6 * one)
    assert all(r.is_zero() for r in d_residuals(const))
    w = TwoForm.from_dict(3, {"12": z})
    assert d_residuals(w)[3] == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_d_squared_is_zero(seed, deg):
    rng = random.Random(seed)
    eta = [random_homogeneous(rng, deg, rng.randint(1, 8), 20) for _ in range(4)]
    w = exterior_d_one_form(eta, deg + 1)
    assert all(r.is_zero() for r in d_residuals(w))


def test_minor_table(minors):
    assert all(c.verdict is Verdict.PROVED for c in minors.certificates)
    for key in ("MN", "MP", "MQ", "NP", "NQ", "PQ"):
        assert [p.degree for p in minors.minors[key]] == [28, 44, 40]
    assert (x ** 4 - y ** 4).divides(minors.minors["MN"][0])
    assert (x ** 4 - t ** 4).divides(minors.minors["MQ"][2])
    assert minors.reduced["MN"][0].degree == 24
    assert [p.degree for p in minors.reduced["MP"]] == [24, 40, 36]


def test_families(families, minors, grad):
    from arrmono.koszul import check_families

    cert = check_families(families, minors, grad)
    assert cert.verdict is Verdict.PROVED, cert.data["failures"]
    T1 = families["T"][0]
    assert T1[0].is_zero()
    assert T1[1] == y * minors.minors["MN"][0]
    assert T1[2] == z * minors.minors["MP"][0]
    assert T1[3] == t * minors.minors["MQ"][0]
    for r, name in enumerate("TUVW"):
        assert [max(p.degree for p in v) for v in families[name]] == [29, 45, 41]
        assert all(v[r].is_zero() for v in families[name])


def test_param_zero_and_constant(minors, grad, families):
    assert param_omega(ParamVector(50, ZERO, ZERO, ZERO), minors).is_zero()
    w = param_omega(ParamVector(50, ZERO, x ** 2, ZERO), minors, grad=grad, families=families)
    assert not w.is_zero() and all(w[p].homogenize_check(48) for p in ("12", "13", "14", "23", "24", "34"))
    # a constant A'_2 lives in degree 48, two below
    w = param_omega(ParamVector(48, ZERO, Polynomial.one(), ZERO), minors, grad=grad, families=families)
    assert not w.is_zero() and w.a34.degree == 46


def test_param_degrees_validated():
    with pytest.raises(ValueError):
        ParamVector(50, x, ZERO, ZERO)
    with pytest.raises(ValueError):
        ParamVector(40, x ** 8, Polynomial.one(), ZERO)


def test_param_k40(minors, grad):
    rng = random.Random(40)
    A = ParamVector.random(40, rng, nterms=12)
    assert len(A.A1) >= 10 and A.A2.is_zero() and A.A3.is_zero()
    w = param_omega(A, minors, grad=grad)
    assert all(r.is_zero() for r in wedge_residuals(w, grad))


def test_param_linear(minors):
    rng = random.Random(1)
    A, B = ParamVector.random(50, rng), ParamVector.random(50, rng)
    S = ParamVector(50, *(a + b for a, b in zip(A.parts, B.parts)))
    assert param_omega(S, minors) == param_omega(A, minors) + param_omega(B, minors)


@pytest.mark.parametrize("seed", range(5))
def test_param_random_cross_consistency(seed, minors, grad, families):
    A = ParamVector.random(50, random.Random(seed))
    w = param_omega(A, minors)
    assert all(r.is_zero() for r in wedge_residuals(w, grad))
    recon = param_from_families(A, families)
    # a23 read from R1 and from R4
    assert recon["23"][0] == recon["23"][1] == w.a23
    assert all(v[0] == v[1] == w[p] for p, v in recon.items())


def test_param_and_closedness_k50(minors, primes):
    M = param_matrix(50, minors)
    assert M.ncols == 1330 + 10 + 84 == 1424
    assert all(rank_mod_p(M, p) == 1424 for p in primes)
    C = closedness_system(50, minors)
    assert C.shape == (19600, 1424)
    assert all(rank_mod_p(C, p) == 1424 for p in primes)


def test_closedness_k40_and_monotonicity(minors, primes):
    assert param_matrix(40, minors).ncols == 165
    e4 = closedness_system(40, minors, ("E4",))
    full = closedness_system(40, minors, ("E1", "E2", "E3", "E4"))
    r4, rall = rank_mod_p(e4, primes[0]), rank_mod_p(full, primes[0])
    assert r4 == 165
    assert full.ncols - rall <= e4.ncols - r4


def test_wedge_kernel_low_k(arr, grad, primes):
    for k in (10, 20, 30):
        dim, cert = general_wedge_kernel(k, arr.E, primes)
        assert dim == 0 and cert.verdict is Verdict.PROVED
    ar8 = kernel_trivial_certificate(mult_map(grad, 67), primes[:1])
    assert ar8.verdict is Verdict.PROVED and ar8.data["cols"] == 660


def _cert(name, verdict=Verdict.PROVED):
    return Certificate(name, "c", verdict)


def test_monodromy_logic():
    certs = {f"c{k}": _cert(f"c{k}") for k in (10, 20, 30, 40, 50)}
    cases = [MonodromyCase(k, 0, [f"c{k}"], Verdict.PROVED) for k in (10, 20, 30, 40, 50)]
    rep = monodromy_report(cases, certs)
    assert rep.verdict is Verdict.PROVED and rep.b1 == 59
    assert set(rep.eigenvalue_orders.values()) == {"excluded"}
    assert EIGENVALUE_ORDERS == (1, 2, 3, 6)
    certs["c50"] = _cert("c50", Verdict.INCONCLUSIVE)
    rep = monodromy_report(cases, certs)
    assert rep.verdict is Verdict.INCONCLUSIVE and rep.b1 is None
    assert any("c50" in s for s in rep.failing)
    assert rep.eigenvalue_orders["6"] == "not excluded" and rep.eigenvalue_orders["2"] == "excluded"
    rep = monodromy_report(cases[:-1], {k: v for k, v in certs.items() if k != "c50"})
    assert rep.verdict is not Verdict.PROVED


def test_case_eigenvalue():
    c = MonodromyCase(50, 0, [], Verdict.PROVED)
    assert c.k_prime == 10 and c.eigenvalue == (5, 6)
