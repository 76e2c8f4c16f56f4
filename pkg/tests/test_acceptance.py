"""Acceptance criteria 1 to 11, one test each.

Criteria 1 to 9 read the shared default run (``full_run``) and add
independent checks where they are cheap. Each test records a PASS/FAIL line
that is printed in the terminal summary.
"""

from __future__ import annotations

import os
import random
import time
from math import comb

import pytest

import test_gradlin
import test_poly
from arrmono.g31build import DET_E_CONSTANT, EXPONENTS
from arrmono.gradlin import Verdict
from arrmono.koszul import d_residuals, exterior_d_one_form, general_wedge_kernel
from arrmono.pipeline import JOBS, dumps, rejudge, strip_runtime
from arrmono.poly import Polynomial, parse_poly4, random_homogeneous

x, y, z, t = Polynomial.gens()


def certs_of(report) -> dict:
    return {c["name"]: c for c in report["certificates"]}


def seconds(report, *names) -> float:
    times = report["runtime"]["certificate_seconds"]
    return round(sum(times.get(n, 0.0) for n in names), 1)


def test_criterion_01_construction_identities(full_run, criterion):
    criterion(1)
    _, report, _ = full_run
    c = certs_of(report)
    cons, free = c["construction"], c["freeness"]
    checks = cons["data"]["checks"]
    assert cons["verdict"] == "Proved" and free["verdict"] == "Proved"
    for key in ("s4 = 9 F8^2", "D[1] = (x, y, z, t)", "D[1] f = 60 f", "E[2] . grad f = 0",
                "E[3] . grad f = 0", "E[4] . grad f = 0", "det E = -486 f", "column degrees (1, 29, 13, 17)"):
        assert checks[key] is True, key
    assert free["data"]["det_E_over_f"] == DET_E_CONSTANT == -486
    assert tuple(free["data"]["column_degrees"]) == EXPONENTS == (1, 29, 13, 17)
    assert sorted(EXPONENTS) == [1, 13, 17, 29]
    criterion.note(f"s4 = 9F8^2, Euler, E.grad f = 0, det E = -486 f, degrees (1,29,13,17) "
                   f"[{seconds(report, 'construction', 'freeness')} s + build "
                   f"{report['runtime']['prepare_seconds']:.0f} s]")


def test_criterion_02_primed_columns(full_run, arr, criterion):
    criterion(2)
    _, report, _ = full_run
    cert = certs_of(report)["primed-columns"]
    assert cert["verdict"] == "Proved"
    assert cert["data"]["m_prime_terms"] == [136, 24, 45]
    assert all(d == [28, 12, 16] for d in cert["data"]["degrees"].values())
    # direct recount on the constructed data
    assert [p.degree for p in arr.P.m] == [28, 12, 16]
    assert [len(p) for p in arr.P.m] == [136, 24, 45]
    criterion.note("m' degrees (28,12,16), terms (136,24,45)")


def test_criterion_03_regular_sequences(full_run, criterion):
    criterion(3)
    config, report, _ = full_run
    c = certs_of(report)
    for letter in "mnpq":
        cert = c[f"regseq-{letter}"]
        assert cert["verdict"] == "Proved", letter
        assert cert["data"]["socle_bound"] == 54
        final = cert["data"]["attempts"][-1]
        assert final["target_degree"] == 54 and final["rows"] == comb(54 + 2, 2) == 1540
        assert len(final["rank_mod_p"]) == len(config.primes) == 2
        assert all(r == 1540 for r in final["rank_mod_p"].values()), final["rank_mod_p"]
    criterion.note(f"m, n, p, q slices reach rank 1540 at degree 54 mod 2 primes "
                   f"[{seconds(report, *(f'regseq-{c}' for c in 'mnpq'))} s]")


def test_criterion_04_divisibility(full_run, minors, criterion):
    criterion(4)
    _, report, _ = full_run
    c = certs_of(report)
    assert all(c[f"divisibility-{k}"]["verdict"] == "Proved" for k in ("MN", "MP", "MQ"))
    # independent: multiply back and compare with the unreduced minors
    for key, other in (("MN", y), ("MP", z), ("MQ", t)):
        factor = x ** 4 - other ** 4
        for red, full in zip(minors.reduced[key], minors.minors[key]):
            assert red * factor == full
    criterion.note("MN by x^4-y^4, MP by x^4-z^4, MQ by x^4-t^4, remainder 0")


def test_criterion_05_minimal_syzygy_scans(full_run, criterion):
    criterion(5)
    _, report, _ = full_run
    c = certs_of(report)
    for key in ("MN", "MP", "MQ"):
        cert = c[f"scan-{key}"]
        dims = {int(d): v for d, v in cert["data"]["kernel_dims_mod_p"].items()}
        assert cert["verdict"] == "Proved", key
        assert all(v == 0 for d, v in dims.items() if d <= 47)
        assert min(dims) <= min(cert["data"]["degrees"])  # scan starts at the lowest reachable degree
        assert dims[48] > 0 and cert["data"]["first_degree"] == 48
        assert cert["data"]["multidegree"] == [24, 8, 12]
        assert cert["data"]["witness_component_degrees"] == [24, 8, 12]
    criterion.note(f"MN', MP', MQ': kernel 0 for D <= 47, first syzygy at D = 48 with multidegree "
                   f"(24,8,12), rational witness [{seconds(report, 'scan-MN', 'scan-MP', 'scan-MQ')} s]")


def test_criterion_06_parametrization(full_run, criterion):
    criterion(6)
    _, report, _ = full_run
    c = certs_of(report)
    rank = c["param-rank-k50"]
    assert comb(18 + 3, 3) + comb(2 + 3, 3) + comb(6 + 3, 3) == 1330 + 10 + 84 == 1424
    assert rank["verdict"] == "Proved" and rank["data"]["cols"] == 1424
    assert len(rank["data"]["rank_mod_p"]) == 2
    assert all(r == 1424 for r in rank["data"]["rank_mod_p"].values())
    samples = c["param-samples-k50"]
    assert samples["verdict"] == "Proved"
    assert samples["data"]["samples"] == 5 and samples["data"]["failures"] == []
    assert c["param-in-kernel"]["verdict"] == "Proved"
    criterion.note(f"1424 columns, full rank mod 2 primes; 5 random A' give zero residuals "
                   f"[{seconds(report, 'param-rank-k50', 'param-samples-k50')} s]")


def test_criterion_07_closedness(full_run, criterion):
    criterion(7)
    _, report, _ = full_run
    cert = certs_of(report)["closedness-k50-E4"]
    assert cert["verdict"] == "Proved"
    assert (cert["data"]["rows"], cert["data"]["cols"]) == (19600, 1424)
    assert len(cert["data"]["rank_mod_p"]) == 2
    assert all(r == 1424 for r in cert["data"]["rank_mod_p"].values())
    criterion.note(f"19600 x 1424, trivial kernel mod each of 2 primes "
                   f"[{seconds(report, 'closedness-k50-E4')} s]")


def test_criterion_08_low_k(full_run, criterion):
    criterion(8)
    _, report, _ = full_run
    c = certs_of(report)
    for k in (10, 20, 30):
        cert = c[f"wedge-kernel-k{k}"]
        assert cert["verdict"] == "Proved" and cert["data"]["kernel_dim_upper_bound"] == 0, k
    assert c["ar8-trivial"]["verdict"] == "Proved"
    assert c["ar8-trivial"]["data"]["kernel_dim_upper_bound"] == 0
    # in degree 40 only A'_1 in S_8 survives
    assert c["param-rank-k40"]["data"]["cols"] == comb(8 + 3, 3) == 165
    assert c["param-rank-k40"]["verdict"] == "Proved"
    assert c["closedness-k40-E4"]["verdict"] == "Proved"
    assert c["closedness-k40-E4"]["data"]["cols"] == 165
    criterion.note(f"wedge kernel 0 at k = 10, 20, 30; AR(f)_8 = 0; k = 40 closedness kernel trivial "
                   f"[{seconds(report, 'wedge-kernel-k10', 'wedge-kernel-k20', 'wedge-kernel-k30', 'ar8-trivial', 'closedness-k40-E4')} s]")


def test_criterion_09_report_and_fault_injection(full_run, criterion):
    criterion(9)
    _, report, code = full_run
    assert code == 0
    assert report["verdict"]["conclusion"] == "h1 = identity on H1(F), b1(F) = 59"
    assert report["verdict"]["b1"] == 59
    assert [case["e2_dim"] for case in report["cases"]] == [0] * 5
    t0 = time.perf_counter()
    same, same_code = rejudge(report)
    assert same_code == 0 and dumps(strip_runtime(same)) == dumps(strip_runtime(report))
    for name in JOBS:
        corrupted, bad_code = rejudge(report, fault=name)
        assert bad_code != 0, name
        assert corrupted["verdict"]["conclusion"] == "monodromy not determined"
        assert corrupted["verdict"]["first_failing"] == name
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    criterion.note(f"exit 0 with b1 = 59; each of {len(JOBS)} corrupted certificates gives a nonzero exit "
                   f"[{elapsed:.1f} s from stored certificates]")


@pytest.mark.slow
def test_criterion_10_heavy_oracle(full_run, arr, criterion):
    criterion(10)
    _, report, _ = full_run
    assert report["heavy_oracles"]["wedge-kernel-k50"] == "skipped"
    if os.environ.get("ARRMONO_SKIP_HEAVY"):
        criterion.note("skipped by ARRMONO_SKIP_HEAVY; default report marks it skipped")
        pytest.skip("ARRMONO_SKIP_HEAVY is set")
    t0 = time.perf_counter()
    dim, cert = general_wedge_kernel(50, arr.E, full_run[0].primes, expected=1424, early_stop=True)
    elapsed = time.perf_counter() - t0
    # mod p gives dim <= 1424, the injective parametrization gives dim >= 1424
    assert cert.verdict is Verdict.PROVED
    assert dim == 1424
    assert elapsed < 2 * 3600
    criterion.note(f"general_wedge_kernel(50) = 1424, 208250 x 63840 system [{elapsed:.0f} s]; "
                   f"report marks it skipped when disabled")


def test_criterion_11_property_suites(criterion):
    criterion(11)
    t0 = time.perf_counter()
    test_gradlin.test_soundness_direction_on_random_matrices()
    test_gradlin.test_mult_map_matches_polynomial_product()
    rng = random.Random(11)
    for _ in range(20):
        # d^2 = 0 on exact forms of degree k
        g = random_homogeneous(rng, rng.randint(2, 7), rng.randint(1, 8), 20)
        k = g.degree
        omega = exterior_d_one_form([g.diff(i) for i in range(4)], k)
        assert omega.is_zero()
        b = [random_homogeneous(rng, k, rng.randint(1, 6), 20) for _ in range(4)]
        assert all(r.is_zero() for r in d_residuals(exterior_d_one_form(b, k + 1)))
        # POLY4 round-trip
        assert parse_poly4(g.serialize()) == g
    test_poly.test_roundtrip_gradient()
    elapsed = time.perf_counter() - t0
    assert elapsed < 60
    criterion.note(f"soundness on 20 random matrices, mult_map, d^2 = 0, POLY4 round-trips [{elapsed:.1f} s]")
