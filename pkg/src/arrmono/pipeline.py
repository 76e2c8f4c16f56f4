"""The full verification run: certificates, cases and the final report."""

from __future__ import annotations

import copy
import json
import logging
import multiprocessing
import random
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .cache import ArrangementData, construct, load_or_build, store
from .exactring import PIPELINE_CONSTANTS, gen_primes, is_prime
from .g31build import (
    DET_E_CONSTANT,
    EXPONENTS,
    PRIMED_DEGREES,
    IdentityFailed,
    gradient,
)
from .poly import Polynomial, dot
from .gradlin import (
    Certificate,
    Verdict,
    kernel_trivial_certificate,
    min_syzygy_scan,
    mult_map,
    regular_sequence_certificate,
)
from .koszul import (
    MinorTable,
    MonodromyCase,
    ParamVector,
    SyzygyFamilies,
    build_minor_table,
    check_families,
    closedness_system,
    general_wedge_kernel,
    monodromy_report,
    param_matrix,
    param_omega,
    syzygy_families,
    template_wedge_certificate,
)

log = logging.getLogger(__name__)

REPORT_VERSION = 1
CASES = (10, 20, 30, 40, 50)
M_PRIME_TERMS = (136, 24, 45)
SCAN_MULTIDEGREE = (24, 8, 12)
SCAN_D_MAX = 48
PARAM_COLUMNS = {50: 1424, 40: 165}
CLOSEDNESS_SHAPE_50 = (19600, 1424)
PARAM_SAMPLES = 5

NOTES = [
    "For k < 60 the image of df ^ on 1-forms has no degree-k part, so degree-k classes are literal "
    "kernel elements of df ^ and surviving to the second page means d(omega) = 0.",
    "Regular sequences are certified by slicing with a seeded random linear form and checking that "
    "the restricted ideal contains all forms of degree 28 + 12 + 16 - 2 = 54 in three variables.",
    "Eigenvalues of h1 have order dividing 2, 3 or 6; orders 6, 3 and 2 are excluded by the degree "
    "pairs (10, 50), (20, 40) and (30, 30).",
    "b1(F) = 59 is the dimension of the fixed part H1(F)_1 = |A| - 1 once h1 is the identity; it is "
    "recorded, not recomputed.",
]


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    cache_dir: str | None = None
    primes: list[int] = field(default_factory=list)
    prime_count: int = 2
    prime_bits: int = 62
    seed: int = 0
    threads: int = 1
    heavy_oracles: bool = False
    output_format: str = "text"

    def __post_init__(self):
        if self.output_format not in ("text", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        if self.primes:
            for p in self.primes:
                if not is_prime(p):
                    raise ConfigError(f"{p} is not prime")
                if p >= 2 ** 63:
                    raise ConfigError(f"{p} exceeds 63 bits")
                bad = [c for c in PIPELINE_CONSTANTS if c % p == 0]
                if bad:
                    raise ConfigError(f"prime {p} divides pipeline constant {bad[0]}")
            if len(set(self.primes)) != len(self.primes):
                raise ConfigError("primes must be distinct")
        else:
            if not 31 <= self.prime_bits <= 62:
                raise ConfigError("prime bits must lie in [31, 62]")
            self.primes = gen_primes(self.prime_count, self.prime_bits, self.seed)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("cache_dir")  # a location, not an input of the computation
        return d


# -- shared state for the certificate jobs ------------------------------------

@dataclass
class Context:
    data: ArrangementData
    grad: tuple
    minors: MinorTable
    families: SyzygyFamilies
    primes: list[int]
    seed: int


def prepare(data: ArrangementData, config: RunConfig) -> Context:
    minors = build_minor_table(data.P)
    fams = syzygy_families(data.E, data.P)
    return Context(data, gradient(data.f), minors, fams, list(config.primes), config.seed)


def _cert(name, claim, ok, data, soundness, anchor, t0, primes=()) -> Certificate:
    return Certificate(name, claim, Verdict.PROVED if ok else Verdict.REFUTED, list(primes), None, data,
                       soundness, anchor, time.perf_counter() - t0)


def cert_construction(ctx: Context) -> Certificate:
    t0 = time.perf_counter()
    checks = dict(ctx.data.E.checks)
    inv = ctx.data.invariants
    f4 = ctx.data.basic[3]
    checks["s4 = 9 F8^2"] = inv is not None and inv.s[4] == 9 * inv.F8 ** 2
    checks["f4 = Hess(f1) / 265531392 has integer coefficients"] = f4.is_integral()
    checks["deg (f1, f2, f3, f4) = (8, 12, 20, 24)"] = tuple(p.degree for p in ctx.data.basic) == (8, 12, 20, 24)
    checks["deg f = 60"] = ctx.data.f.degree == 60
    data = {"checks": checks, "f_terms": len(ctx.data.f), "f4_terms": len(f4)}
    return _cert("construction", "f, the basic invariants and E satisfy every construction identity",
                 all(checks.values()), data, "exact arithmetic over Q", "s4 = 9 F8^2; E[j] = D[j] - g_j/60 D[1]", t0)


def cert_freeness(ctx: Context) -> Certificate:
    t0 = time.perf_counter()
    E = ctx.data.E
    det_ok = E.E.det() == DET_E_CONSTANT * ctx.data.f
    syz_ok = all(dot(E.column(j), ctx.grad).is_zero() for j in (1, 2, 3))
    degs = E.column_degrees
    data = {"det_E_over_f": DET_E_CONSTANT if det_ok else None, "column_degrees": list(degs),
            "columns_annihilate_grad_f": syz_ok}
    return _cert("freeness", "D(A) is free with basis E of degrees (1, 13, 17, 29)",
                 det_ok and syz_ok and degs == EXPONENTS, data,
                 "Saito criterion with exact determinant over Q", "det E = -486 f", t0)


def cert_primed(ctx: Context) -> Certificate:
    t0 = time.perf_counter()
    P = ctx.data.P
    coords = Polynomial.gens()
    degrees = {c: [p.degree for p in row] for c, row in zip("mnpq", P.rows)}
    terms = [len(p) for p in P.m]
    consistent = all(P.rows[i][j] * coords[i] == ctx.data.E.E[i, j + 1] for i in range(4) for j in range(3))
    ok = consistent and all(tuple(d) == PRIMED_DEGREES for d in degrees.values()) and tuple(terms) == M_PRIME_TERMS
    data = {"degrees": degrees, "m_prime_terms": terms, "x_i row_i = E rows": consistent}
    return _cert("primed-columns", "primed rows have degrees (28, 12, 16) and m' has (136, 24, 45) terms",
                 ok, data, "exact division over Q", "m_i = x m'_i", t0)


def cert_regseq(letter: str) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        row = ctx.data.P.letter(letter)
        return regular_sequence_certificate(row, ctx.seed, ctx.primes, name=f"regseq-{letter}",
                                            anchor=f"({letter}'1, {letter}'2, {letter}'3) regular in S")
    return run


def cert_divisibility(key: str) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        return next(c for c in ctx.minors.certificates if c.name == f"divisibility-{key}")
    return run


def cert_scan(key: str, expected=SCAN_MULTIDEGREE) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        gens = ctx.minors.reduced.get(key)
        if gens is None:
            gens = ctx.minors.minors[key]
        res = min_syzygy_scan(gens, SCAN_D_MAX, ctx.primes, name=f"scan-{key}",
                              anchor=f"lowest syzygy of {key}' has multidegree (24, 8, 12)"
                              if expected else f"lowest syzygy of {key}", expected=expected)
        return res.certificate
    return run


def cert_families(ctx: Context) -> Certificate:
    return check_families(ctx.families, ctx.minors, ctx.grad)


def cert_param_in_kernel(ctx: Context) -> Certificate:
    return template_wedge_certificate(ctx.minors, ctx.grad)


def cert_param_rank(k: int) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        M = param_matrix(k, ctx.minors)
        cert = kernel_trivial_certificate(M, ctx.primes, f"param-rank-k{k}",
                                          f"A' -> omega is injective in degree {k} ({PARAM_COLUMNS[k]} parameters)",
                                          "A'_i are unique")
        if M.ncols != PARAM_COLUMNS[k]:
            cert.verdict = Verdict.REFUTED
            cert.data["expected_cols"] = PARAM_COLUMNS[k]
        return cert
    return run


def cert_param_samples(ctx: Context) -> Certificate:
    t0 = time.perf_counter()
    rng = random.Random(f"arrmono-param/{ctx.seed}")
    ok = True
    failures = []
    for i in range(PARAM_SAMPLES):
        A = ParamVector.random(50, rng)
        try:
            param_omega(A, ctx.minors, grad=ctx.grad, families=ctx.families)
        except IdentityFailed as exc:
            ok = False
            failures.append(f"sample {i}: {exc.check}")
    return Certificate("param-samples-k50", f"{PARAM_SAMPLES} random A' give df ^ omega = 0 with consistent "
                       "shared coefficients", Verdict.PROVED if ok else Verdict.REFUTED, [], ctx.seed,
                       {"samples": PARAM_SAMPLES, "failures": failures}, "exact polynomial identities",
                       "df ^ omega = 0", time.perf_counter() - t0)


def cert_closedness(k: int, which=("E4",)) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        M = closedness_system(k, ctx.minors, which)
        tag = "".join(which)
        cert = kernel_trivial_certificate(M, ctx.primes, f"closedness-k{k}-{tag}",
                                          f"no nonzero parametrized omega of degree {k} satisfies {', '.join(which)}",
                                          "system (E4) has only the trivial solution")
        if k == 50 and tuple(which) == ("E4",) and M.shape != CLOSEDNESS_SHAPE_50:
            cert.verdict = Verdict.REFUTED
            cert.data["expected_shape"] = list(CLOSEDNESS_SHAPE_50)
        return cert
    return run


def cert_ar8(ctx: Context) -> Certificate:
    M = mult_map(ctx.grad, 59 + 8, provenance="grad f multiplication into degree 67")
    return kernel_trivial_certificate(M, ctx.primes, "ar8-trivial", "AR(f)_8 = 0", "AR(f)_8 = 0")


def cert_wedge(k: int, expected: int = 0, early_stop: bool = False) -> Callable[[Context], Certificate]:
    def run(ctx: Context) -> Certificate:
        _, cert = general_wedge_kernel(k, ctx.data.E, ctx.primes, expected=expected, early_stop=early_stop)
        return cert
    return run


# name -> job; order fixes the report layout
CHAIN = ["construction", "freeness", "primed-columns", "regseq-m", "regseq-n", "regseq-p", "regseq-q",
         "divisibility-MN", "divisibility-MP", "divisibility-MQ", "scan-MN", "scan-MP", "scan-MQ",
         "syzygy-families", "param-in-kernel"]

JOBS: dict[str, Callable[[Context], Certificate]] = {
    "construction": cert_construction,
    "freeness": cert_freeness,
    "primed-columns": cert_primed,
    **{f"regseq-{c}": cert_regseq(c) for c in "mnpq"},
    **{f"divisibility-{k}": cert_divisibility(k) for k in ("MN", "MP", "MQ")},
    **{f"scan-{k}": cert_scan(k) for k in ("MN", "MP", "MQ")},
    "syzygy-families": cert_families,
    "param-in-kernel": cert_param_in_kernel,
    "param-rank-k50": cert_param_rank(50),
    "param-samples-k50": cert_param_samples,
    "closedness-k50-E4": cert_closedness(50),
    "param-rank-k40": cert_param_rank(40),
    "closedness-k40-E4": cert_closedness(40),
    "ar8-trivial": cert_ar8,
    "wedge-kernel-k10": cert_wedge(10),
    "wedge-kernel-k20": cert_wedge(20),
    "wedge-kernel-k30": cert_wedge(30),
    "wedge-kernel-k40": cert_wedge(40, expected=PARAM_COLUMNS[40]),
}

HEAVY_JOBS: dict[str, Callable[[Context], Certificate]] = {
    "wedge-kernel-k50": cert_wedge(50, expected=PARAM_COLUMNS[50], early_stop=True),
}

# recorded, never part of the verdict
EXPERIMENTS: dict[str, Callable[[Context], Certificate]] = {
    "scan-PQ": cert_scan("PQ", expected=None),
    "closedness-k50-E1": cert_closedness(50, ("E1",)),
    "closedness-k50-E2": cert_closedness(50, ("E2",)),
    "closedness-k50-E3": cert_closedness(50, ("E3",)),
}

CASE_CERTS = {
    10: ["construction", "freeness", "ar8-trivial", "wedge-kernel-k10"],
    20: ["construction", "freeness", "wedge-kernel-k20"],
    30: ["construction", "freeness", "wedge-kernel-k30"],
    # the direct kernel bound makes the parametrization complete in degree 40
    40: ["construction", "freeness", "param-in-kernel", "param-rank-k40", "wedge-kernel-k40", "closedness-k40-E4"],
    50: CHAIN + ["param-rank-k50", "param-samples-k50", "closedness-k50-E4"],
}

STEP_GROUPS = {
    "freeness": ["construction", "freeness", "primed-columns"],
    "regseq": ["regseq-m", "regseq-n", "regseq-p", "regseq-q"],
    "minors": ["divisibility-MN", "divisibility-MP", "divisibility-MQ", "syzygy-families"],
    "scan": ["scan-MN", "scan-MP", "scan-MQ"],
}


def jobs_for_case(k: int) -> list[str]:
    return list(CASE_CERTS[k])


# -- execution ----------------------------------------------------------------

_ACTIVE: tuple[Context, dict] | None = None


def _run_named(name: str) -> Certificate:
    ctx, table = _ACTIVE
    return _guarded(name, table[name], ctx)


def _guarded(name: str, job, ctx: Context) -> Certificate:
    t0 = time.perf_counter()
    try:
        return job(ctx)
    except IdentityFailed as exc:
        return Certificate(name, "identity check", Verdict.REFUTED, [], None, {"failed": exc.check}, "exact", "",
                           time.perf_counter() - t0)


def run_jobs(ctx: Context, names: Sequence[str], table: dict, threads: int = 1) -> dict[str, Certificate]:
    """Run the named certificate jobs; results do not depend on ``threads``."""
    global _ACTIVE
    names = list(dict.fromkeys(names))
    if threads <= 1 or len(names) <= 1:
        return {n: _guarded(n, table[n], ctx) for n in names}
    _ACTIVE = (ctx, table)
    try:
        # forked workers inherit the context; results come back in input order
        with multiprocessing.get_context("fork").Pool(min(threads, len(names))) as pool:
            certs = pool.map(_run_named, names, chunksize=1)
    finally:
        _ACTIVE = None
    return dict(zip(names, certs))


def acquire(config: RunConfig, fresh: bool = False) -> tuple[ArrangementData, str]:
    """Arrangement data from the cache, or a fresh exact construction.

    ``fresh`` always rebuilds so that every construction identity is checked
    in this run; the cache entry is then rewritten if it is missing or stale.
    """
    if not fresh:
        return load_or_build(Path(config.cache_dir) if config.cache_dir else None)
    data = construct()
    if config.cache_dir:
        store(data, Path(config.cache_dir))
        return data, "refreshed"
    return data, "nocache"


def build_cases(certs: dict[str, Certificate]) -> list[MonodromyCase]:
    cases = []
    for k in CASES:
        names = CASE_CERTS[k]
        ok = all(n in certs and certs[n].proved for n in names)
        refuted = any(n in certs and certs[n].verdict is Verdict.REFUTED for n in names)
        verdict = Verdict.PROVED if ok else (Verdict.REFUTED if refuted else Verdict.INCONCLUSIVE)
        cases.append(MonodromyCase(k, 0 if ok else None, list(names), verdict))
    return cases


def two_sided(certs: dict[str, Certificate], k: int) -> None:
    """Upgrade the mod-p kernel bound in degree k to an equality when the
    parametrization supplies the matching lower bound."""
    c = certs.get(f"wedge-kernel-k{k}")
    if c is None:
        return
    dim = c.data.get("kernel_dim_upper_bound")
    lower = all(n in certs and certs[n].proved for n in (f"param-rank-k{k}", "param-in-kernel"))
    if dim == PARAM_COLUMNS[k] and lower and c.verdict is Verdict.PROVED:
        c.claim = f"dim ker(df ^ : Omega^2_{k} -> Omega^3) = {PARAM_COLUMNS[k]}"
        extra = f"; lower bound {PARAM_COLUMNS[k]} from the injective parametrization"
        if not c.soundness.endswith(extra):
            c.soundness += extra
    elif dim is not None and dim < PARAM_COLUMNS[k] and lower:
        # contradicts the exact lower bound: an implementation fault
        c.verdict = Verdict.REFUTED


def heavy_summary(certs: dict[str, Certificate], enabled: bool) -> dict:
    if not enabled:
        return {"wedge-kernel-k50": "skipped",
                "note": "only E2 = 0 in degree 50 is asserted; dim ker(df ^)_50 >= 1424 from the parametrization"}
    c = certs["wedge-kernel-k50"]
    return {"wedge-kernel-k50": c.verdict.value, "dimension": c.data.get("kernel_dim_upper_bound")}


def run_pipeline(config: RunConfig, fault: str | None = None,
                 progress: Callable[[str], None] | None = None) -> tuple[dict, int]:
    """Run every certificate and assemble the report. Returns (report, exit code).

    ``fault`` names a certificate whose verdict is overwritten with Refuted
    after it ran; it exists to test that the verdict logic fails closed.
    """
    t_start = time.perf_counter()
    data, cache_status = acquire(config, fresh=True)
    ctx = prepare(data, config)
    t_prep = time.perf_counter() - t_start
    table = dict(JOBS)
    names = list(JOBS)
    if config.heavy_oracles:
        table.update(HEAVY_JOBS)
        table.update(EXPERIMENTS)
        names += list(HEAVY_JOBS) + list(EXPERIMENTS)
    if progress:
        progress(f"running {len(names)} certificates")
    results = run_jobs(ctx, names, table, config.threads)
    report, code = assemble(config.to_dict(), results, config.heavy_oracles, fault)
    report["runtime"] = {
        "cache": cache_status,
        "total_seconds": round(time.perf_counter() - t_start, 3),
        "prepare_seconds": round(t_prep, 3),
        "certificate_seconds": {n: round(c.wall_time, 3) for n, c in results.items()},
    }
    return report, code


def assemble(config: dict, results: dict[str, Certificate], heavy_enabled: bool,
             fault: str | None = None) -> tuple[dict, int]:
    """Turn finished certificates into the report body (no runtime block) and exit code."""
    if fault is not None:
        if fault not in results:
            raise ConfigError(f"unknown certificate {fault!r}")
        results[fault].verdict = Verdict.REFUTED
        results[fault].data["fault_injected"] = True
    expected = list(JOBS) + (list(HEAVY_JOBS) if heavy_enabled else [])
    certs = {n: results[n] for n in expected if n in results}
    experiments = {n: results[n] for n in EXPERIMENTS if n in results}
    for k in (40, 50):
        two_sided(certs, k)
    heavy = heavy_summary(certs, heavy_enabled)
    cases = build_cases(certs)
    final = monodromy_report(cases, certs)
    first_bad = _first_failing(certs, expected)
    if final.verdict is Verdict.PROVED and first_bad is None:
        code = 0
        conclusion = f"h1 = identity on H1(F), b1(F) = {final.b1}"
    else:
        code = 1 if any(c.verdict is Verdict.REFUTED for c in certs.values()) else 2
        final.verdict = Verdict.REFUTED if code == 1 else Verdict.INCONCLUSIVE
        conclusion = "monodromy not determined"
        if first_bad and not final.failing:
            state = certs[first_bad].verdict.value if first_bad in certs else "missing"
            final.failing.append(f"{first_bad} is {state}")
    verdict = final.to_dict()
    verdict["conclusion"] = conclusion
    verdict["first_failing"] = first_bad
    report = {
        "report_version": REPORT_VERSION,
        "tool": "arrmono",
        "tool_version": __version__,
        "config": config,
        "certificates": [c.to_dict() for c in certs.values()],
        "experiments": [c.to_dict() for c in experiments.values()],
        "heavy_oracles": heavy,
        "cases": [c.to_dict() for c in cases],
        "verdict": verdict,
        "notes": NOTES,
    }
    return report, code


def _first_failing(certs: dict[str, Certificate], expected: list[str]) -> str | None:
    return next((n for n in expected if n not in certs or not certs[n].proved), None)


def rejudge(report: dict, fault: str | None = None) -> tuple[dict, int]:
    """Recompute cases and verdict from the certificates stored in a report.

    No arithmetic is redone, so this takes well under a second.
    """
    stored = report["certificates"] + report.get("experiments", [])
    results = {d["name"]: Certificate.from_dict(copy.deepcopy(d)) for d in stored}
    heavy_enabled = bool(report["config"].get("heavy_oracles"))
    new, code = assemble(copy.deepcopy(report["config"]), results, heavy_enabled, fault)
    if "runtime" in report:
        new["runtime"] = report["runtime"]
    return new, code


# -- serialization --------------------------------------------------------------

def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def strip_runtime(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "runtime"}


def load_schema() -> dict:
    return json.loads(resources.files("arrmono").joinpath("report_schema.json").read_text())


def validate(report: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if the report does not match the shipped schema."""
    import jsonschema

    jsonschema.validate(report, load_schema())


def tsv_lines(report: dict) -> list[str]:
    lines = ["name\tverdict\tclaim\tanchor"]
    for c in report["certificates"]:
        lines.append("\t".join((c["name"], c["verdict"], c["claim"], c["anchor"])))
    for c in report.get("experiments", []):
        lines.append("\t".join((c["name"], f"experiment:{c['verdict']}", c["claim"], c["anchor"])))
    v = report["verdict"]
    lines.append("\t".join(("VERDICT", v["verdict"], v["conclusion"], "")))
    return lines
