"""Koszul-complex computations for the G31 polynomial f in degrees k < 60.

For k < 60 nothing of degree k lies in the image of ``df ^`` on 1-forms, so
the degree-k part of H^2 of the Koszul complex is the literal kernel of
``df ^`` on 2-forms, and a class survives to the second page exactly when
the representing form is closed (``d omega = 0``).

Two-form coefficients are indexed by pairs 12, 13, 14, 23, 24, 34 of the
coordinates x = 1, y = 2, z = 3, t = 4. The four wedge relations R1..R4 are
the coefficients of ``df ^ omega`` on dy dz dt, dx dz dt, dx dy dt and
dx dy dz; as vectors of coefficients of (f_x, f_y, f_z, f_t):

    R1 = (0, a34, -a24, a23)     R2 = (a34, 0, -a14, a13)
    R3 = (a24, -a14, 0, a12)     R4 = (a23, -a13, a12, 0)
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .g31build import IdentityFailed, PrimedColumns, SyzygyBasis
from .gradlin import Certificate, GradedMap, Verdict, kernel_trivial_certificate, rank_mod_p, vector_map
from .poly import NotDivisible, Polynomial, mono_basis
from .exactring import BadPrime

__all__ = [
    "PAIRS",
    "TwoForm",
    "MinorTable",
    "ParamVector",
    "SyzygyFamilies",
    "MonodromyCase",
    "Report",
    "wedge_residuals",
    "d_residuals",
    "exterior_d_one_form",
    "build_minor_table",
    "syzygy_families",
    "check_families",
    "templates",
    "template_wedge_certificate",
    "param_degrees",
    "param_omega",
    "param_from_families",
    "param_matrix",
    "closedness_system",
    "general_wedge_kernel",
    "monodromy_report",
    "EIGENVALUE_ORDERS",
    "CASE_PAIRS",
]

PAIRS = ("12", "13", "14", "23", "24", "34")
LETTERS = "MNPQ"
MINOR_INDEX = ("23", "13", "12")
QUARTIC_DIVISORS = {"MN": 1, "MP": 2, "MQ": 3}  # x^4 - (y, z, t)^4

x, y, z, t = Polynomial.gens()
COORDS = (x, y, z, t)


@dataclass(frozen=True)
class TwoForm:
    k: int
    a12: Polynomial
    a13: Polynomial
    a14: Polynomial
    a23: Polynomial
    a24: Polynomial
    a34: Polynomial

    def __post_init__(self):
        for name in PAIRS:
            p = self[name]
            if not p.homogenize_check(self.k - 2):
                raise ValueError(f"a{name} is not homogeneous of degree {self.k - 2}")

    def __getitem__(self, pair: str) -> Polynomial:
        return getattr(self, "a" + pair)

    @classmethod
    def zero(cls, k: int) -> "TwoForm":
        z0 = Polynomial.zero()
        return cls(k, z0, z0, z0, z0, z0, z0)

    @classmethod
    def from_dict(cls, k: int, coeffs: dict[str, Polynomial]) -> "TwoForm":
        return cls(k, *(coeffs.get(p, Polynomial.zero()) for p in PAIRS))

    def as_dict(self) -> dict[str, Polynomial]:
        return {p: self[p] for p in PAIRS}

    def __add__(self, other: "TwoForm") -> "TwoForm":
        return TwoForm(self.k, *(self[p] + other[p] for p in PAIRS))

    def scale(self, c) -> "TwoForm":
        return TwoForm(self.k, *(self[p] * c for p in PAIRS))

    def is_zero(self) -> bool:
        return all(self[p].is_zero() for p in PAIRS)


def _grad(f_or_grad) -> Sequence[Polynomial]:
    if isinstance(f_or_grad, Polynomial):
        return tuple(f_or_grad.diff(i) for i in range(4))
    return tuple(f_or_grad)


def wedge_residuals(omega: TwoForm, f) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    """Left-hand sides of R1..R4; ``f`` may be the polynomial or its gradient."""
    fx, fy, fz, ft = _grad(f)
    a = omega
    return (
        a.a34 * fy - a.a24 * fz + a.a23 * ft,
        a.a34 * fx - a.a14 * fz + a.a13 * ft,
        a.a24 * fx - a.a14 * fy + a.a12 * ft,
        a.a23 * fx - a.a13 * fy + a.a12 * fz,
    )


def d_residuals(omega: TwoForm) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    """Coefficients of d(omega) on dy dz dt, dx dz dt, dx dy dt, dx dy dz (E1..E4)."""
    a = omega
    return (
        a.a23.diff(3) - a.a24.diff(2) + a.a34.diff(1),
        a.a13.diff(3) - a.a14.diff(2) + a.a34.diff(0),
        a.a12.diff(3) - a.a14.diff(1) + a.a24.diff(0),
        a.a12.diff(2) - a.a13.diff(1) + a.a23.diff(0),
    )


def exterior_d_one_form(b: Sequence[Polynomial], k: int) -> TwoForm:
    """d(sum b_i dx_i) as a 2-form of degree k."""
    coeffs = {}
    for pair in PAIRS:
        i, j = int(pair[0]) - 1, int(pair[1]) - 1
        coeffs[pair] = b[j].diff(i) - b[i].diff(j)
    return TwoForm.from_dict(k, coeffs)


# -- minors ------------------------------------------------------------------

@dataclass
class MinorTable:
    """2x2 minors of pairs of primed rows.

    ``minors["MN"] = (MN23, MN13, MN12)`` with ``MN_ij = m'_i n'_j - m'_j n'_i``;
    ``reduced`` holds MN, MP, MQ divided by x^4 - y^4, x^4 - z^4, x^4 - t^4.
    """

    minors: dict[str, tuple[Polynomial, Polynomial, Polynomial]]
    reduced: dict[str, tuple[Polynomial, Polynomial, Polynomial]]
    certificates: list[Certificate] = field(default_factory=list)

    def minor(self, r: int, c: int, which: int) -> Polynomial:
        """Minor for letters r < c (0..3) and index 0 -> 23, 1 -> 13, 2 -> 12."""
        return self.minors[LETTERS[r] + LETTERS[c]][which]


def _minor_triple(a: Sequence[Polynomial], b: Sequence[Polynomial]):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[0] * b[2] - a[2] * b[0],
        a[0] * b[1] - a[1] * b[0],
    )


def build_minor_table(P: PrimedColumns) -> MinorTable:
    rows = P.rows
    minors = {}
    for r in range(4):
        for c in range(r + 1, 4):
            minors[LETTERS[r] + LETTERS[c]] = _minor_triple(rows[r], rows[c])
    reduced = {}
    certs = []
    for key, var in QUARTIC_DIVISORS.items():
        t0 = time.perf_counter()
        divisor = x ** 4 - COORDS[var] ** 4
        vname = "xyzt"[var]
        try:
            reduced[key] = tuple(m.exact_div(divisor, f"{key}{idx}") for m, idx in zip(minors[key], MINOR_INDEX))
            verdict = Verdict.PROVED
            data = {"reduced_degrees": [p.degree for p in reduced[key]],
                    "reduced_terms": [len(p) for p in reduced[key]]}
        except NotDivisible as exc:
            verdict = Verdict.REFUTED
            data = {"obstruction": str(exc)}
        certs.append(Certificate(
            f"divisibility-{key}", f"every {key}_ij is divisible by x^4 - {vname}^4", verdict, [], None, data,
            "exact polynomial division over Q", f"{key}_ij divisible by x^4-{vname}^4",
            time.perf_counter() - t0))
    return MinorTable(minors, reduced, certs)


# -- syzygy families ---------------------------------------------------------

@dataclass
class SyzygyFamilies:
    """T, U, V, W: ``row'_a E[b] - row'_b E[a]`` for the primed rows m', n', p', q'."""

    families: dict[str, tuple[tuple[Polynomial, ...], ...]]

    def __getitem__(self, name: str):
        return self.families[name]


def syzygy_families(E: SyzygyBasis, P: PrimedColumns) -> SyzygyFamilies:
    cols = [E.column(j) for j in (1, 2, 3)]  # E[2], E[3], E[4]
    fams = {}
    for name, row in zip("TUVW", P.rows):
        members = []
        for a, b in ((1, 2), (0, 2), (0, 1)):
            members.append(tuple(row[a] * cols[b][i] - row[b] * cols[a][i] for i in range(4)))
        fams[name] = tuple(members)
    return SyzygyFamilies(fams)


def check_families(F: SyzygyFamilies, M: MinorTable, grad: Sequence[Polynomial]) -> Certificate:
    t0 = time.perf_counter()
    failures = []
    degrees = {}
    for r, name in enumerate("TUVW"):
        degrees[name] = []
        for i, vec in enumerate(F[name]):
            acc = Polynomial.zero()
            for comp, g in zip(vec, grad):
                acc = acc + comp * g
            if not acc.is_zero():
                failures.append(f"{name}{i + 1} does not annihilate grad f")
            if not vec[r].is_zero():
                failures.append(f"{name}{i + 1} coordinate {r + 1} nonzero")
            for c in range(4):
                if c == r:
                    continue
                expected = M.minor(min(r, c), max(r, c), i) * COORDS[c]
                if c < r:
                    expected = -expected
                if vec[c] != expected:
                    failures.append(f"{name}{i + 1} component {c + 1} differs from the minor formula")
            degrees[name].append(max(p.degree for p in vec))
    for name, degs in degrees.items():
        if degs != [29, 45, 41]:
            failures.append(f"{name} degrees {degs}")
    verdict = Verdict.PROVED if not failures else Verdict.REFUTED
    return Certificate("syzygy-families", "T, U, V, W lie in AR(f) with degrees (29, 45, 41)", verdict, [], None,
                       {"degrees": degrees, "failures": failures}, "exact polynomial identities",
                       "deg T_1=29, deg T_2=45, deg T_3=41", time.perf_counter() - t0)


# -- parametrization ---------------------------------------------------------

def param_degrees(k: int) -> tuple[int, int, int]:
    return (k - 32, k - 48, k - 44)


@dataclass(frozen=True)
class ParamVector:
    k: int
    A1: Polynomial
    A2: Polynomial
    A3: Polynomial

    def __post_init__(self):
        for p, d in zip(self.parts, param_degrees(self.k)):
            if d < 0 and not p.is_zero():
                raise ValueError(f"parameter of negative degree {d} must vanish")
            if d >= 0 and not p.homogenize_check(d):
                raise ValueError(f"parameter not homogeneous of degree {d}")

    @property
    def parts(self) -> tuple[Polynomial, Polynomial, Polynomial]:
        return (self.A1, self.A2, self.A3)

    @classmethod
    def random(cls, k: int, rng, coeff_range: int = 5, nterms: int | None = 3) -> "ParamVector":
        """Random parameters; ``nterms=None`` uses every monomial."""
        parts = []
        for d in param_degrees(k):
            if d < 0:
                parts.append(Polynomial.zero())
                continue
            basis = mono_basis(d)
            if nterms is not None and nterms < len(basis):
                basis = rng.sample(basis, nterms)
            parts.append(Polynomial({e: rng.randint(-coeff_range, coeff_range) for e in basis}))
        return cls(k, *parts)


# for each pair: (sign, multiplier pair of coordinates, letters) in a_ij = sign * x_a x_b * sum A'_i L_i
_TEMPLATE = {
    "34": (1, (0, 1), "MN"),
    "24": (-1, (0, 2), "MP"),
    "23": (1, (0, 3), "MQ"),
    "14": (1, (1, 2), "NP"),
    "13": (-1, (1, 3), "NQ"),
    "12": (1, (2, 3), "PQ"),
}


def templates(M: MinorTable) -> list[dict[str, Polynomial]]:
    """The 2-forms obtained from A' = (1, 0, 0), (0, 1, 0), (0, 0, 1)."""
    out = []
    for i in range(3):
        coeffs = {}
        for pair, (sign, (a, b), letters) in _TEMPLATE.items():
            coeffs[pair] = M.minors[letters][i] * (COORDS[a] * COORDS[b]) * sign
        out.append(coeffs)
    return out


def param_omega(A: ParamVector, M: MinorTable, grad: Sequence[Polynomial] | None = None,
                families: SyzygyFamilies | None = None) -> TwoForm:
    """The 2-form attached to parameters A'.

    With ``families`` the four relations are rebuilt independently as
    ``x sum A'_i T_i``, ``-y sum A'_i U_i``, ``z sum A'_i V_i``,
    ``-t sum A'_i W_i`` and every shared coefficient is compared across its
    two host relations. With ``grad`` the wedge residuals are checked to
    vanish. Either failure raises IdentityFailed.
    """
    coeffs = {p: Polynomial.zero() for p in PAIRS}
    for Ai, tmpl in zip(A.parts, templates(M)):
        if Ai.is_zero():
            continue
        for pair in PAIRS:
            coeffs[pair] = coeffs[pair] + Ai * tmpl[pair]
    omega = TwoForm.from_dict(A.k, coeffs)
    if families is not None:
        recon = param_from_families(A, families)
        for pair, values in recon.items():
            if any(v != omega[pair] for v in values):
                raise IdentityFailed(f"a{pair} reconstructions agree")
    if grad is not None:
        if any(not r.is_zero() for r in wedge_residuals(omega, grad)):
            raise IdentityFailed("df ^ omega = 0")
    return omega


# (relation index, coordinate, sign) hosting each coefficient: R_rel[coord] = sign * a_pair
HOSTS = {
    "34": ((0, 1, 1), (1, 0, 1)),
    "24": ((0, 2, -1), (2, 0, 1)),
    "23": ((0, 3, 1), (3, 0, 1)),
    "14": ((1, 2, -1), (2, 1, -1)),
    "13": ((1, 3, 1), (3, 1, -1)),
    "12": ((2, 3, 1), (3, 2, 1)),
}


def param_from_families(A: ParamVector, F: SyzygyFamilies) -> dict[str, tuple[Polynomial, Polynomial]]:
    """Each a_ij as read off from both relations that contain it."""
    rel = []
    for r, (name, sign) in enumerate(zip("TUVW", (1, -1, 1, -1))):
        vec = [Polynomial.zero()] * 4
        for Ai, member in zip(A.parts, F[name]):
            if Ai.is_zero():
                continue
            vec = [v + Ai * c for v, c in zip(vec, member)]
        rel.append([v * COORDS[r] * sign for v in vec])
    out = {}
    for pair, hosts in HOSTS.items():
        out[pair] = tuple(rel[ri][ci] * s for ri, ci, s in hosts)
    return out


def param_matrix(k: int, M: MinorTable) -> GradedMap:
    """A' coefficients -> the six a_ij coefficient vectors in S_{k-2}."""
    gens = []
    for i, (d, tmpl) in enumerate(zip(param_degrees(k), templates(M))):
        if d >= 0:
            gens.append((f"A{i + 1}", tuple(tmpl[p] for p in PAIRS)))
    return vector_map(gens, [(f"a{p}", k - 2) for p in PAIRS], f"param_matrix(k={k})")


def closedness_system(k: int, M: MinorTable, which: Sequence[str] = ("E4",)) -> GradedMap:
    """Composition of :func:`param_matrix` with the chosen rows of the exterior derivative."""
    which = tuple(which)
    sel = [int(w[1]) - 1 for w in which]
    pm = param_matrix(k, M)
    tmpls = templates(M)
    blocks = [(f"A{i + 1}", d, tmpls[i]) for i, d in enumerate(param_degrees(k)) if d >= 0]

    def source():
        for _, d, tmpl in blocks:
            for e in mono_basis(d):
                omega = TwoForm.from_dict(k, {p: tmpl[p].mul_monomial(e) for p in PAIRS})
                res = d_residuals(omega)
                yield [res[s] for s in sel]

    return GradedMap(pm.domain, [(w, k - 3) for w in which], source,
                     f"closedness_system(k={k}, {'+'.join(which)})")


def template_wedge_certificate(M: MinorTable, grad: Sequence[Polynomial]) -> Certificate:
    """The three parameter templates satisfy df ^ omega = 0 exactly.

    The parametrization is S-linear in A', so this proves that every
    parametrized form, in every degree, lies in the kernel of df ^.
    """
    t0 = time.perf_counter()
    bad = []
    for i, tmpl in enumerate(templates(M)):
        deg = tmpl["34"].degree + 2
        res = wedge_residuals(TwoForm.from_dict(deg, tmpl), grad)
        bad += [f"A{i + 1}:R{j + 1}" for j, r in enumerate(res) if not r.is_zero()]
    return Certificate("param-in-kernel", "every parametrized 2-form satisfies df ^ omega = 0",
                       Verdict.PROVED if not bad else Verdict.REFUTED, [], None, {"nonzero_residuals": bad},
                       "exact polynomial identities; S-linearity in A'", "df ^ omega = 0",
                       time.perf_counter() - t0)


# -- direct route: kernel of df ^ through the free basis ----------------------

def general_wedge_kernel(k: int, E: SyzygyBasis, primes: Sequence[int],
                         expected: int | None = 0, early_stop: bool = False) -> tuple[int, Certificate]:
    """dim {omega in Omega^2_k : df ^ omega = 0} through the free basis of AR(f).

    Each relation R_i is a syzygy, so ``R_i = sum_j c_ij E[j]`` with unique
    ``c_ij`` in degree ``k - 2 - deg E[j]``. Unknowns: all c_ij. Equations:
    coordinate i of R_i vanishes, and each a_pq agrees in its two host
    relations. The solution space maps isomorphically onto the kernel.

    The returned dimension is the mod-p kernel dimension, an upper bound
    for the dimension over Q; a value of 0 is a proof. With ``early_stop``
    the remaining primes are skipped once the bound reaches ``expected``.
    """
    t0 = time.perf_counter()
    cols = [E.column(j) for j in (1, 2, 3)]
    degs = [max(p.degree for p in c) for c in cols]
    codomain = [(f"R{i + 1}[{i + 1}]", k - 2) for i in range(4)] + [(f"a{p}", k - 2) for p in HOSTS]
    gens = []
    for i in range(4):
        for j, (col, d) in enumerate(zip(cols, degs)):
            comps: list[Polynomial | None] = [None] * 10
            comps[i] = col[i]
            for b, (pair, hosts) in enumerate(HOSTS.items()):
                for h, (ri, ci, s) in enumerate(hosts):
                    if ri == i:
                        # equation: s0 * R_r0[c0] - s1 * R_r1[c1] = 0 (both equal a_pair)
                        sign = s if h == 0 else -s
                        comps[4 + b] = col[ci] * sign
            if k - 2 - d >= 0:
                gens.append((f"R{i + 1}.E{j + 2}", comps))
    M = vector_map(gens, codomain, f"wedge_kernel(k={k})")
    ranks = {}
    if M.ncols:
        for p in primes:
            try:
                ranks[str(p)] = rank_mod_p(M, p)
            except BadPrime:
                ranks[str(p)] = None
            # with a matching lower bound no further prime can tighten the bound
            if early_stop and expected is not None and ranks[str(p)] is not None \
                    and M.ncols - ranks[str(p)] <= expected:
                break
    best = max([r for r in ranks.values() if r is not None], default=0)
    dim = M.ncols - best
    data = {"rows": M.nrows, "cols": M.ncols, "rank_mod_p": ranks, "kernel_dim_upper_bound": dim}
    if expected is None:
        verdict = Verdict.PROVED if dim == 0 else Verdict.INCONCLUSIVE
    elif expected == 0:
        verdict = Verdict.PROVED if dim == 0 else Verdict.INCONCLUSIVE
    else:
        # equality needs a lower bound from elsewhere; here only dim <= bound is shown
        verdict = Verdict.PROVED if dim <= expected else Verdict.INCONCLUSIVE
    cert = Certificate(f"wedge-kernel-k{k}", f"dim ker(df ^ : Omega^2_{k} -> Omega^3) <= {dim}"
                       if expected is None else f"dim ker(df ^ : Omega^2_{k} -> Omega^3) <= {expected}",
                       verdict, list(primes), None, data,
                       "kernel dimension mod p bounds the rational kernel dimension from above",
                       f"H^2(K_f)_{k}", time.perf_counter() - t0)
    return dim, cert


# -- monodromy decision ------------------------------------------------------

D_ARR = 60
N_HYPERPLANES = 60
# Plane-section singularities are double, triple and sixfold points, so any
# eigenvalue of h^1 has order dividing 2, 3 or 6.
EIGENVALUE_ORDERS = (1, 2, 3, 6)
SECTION_SINGULARITIES = {"double points": 360, "triple points": 320, "points of multiplicity 6": 30}
CASE_PAIRS = {6: (10, 50), 3: (20, 40), 2: (30, 30)}


@dataclass
class MonodromyCase:
    k: int
    e2_dim: int | None
    certificates: list[str]
    verdict: Verdict
    d: int = D_ARR

    @property
    def k_prime(self) -> int:
        return self.d - self.k

    @property
    def eigenvalue(self) -> tuple[int, int]:
        """exp(-2 pi i k / d), stored as the reduced fraction k/d."""
        f = Fraction(self.k, self.d)
        return (f.numerator, f.denominator)

    def to_dict(self) -> dict:
        return {"k": self.k, "k_prime": self.k_prime, "d": self.d, "eigenvalue_exponent": list(self.eigenvalue),
                "e2_dim": self.e2_dim, "certificates": self.certificates, "verdict": self.verdict.value}


@dataclass
class Report:
    verdict: Verdict
    conclusion: str
    b1: int | None
    eigenvalue_orders: dict[str, str]
    failing: list[str]
    cases: list[MonodromyCase]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "conclusion": self.conclusion,
            "b1": self.b1,
            "eigenvalue_orders": self.eigenvalue_orders,
            "admissible_orders": list(EIGENVALUE_ORDERS),
            "section_singularities": SECTION_SINGULARITIES,
            "failing": self.failing,
            "cases": [c.to_dict() for c in self.cases],
        }


def monodromy_report(cases: Sequence[MonodromyCase], certificates: dict[str, Certificate] | None = None) -> Report:
    """Apply the pairwise vanishing criterion to the computed cases.

    The eigenvalue exp(-2 pi i k / 60) is absent from H^1(F) iff the second
    page terms in degrees k and 60 - k both vanish. Orders 6, 3, 2 need the
    pairs (10, 50), (20, 40), (30, 30). Any case or prerequisite that is not
    Proved makes the whole verdict non-Proved.
    """
    by_k = {c.k: c for c in cases}
    certificates = certificates or {}
    failing = []
    for c in cases:
        for name in c.certificates:
            cert = certificates.get(name)
            if cert is None:
                failing.append(f"k={c.k}: missing certificate {name}")
            elif not cert.proved:
                failing.append(f"k={c.k}: {name} is {cert.verdict.value}")
        if not c.verdict == Verdict.PROVED:
            failing.append(f"k={c.k}: case verdict {c.verdict.value}")
    refuted = any(cert.verdict is Verdict.REFUTED for c in cases for n in c.certificates
                  if (cert := certificates.get(n)) is not None) or any(c.verdict is Verdict.REFUTED for c in cases)
    orders = {}
    for order, (k1, k2) in CASE_PAIRS.items():
        c1, c2 = by_k.get(k1), by_k.get(k2)
        ok = (c1 is not None and c2 is not None and c1.e2_dim == 0 and c2.e2_dim == 0
              and not any(s.startswith((f"k={k1}:", f"k={k2}:")) for s in failing))
        orders[str(order)] = "excluded" if ok else "not excluded"
        if c1 is None or c2 is None:
            failing.append(f"order {order}: missing case k in {(k1, k2)}")
    if not failing and all(v == "excluded" for v in orders.values()):
        # h^1 = id, so H^1(F) = H^1(F)_1, which has dimension |A| - 1
        return Report(Verdict.PROVED, "h1 = identity on H1(F)", N_HYPERPLANES - 1, orders, [], list(cases))
    verdict = Verdict.REFUTED if refuted else Verdict.INCONCLUSIVE
    return Report(verdict, "monodromy not determined", None, orders, failing, list(cases))
