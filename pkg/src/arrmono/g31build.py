"""Construction of the G31 arrangement polynomial, its basic invariants and a
basis of Jacobian syzygies, with every stated identity checked exactly."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Polynomial, PolyMatrix, dot, hessian, jacobian

__all__ = [
    "IdentityFailed",
    "ARRANGEMENT_FACTORS",
    "HESS_NORMALIZER",
    "DET_E_CONSTANT",
    "InvariantSet",
    "SyzygyBasis",
    "PrimedColumns",
    "arrangement_factors",
    "build_f",
    "gradient",
    "build_invariants",
    "build_syzygy_basis",
    "primed_columns",
]

HESS_NORMALIZER = 265531392
DET_E_CONSTANT = -486
EULER_WEIGHT = 60
EXPONENTS = (1, 29, 13, 17)
PRIMED_DEGREES = (28, 12, 16)


class IdentityFailed(AssertionError):
    """A construction identity did not hold exactly."""

    def __init__(self, check: str, detail: str = ""):
        self.check = check
        super().__init__(f"identity {check!r} failed" + (f": {detail}" if detail else ""))


x, y, z, t = Polynomial.gens()


def arrangement_factors() -> list[Polynomial]:
    """The defining factors of the 60 hyperplanes, grouped over Q.

    Four coordinate hyperplanes, six quartics u^4 - v^4 (four lines each) and
    sixteen quadratics (two lines each, conjugate over Q(i) for the sums of
    squares). 4 + 24 + 32 = 60.
    """
    out = [x, y, z, t]
    coords = (x, y, z, t)
    for i in range(4):
        for j in range(i + 1, 4):
            out.append(coords[i] ** 4 - coords[j] ** 4)
    for a in (x - y, x + y):
        for b in (z + t, z - t):
            out.append(a ** 2 - b ** 2)
    for a in (x - y, x + y):
        for b in (z + t, z - t):
            out.append(a ** 2 + b ** 2)
    for a in (x - z, x + z):
        for b in (y + t, y - t):
            out.append(a ** 2 + b ** 2)
    for a in (x - t, x + t):
        for b in (y + z, y - z):
            out.append(a ** 2 + b ** 2)
    return out


ARRANGEMENT_FACTORS = tuple(arrangement_factors())


def build_f() -> Polynomial:
    f = Polynomial.one()
    for g in ARRANGEMENT_FACTORS:
        f = f * g
    if not f.homogenize_check(60) or not f.is_integral():
        raise IdentityFailed("f homogeneous of degree 60 with integer coefficients")
    return f


def gradient(p: Polynomial) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
    return tuple(p.diff(i) for i in range(4))


@dataclass(frozen=True)
class InvariantSet:
    a: Polynomial
    b: Polynomial
    c: Polynomial
    d: Polynomial
    e: Polynomial
    A: tuple[Polynomial, ...]
    s: tuple[Polynomial, ...]
    F8: Polynomial
    F12: Polynomial
    F20: Polynomial
    f1: Polynomial
    f2: Polynomial
    f3: Polynomial
    f4: Polynomial
    hess_f1: Polynomial

    @property
    def basic(self) -> tuple[Polynomial, Polynomial, Polynomial, Polynomial]:
        return (self.f1, self.f2, self.f3, self.f4)


def build_invariants() -> InvariantSet:
    a = x ** 4 + y ** 4 + z ** 4 + t ** 4
    b = x ** 2 * y ** 2 + z ** 2 * t ** 2
    c = x ** 2 * z ** 2 + y ** 2 * t ** 2
    d = x ** 2 * t ** 2 + y ** 2 * z ** 2
    e = x * y * z * t
    A = (
        a + 6 * (-b - c - d),
        a + 6 * (-b + c + d),
        a + 6 * (b - c + d),
        a + 6 * (b + c - d),
        -2 * a - 24 * e,
        -2 * a + 24 * e,
    )
    # coefficients of prod (u + A_i) = sum s_j u^(6-j): elementary symmetric functions
    s = [Polynomial.one()] + [Polynomial.zero()] * 6
    for Ai in A:
        s = [s[0]] + [s[j] + Ai * s[j - 1] for j in range(1, 7)]
    F8 = s[2] * Fraction(-1, 6)
    F12 = s[3] * Fraction(-1, 4)
    F20 = s[5] * Fraction(1, 12)
    if s[4] != 9 * F8 ** 2:
        raise IdentityFailed("s4 = 9 F8^2")
    hess_f1 = hessian(F8).det()
    f4 = hess_f1 / HESS_NORMALIZER
    inv = InvariantSet(a, b, c, d, e, A, tuple(s), F8, F12, F20, F8, F12, F20, f4, hess_f1)
    for p, deg in zip(inv.basic, (8, 12, 20, 24)):
        if not p.homogenize_check(deg):
            raise IdentityFailed(f"basic invariant homogeneous of degree {deg}")
    return inv


@dataclass(frozen=True)
class SyzygyBasis:
    """Saito matrix E: column 0 is the Euler derivation, columns 1..3 span AR(f)."""

    E: PolyMatrix
    g: tuple[Polynomial, Polynomial, Polynomial]
    checks: dict[str, bool] = field(default_factory=dict, compare=False)
    trace: dict[str, object] = field(default_factory=dict, compare=False, repr=False)

    @property
    def column_degrees(self) -> tuple[int, ...]:
        return tuple(max(p.degree for p in self.E.column(j)) for j in range(4))

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return self.E.column(j)


def _check(checks: dict[str, bool], name: str, ok: bool, detail: str = ""):
    checks[name] = bool(ok)
    if not ok:
        raise IdentityFailed(name, detail)


def build_syzygy_basis(inv: InvariantSet, f: Polynomial) -> SyzygyBasis:
    """Orlik-Terao recipe: B = adj(H(f1)) J(f) C, D = B / (b11 / x), then
    subtract the Euler part from each column so it annihilates f."""
    checks: dict[str, bool] = {}
    H = hessian(inv.f1)
    Adj = H.adjugate()
    hess = inv.hess_f1
    _check(checks, "H(f1) adj(H(f1)) = Hess(f1) I", H @ Adj == PolyMatrix.identity().scale(hess)
           and Adj @ H == PolyMatrix.identity().scale(hess))
    J = jacobian(inv.basic)
    zero, one = 0, 1
    C = PolyMatrix([
        [one, zero, zero, zero],
        [zero, inv.f4, inv.f1 * Fraction(-1, 5), inv.f2 * Fraction(-1, 1620)],
        [zero, zero, one, zero],
        [zero, zero, zero, one],
    ])
    B = Adj @ J @ C
    g = B[0, 0].exact_div(x, "b11 / x")
    D = B.map(lambda p: p.exact_div(g, "B / g"))
    euler = (x, y, z, t)
    _check(checks, "D[1] = (x, y, z, t)", D.column(0) == euler)
    grad = gradient(f)
    _check(checks, "D[1] f = 60 f", dot(euler, grad) == EULER_WEIGHT * f)
    gs = [Polynomial.zero()]
    for j in (1, 2, 3):
        gs.append(dot(D.column(j), grad).exact_div(f, f"D[{j + 1}] f / f"))
    cols = []
    for j in range(4):
        cj = gs[j] * Fraction(1, EULER_WEIGHT)
        cols.append([D[i, j] - cj * euler[i] for i in range(4)])
    E = PolyMatrix.from_columns(cols)
    for j in (1, 2, 3):
        _check(checks, f"E[{j + 1}] . grad f = 0", dot(E.column(j), grad).is_zero())
    degs = tuple(max(p.degree for p in E.column(j)) for j in range(4))
    homog = all(p.homogenize_check(degs[j]) for j in range(4) for p in E.column(j))
    _check(checks, "column degrees (1, 29, 13, 17)", homog and degs == EXPONENTS, str(degs))
    _check(checks, "det E = -486 f", E.det() == DET_E_CONSTANT * f)
    trace = {"H": H, "adj": Adj, "J": J, "C": C, "B": B, "g": g, "D": D}
    return SyzygyBasis(E, (gs[1], gs[2], gs[3]), checks, trace)


@dataclass(frozen=True)
class PrimedColumns:
    """Rows of E[2..4] with the coordinate factor removed: E[i][j+1] = x_i * row_i[j]."""

    m: tuple[Polynomial, Polynomial, Polynomial]
    n: tuple[Polynomial, Polynomial, Polynomial]
    p: tuple[Polynomial, Polynomial, Polynomial]
    q: tuple[Polynomial, Polynomial, Polynomial]

    @property
    def rows(self) -> tuple[tuple[Polynomial, ...], ...]:
        return (self.m, self.n, self.p, self.q)

    def letter(self, name: str) -> tuple[Polynomial, Polynomial, Polynomial]:
        return getattr(self, name.lower())


def primed_columns(E: SyzygyBasis) -> PrimedColumns:
    rows = []
    for i, v in enumerate((x, y, z, t)):
        row = tuple(E.E[i, j].exact_div(v, f"E[{i + 1},{j + 1}] / {'xyzt'[i]}") for j in (1, 2, 3))
        if tuple(p.degree for p in row) != PRIMED_DEGREES:
            raise IdentityFailed("primed degrees (28, 12, 16)", str([p.degree for p in row]))
        rows.append(row)
    return PrimedColumns(*rows)
