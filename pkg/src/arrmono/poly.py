"""Sparse polynomials in x, y, z, t over the rationals, and 4x4 polynomial matrices.

Monomials are packed into a single integer, 16 bits per exponent with x in
the top field, so the product of two monomials is one integer addition and
comparing packed keys of equal total degree is lexicographic comparison.
The canonical term order is graded lex with x > y > z > t.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .exactring import Coefficient

__all__ = [
    "VARS",
    "NotDivisible",
    "Polynomial",
    "PolyMatrix",
    "mono_basis",
    "mono_dim",
    "pack",
    "unpack",
    "hessian",
    "jacobian",
    "parse_poly4",
]

VARS = ("x", "y", "z", "t")
_SHIFT = (48, 32, 16, 0)
_MASK = 0xFFFF
_MAX_DEGREE = _MASK

Exp = tuple  # (e1, e2, e3, e4)


def pack(e: Sequence[int]) -> int:
    return (e[0] << 48) | (e[1] << 32) | (e[2] << 16) | e[3]


def unpack(k: int) -> tuple[int, int, int, int]:
    return (k >> 48, (k >> 32) & _MASK, (k >> 16) & _MASK, k & _MASK)


def _kdeg(k: int) -> int:
    return (k >> 48) + ((k >> 32) & _MASK) + ((k >> 16) & _MASK) + (k & _MASK)


def mono_dim(d: int, nvars: int = 4) -> int:
    """dim of the degree-d piece of a polynomial ring in ``nvars`` variables."""
    if d < 0:
        return 0
    return math.comb(d + nvars - 1, nvars - 1)


def mono_basis(d: int, variables: Sequence[int] = (0, 1, 2, 3)) -> list[tuple[int, int, int, int]]:
    """All degree-d monomials in the given variables, descending graded lex.

    Exponent vectors are always 4-tuples; variables not listed get exponent 0
    (this is the 3-variable restricted mode used by slicing).
    """
    if d < 0:
        return []
    variables = tuple(sorted(variables))
    out = []

    def rec(i: int, left: int, acc: list[int]):
        if i == len(variables) - 1:
            acc[variables[i]] = left
            out.append(tuple(acc))
            return
        for e in range(left, -1, -1):
            acc[variables[i]] = e
            rec(i + 1, left - e, acc)
        acc[variables[i]] = 0

    rec(0, d, [0, 0, 0, 0])
    return out


def _norm(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class NotDivisible(ArithmeticError):
    """Exact division failed; ``term`` is the first remainder term that blocked it."""

    def __init__(self, term: tuple[tuple[int, ...], Coefficient], what: str = ""):
        self.term = term
        msg = f"not divisible: obstructed at term {term[1]}*{_fmt_mono(term[0])}"
        super().__init__(f"{what}: {msg}" if what else msg)


def _fmt_mono(e: Sequence[int]) -> str:
    parts = []
    for v, n in zip(VARS, e):
        if n == 1:
            parts.append(v)
        elif n:
            parts.append(f"{v}^{n}")
    return "*".join(parts) or "1"


class Polynomial:
    """Immutable sparse polynomial in x, y, z, t with int or Fraction coefficients."""

    __slots__ = ("_t", "_deg", "_homog", "_integral", "_hash", "_split")

    def __init__(self, terms: Mapping[Sequence[int], Coefficient] | None = None):
        packed: dict[int, Coefficient] = {}
        for e, c in (terms or {}).items():
            if len(e) != 4 or min(e) < 0:
                raise ValueError(f"bad exponent vector {e!r}")
            if sum(e) > _MAX_DEGREE:
                raise ValueError("total degree exceeds 16 bits")
            if not isinstance(c, (int, Fraction)):
                raise TypeError(f"coefficient {c!r} is not an exact int or Fraction")
            c = _norm(c)
            if c:
                k = pack(e)
                packed[k] = _norm(packed.get(k, 0) + c)
                if not packed[k]:
                    del packed[k]
        self._init(packed)

    def _init(self, packed: dict[int, Coefficient]):
        self._t = packed
        self._deg = None
        self._homog = None
        self._integral = None
        self._hash = None
        self._split = None

    @classmethod
    def _raw(cls, packed: dict[int, Coefficient]) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._init(packed)
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._raw({})

    @classmethod
    def const(cls, c: Coefficient) -> "Polynomial":
        c = _norm(Fraction(c)) if not isinstance(c, int) else c
        return cls._raw({0: c} if c else {})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls._raw({0: 1})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls._raw({1 << _SHIFT[i]: 1})

    @classmethod
    def gens(cls) -> tuple["Polynomial", "Polynomial", "Polynomial", "Polynomial"]:
        return tuple(cls.var(i) for i in range(4))

    @classmethod
    def monomial(cls, e: Sequence[int], c: Coefficient = 1) -> "Polynomial":
        return cls({tuple(e): c})

    # -- inspection -------------------------------------------------------
    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_zero(self) -> bool:
        return not self._t

    @property
    def terms(self) -> dict[tuple[int, int, int, int], Coefficient]:
        return {unpack(k): c for k, c in self._t.items()}

    def items(self) -> list[tuple[tuple[int, int, int, int], Coefficient]]:
        """Terms in canonical (descending graded lex) order."""
        keys = sorted(self._t, key=lambda k: (_kdeg(k), k), reverse=True)
        return [(unpack(k), self._t[k]) for k in keys]

    def coefficient(self, e: Sequence[int]) -> Coefficient:
        return self._t.get(pack(e), 0)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._deg is None:
            self._scan_degrees()
        return self._deg

    def is_homogeneous(self) -> bool:
        if self._homog is None:
            self._scan_degrees()
        return self._homog

    def _scan_degrees(self):
        if not self._t:
            self._deg, self._homog = -1, True
            return
        degs = {_kdeg(k) for k in self._t}
        self._deg = max(degs)
        self._homog = len(degs) == 1

    def is_integral(self) -> bool:
        if self._integral is None:
            self._integral = all(isinstance(c, int) for c in self._t.values())
        return self._integral

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def leading_term(self) -> tuple[tuple[int, int, int, int], Coefficient]:
        if not self._t:
            raise ValueError("zero polynomial has no leading term")
        k = max(self._t, key=lambda k: (_kdeg(k), k))
        return unpack(k), self._t[k]

    def variables_used(self) -> set[int]:
        used = set()
        for k in self._t:
            for i, e in enumerate(unpack(k)):
                if e:
                    used.add(i)
        return used

    # -- content ------------------------------------------------------------
    def primitive(self) -> tuple[Fraction, "Polynomial"]:
        """Split as ``content * P`` with P integral and of content 1."""
        c, t = self._content_split()
        return c, Polynomial._raw(dict(t))

    def _content_split(self) -> tuple[Fraction, dict[int, int]]:
        if self._split is None:
            if not self._t:
                self._split = (Fraction(1), {})
            elif self.is_integral():
                g = reduce(math.gcd, self._t.values())
                if g == 1:
                    self._split = (Fraction(1), self._t)
                else:
                    self._split = (Fraction(g), {k: c // g for k, c in self._t.items()})
            else:
                den = reduce(math.lcm, (c.denominator for c in self._t.values() if isinstance(c, Fraction)), 1)
                ints = {k: int(c * den) for k, c in self._t.items()}
                g = reduce(math.gcd, ints.values())
                self._split = (Fraction(g, den), {k: c // g for k, c in ints.items()})
        return self._split

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({k: -c for k, c in self._t.items()})

    def __pos__(self):
        return self

    def _coerce(self, other) -> "Polynomial | None":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other)
        return None

    def __add__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o._t) > len(self._t):
            a, b = dict(o._t), self._t
        else:
            a, b = dict(self._t), o._t
        for k, c in b.items():
            v = a.get(k, 0) + c
            if v:
                a[k] = _norm(v)
            else:
                a.pop(k, None)
        return Polynomial._raw(a)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a = dict(self._t)
        for k, c in o._t.items():
            v = a.get(k, 0) - c
            if v:
                a[k] = _norm(v)
            else:
                a.pop(k, None)
        return Polynomial._raw(a)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def scale(self, c: Coefficient) -> "Polynomial":
        if not c:
            return Polynomial.zero()
        if isinstance(c, int):
            return Polynomial._raw({k: v * c for k, v in self._t.items()})
        c = Fraction(c)
        return Polynomial._raw({k: _norm(v * c) for k, v in self._t.items()})

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if not self._t or not other._t:
            return Polynomial.zero()
        if self.degree + other.degree > _MAX_DEGREE:
            raise ValueError("product degree exceeds 16 bits")
        ca, a = self._content_split()
        cb, b = other._content_split()
        if len(a) < len(b):
            a, b = b, a
        acc: dict[int, int] = {}
        get = acc.get
        for kb, vb in b.items():
            for ka, va in a.items():
                k = ka + kb
                acc[k] = get(k, 0) + va * vb
        c = ca * cb
        if c == 1:
            return Polynomial._raw({k: v for k, v in acc.items() if v})
        if c.denominator == 1:
            n = c.numerator
            return Polynomial._raw({k: v * n for k, v in acc.items() if v})
        return Polynomial._raw({k: _norm(v * c) for k, v in acc.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Polynomial":
        if isinstance(c, Polynomial):
            return self.exact_div(c)
        c = Fraction(c)
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero constant")
        return self.scale(1 / c)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power")
        result, base = Polynomial.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def mul_monomial(self, e: Sequence[int], c: Coefficient = 1) -> "Polynomial":
        s = pack(e)
        if c == 1:
            return Polynomial._raw({k + s: v for k, v in self._t.items()})
        return Polynomial._raw({k + s: _norm(v * c) for k, v in self._t.items()})

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._t == o._t

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._t.items()))
        return self._hash

    # -- calculus and division ----------------------------------------------
    def diff(self, var: int) -> "Polynomial":
        """Partial derivative; ``var`` is 0..3 for x, y, z, t."""
        sh = _SHIFT[var]
        one = 1 << sh
        out = {}
        for k, c in self._t.items():
            e = (k >> sh) & _MASK
            if e:
                out[k - one] = c * e
        return Polynomial._raw(out)

    def exact_div(self, q: "Polynomial", what: str = "") -> "Polynomial":
        """Return r with q*r == self, or raise NotDivisible."""
        if not q._t:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._t:
            return Polynomial.zero()
        (qe, qc) = q.leading_term()
        qk = pack(qe)
        qd = sum(qe)
        qinv = Fraction(1) / Fraction(qc)
        rem = dict(self._t)
        heap = [(-_kdeg(k), -k) for k in rem]
        heapq.heapify(heap)
        quot: dict[int, Coefficient] = {}
        qterms = list(q._t.items())
        while rem:
            nd, nk = heapq.heappop(heap)
            k = -nk
            c = rem.get(k)
            if c is None:
                continue
            mk = k - qk
            e = unpack(k)
            if -nd < qd or any(a < b for a, b in zip(e, qe)):
                raise NotDivisible((e, c), what)
            if isinstance(c, int) and isinstance(qc, int) and c % qc == 0:
                m = c // qc
            else:
                m = _norm(c * qinv)
            quot[mk] = m
            for kk, cc in qterms:
                t = mk + kk
                old = rem.get(t)
                if old is None:
                    rem[t] = _norm(-m * cc)
                    heapq.heappush(heap, (-_kdeg(t), -t))
                else:
                    v = old - m * cc
                    if v:
                        rem[t] = _norm(v)
                    else:
                        del rem[t]
        return Polynomial._raw(quot)

    def divides(self, p: "Polynomial") -> bool:
        try:
            p.exact_div(self)
        except NotDivisible:
            return False
        return True

    def eval(self, point: Sequence[Coefficient]) -> Coefficient:
        """Exact value at a point of Q^4."""
        pts = [Fraction(v) if not isinstance(v, int) else v for v in point]
        cache: list[dict[int, Coefficient]] = [{0: 1} for _ in range(4)]

        def pw(i: int, n: int):
            d = cache[i]
            if n not in d:
                d[n] = pts[i] ** n
            return d[n]

        total: Coefficient = 0
        for k, c in self._t.items():
            e1, e2, e3, e4 = unpack(k)
            total += c * pw(0, e1) * pw(1, e2) * pw(2, e3) * pw(3, e4)
        return _norm(total) if isinstance(total, Fraction) else total

    def substitute(self, var: int, value: "Polynomial") -> "Polynomial":
        """Replace the variable ``var`` by the polynomial ``value``."""
        sh = _SHIFT[var]
        by_power: dict[int, dict[int, Coefficient]] = {}
        for k, c in self._t.items():
            e = (k >> sh) & _MASK
            by_power.setdefault(e, {})[k - (e << sh)] = c
        out = Polynomial.zero()
        powers = {0: Polynomial.one()}
        for e in sorted(by_power):
            if e not in powers:
                powers[e] = value ** e
            out = out + Polynomial._raw(by_power[e]) * powers[e]
        return out

    def homogenize_check(self, degree: int) -> bool:
        return self.is_zero() or (self.is_homogeneous() and self.degree == degree)

    # -- text forms -----------------------------------------------------------
    def __repr__(self) -> str:
        if not self._t:
            return "0"
        out = []
        for e, c in self.items():
            mono = _fmt_mono(e)
            if mono == "1":
                s = str(c)
            elif c == 1:
                s = mono
            elif c == -1:
                s = "-" + mono
            else:
                s = f"{c}*{mono}"
            out.append(s)
        return " + ".join(out).replace("+ -", "- ")

    def serialize(self) -> str:
        """POLY4 v1 text; canonical and byte-exact for equal polynomials."""
        items = self.items()
        lines = [f"POLY4 v1 degree={self.degree} terms={len(items)}"]
        for e, c in items:
            c = Fraction(c)
            lines.append(f"{c.numerator}/{c.denominator} {e[0]} {e[1]} {e[2]} {e[3]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "Polynomial":
        return parse_poly4(text)


def parse_poly4(text: str) -> Polynomial:
    lines = text.strip("\n").split("\n")
    head = lines[0].split()
    if len(head) != 4 or head[:2] != ["POLY4", "v1"]:
        raise ValueError(f"bad POLY4 header: {lines[0]!r}")
    fields = dict(h.split("=", 1) for h in head[2:])
    degree, nterms = int(fields["degree"]), int(fields["terms"])
    body = lines[1:] if nterms else [ln for ln in lines[1:] if ln.strip()]
    if len(body) != nterms:
        raise ValueError(f"POLY4 term count mismatch: header {nterms}, body {len(body)}")
    terms: dict[int, Coefficient] = {}
    prev = None
    for ln in body:
        parts = ln.split()
        if len(parts) != 5:
            raise ValueError(f"bad POLY4 term line {ln!r}")
        num, den = parts[0].split("/")
        num, den = int(num), int(den)
        if den <= 0 or num == 0 or math.gcd(num, den) != 1:
            raise ValueError(f"non-canonical coefficient {parts[0]!r}")
        e = tuple(int(v) for v in parts[1:])
        k = pack(e)
        key = (sum(e), k)
        if prev is not None and key >= prev:
            raise ValueError("POLY4 terms out of canonical order")
        prev = key
        terms[k] = num if den == 1 else Fraction(num, den)
    p = Polynomial._raw(terms)
    if p.degree != degree:
        raise ValueError(f"POLY4 degree mismatch: header {degree}, body {p.degree}")
    return p


Entry = Union[Polynomial, int, Fraction]


class PolyMatrix:
    """Dense rectangular matrix of polynomials."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, entries: Iterable[Iterable[Entry]]):
        grid = [[e if isinstance(e, Polynomial) else Polynomial.const(e) for e in row] for row in entries]
        if not grid or any(len(r) != len(grid[0]) for r in grid):
            raise ValueError("PolyMatrix must be rectangular and non-empty")
        self.rows, self.cols = len(grid), len(grid[0])
        self._e = tuple(tuple(r) for r in grid)

    @classmethod
    def identity(cls, n: int = 4) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Entry]]) -> "PolyMatrix":
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(len(columns[0]))])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self._e[i][j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self._e[i]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(r[j] for r in self._e)

    def __iter__(self) -> Iterator[tuple[Polynomial, ...]]:
        return iter(self._e)

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self._e == other._e

    def __hash__(self):
        return hash(self._e)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix([self.column(j) for j in range(self.cols)])

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Polynomial.zero()
                for k in range(self.cols):
                    a, b = self._e[i][k], other._e[k][j]
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def scale(self, c: Entry) -> "PolyMatrix":
        return PolyMatrix([[e * c for e in r] for r in self._e])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(e) for e in r] for r in self._e])

    def minor(self, i: int, j: int) -> "PolyMatrix":
        return PolyMatrix([[e for c, e in enumerate(r) if c != j] for r0, r in enumerate(self._e) if r0 != i])

    def det(self) -> Polynomial:
        """Cofactor expansion along the column with the fewest terms."""
        if self.rows != self.cols:
            raise ValueError("det needs a square matrix")
        n = self.rows
        if n == 1:
            return self._e[0][0]
        if n == 2:
            return self._e[0][0] * self._e[1][1] - self._e[0][1] * self._e[1][0]
        j = min(range(n), key=lambda c: sum(len(self._e[i][c]) for i in range(n)))
        acc = Polynomial.zero()
        for i in range(n):
            a = self._e[i][j]
            if not a:
                continue
            term = a * self.minor(i, j).det()
            acc = acc + term if (i + j) % 2 == 0 else acc - term
        return acc

    def adjugate(self) -> "PolyMatrix":
        """Transposed cofactor matrix, so that M @ adj(M) == det(M) * I."""
        n = self.rows
        if n != self.cols:
            raise ValueError("adjugate needs a square matrix")
        if n == 1:
            return PolyMatrix([[1]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                m = self.minor(j, i).det()
                cof[i][j] = m if (i + j) % 2 == 0 else -m
        return PolyMatrix(cof)

    def degrees(self) -> list[list[int]]:
        return [[e.degree for e in r] for r in self._e]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, degrees={self.degrees()})"


def hessian(p: Polynomial) -> PolyMatrix:
    first = [p.diff(i) for i in range(4)]
    grid = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            grid[i][j] = grid[j][i] = first[i].diff(j)
    return PolyMatrix(grid)


def jacobian(ps: Sequence[Polynomial]) -> PolyMatrix:
    """Column j holds the four partial derivatives of ps[j]."""
    return PolyMatrix.from_columns([[p.diff(i) for i in range(4)] for p in ps])


def dot(u: Sequence[Polynomial], v: Sequence[Polynomial]) -> Polynomial:
    acc = Polynomial.zero()
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def random_homogeneous(rng, degree: int, nterms: int | None = None, coeff_range: int = 9,
                       variables: Sequence[int] = (0, 1, 2, 3)) -> Polynomial:
    """Seeded random homogeneous polynomial (test and oracle helper)."""
    basis = mono_basis(degree, variables)
    if nterms is None or nterms >= len(basis):
        chosen = basis
    else:
        chosen = rng.sample(basis, nterms)
    return Polynomial({e: rng.randint(-coeff_range, coeff_range) for e in chosen})

