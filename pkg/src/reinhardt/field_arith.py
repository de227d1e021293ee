"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Elements are ``p + q*sqrt(d)`` with rational ``p`` and ``q``.  A value whose
radical part vanishes is stored with ``d = 1`` so that it mixes freely with
elements of any field; two elements carrying different radicals cannot be
combined.

Vectors are plain tuples of :class:`QuadNum`, matrices are lists of such
tuples.  The linear algebra helpers at the bottom (row reduction, rank,
null space) never round.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, "QuadNum"]


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class FieldMismatch(ValueError):
    """Raised when elements of two different quadratic fields meet."""


class QuadNum:
    """Immutable element ``p + q*sqrt(d)`` of Q(sqrt(d))."""

    __slots__ = ("_p", "_q", "_d")

    def __init__(self, p: Rational = 0, q: Rational = 0, d: int = 1) -> None:
        p = Fraction(p)
        q = Fraction(q)
        if d != 1 and not is_squarefree(d):
            raise ValueError(f"radicand {d} is not square-free")
        if d == 1:
            if q != 0:
                # sqrt(1) = 1 folds into the rational part
                p, q = p + q, Fraction(0)
        elif q == 0:
            d = 1
        self._p = p
        self._q = q
        self._d = d

    @classmethod
    def _raw(cls, p: Fraction, q: Fraction, d: int) -> QuadNum:
        obj = object.__new__(cls)
        if q == 0:
            d = 1
        obj._p = p
        obj._q = q
        obj._d = d
        return obj

    @property
    def p(self) -> Fraction:
        return self._p

    @property
    def q(self) -> Fraction:
        return self._q

    @property
    def d(self) -> int:
        return self._d

    def is_rational(self) -> bool:
        return self._q == 0

    # -- coercion -----------------------------------------------------------

    @staticmethod
    def coerce(x: Scalar) -> QuadNum:
        if isinstance(x, QuadNum):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadNum._raw(Fraction(x), Fraction(0), 1)
        raise TypeError(f"cannot convert {type(x).__name__} to QuadNum exactly")

    def _common_d(self, other: QuadNum) -> int:
        if self._d == other._d or other._d == 1:
            return self._d
        if self._d == 1:
            return other._d
        raise FieldMismatch(f"sqrt({self._d}) and sqrt({other._d}) in one expression")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Scalar) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common_d(o)
        return QuadNum._raw(self._p + o._p, self._q + o._q, d)

    __radd__ = __add__

    def __neg__(self) -> QuadNum:
        return QuadNum._raw(-self._p, -self._q, self._d)

    def __pos__(self) -> QuadNum:
        return self

    def __sub__(self, other: Scalar) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common_d(o)
        return QuadNum._raw(self._p - o._p, self._q - o._q, d)

    def __rsub__(self, other: Scalar) -> QuadNum:
        return (-self) + other

    def __mul__(self, other: Scalar) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        if o._q == 0:
            return QuadNum._raw(self._p * o._p, self._q * o._p, self._d)
        if self._q == 0:
            return QuadNum._raw(self._p * o._p, self._p * o._q, o._d)
        d = self._common_d(o)
        return QuadNum._raw(
            self._p * o._p + d * self._q * o._q,
            self._p * o._q + self._q * o._p,
            d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadNum:
        return QuadNum._raw(self._p, -self._q, self._d)

    def norm(self) -> Fraction:
        """Field norm ``p^2 - d q^2``; zero only for the zero element."""
        return self._p * self._p - self._d * self._q * self._q

    def inverse(self) -> QuadNum:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadNum division by zero")
        return QuadNum._raw(self._p / n, -self._q / n, self._d)

    def __truediv__(self, other: Scalar) -> QuadNum:
        try:
            o = QuadNum.coerce(other)
        except TypeError:
            return NotImplemented
        if o._q == 0:
            if o._p == 0:
                raise ZeroDivisionError("QuadNum division by zero")
            return QuadNum._raw(self._p / o._p, self._q / o._p, self._d)
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> QuadNum:
        return QuadNum.coerce(other) * self.inverse()

    # -- comparison ---------------------------------------------------------

    def sign(self) -> int:
        return qsign(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._q == 0 and self._p == other
        if isinstance(other, QuadNum):
            return self._p == other._p and self._q == other._q and (
                self._q == 0 or self._d == other._d
            )
        return NotImplemented

    def __hash__(self) -> int:
        if self._q == 0:
            return hash(self._p)
        return hash((self._p, self._q, self._d))

    def _cmp(self, other: Scalar) -> int:
        return qsign(self - other)

    def __lt__(self, other: Scalar) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other: Scalar) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other: Scalar) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other: Scalar) -> bool:
        return self._cmp(other) >= 0

    def __abs__(self) -> QuadNum:
        return -self if qsign(self) < 0 else self

    def __bool__(self) -> bool:
        return self._p != 0 or self._q != 0

    def __float__(self) -> float:
        return qfloat(self)

    def floor(self) -> int:
        """Exact floor, found from a float guess and corrected exactly."""
        try:
            f = math.floor(qfloat(self))
        except OverflowError:
            f = math.floor(self._p + self._q * math.isqrt(self._d))
        while self < f:
            f -= 1
        while self >= f + 1:
            f += 1
        return f

    # -- text ---------------------------------------------------------------

    def __repr__(self) -> str:
        return f"QuadNum({format_quadnum(self)!r})"

    def __str__(self) -> str:
        return format_quadnum(self)


def qsign(x: QuadNum) -> int:
    """Sign of ``p + q*sqrt(d)`` decided without rounding."""
    p, q, d = x.p, x.q, x.d
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    # opposite signs: the larger of p^2 and d*q^2 wins
    lhs = p * p
    rhs = d * q * q
    if lhs > rhs:
        return sp
    return sq


def qsplit(x: QuadNum) -> tuple[Fraction, Fraction]:
    return x.p, x.q


def qfloat(x: QuadNum) -> float:
    """Nearest float to ``x``; only for numeric code, never for predicates.

    Raises ``OverflowError`` when a component exceeds the float range.
    """
    p, q, d = x.p, x.q, x.d
    if q == 0:
        return float(p)
    root = math.sqrt(d)
    if (p >= 0) == (q >= 0) or p == 0:
        return float(p) + float(q) * root
    # p + q r = (p^2 - d q^2) / (p - q r) avoids cancellation
    return float(p * p - d * q * q) / (float(p) - float(q) * root)


_RAT_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_RADICAL_RE = re.compile(r"^(?P<head>.*?)\*?sqrt\((?P<d>\d+)\)$")


def _parse_rat(s: str, text: str) -> Fraction:
    if not _RAT_RE.match(s):
        raise ValueError(f"malformed field element {text!r}")
    return Fraction(s)


def parse_quadnum(text: str) -> QuadNum:
    """Parse ``"p/q"`` or ``"a/b+c/e*sqrt(d)"`` (whitespace-free)."""
    s = text.strip()
    m = _RADICAL_RE.match(s)
    if m is None:
        return QuadNum(_parse_rat(s, text))
    d = int(m.group("d"))
    head = m.group("head")
    if head in ("", "+", "-"):
        return QuadNum(0, -1 if head == "-" else 1, d)
    if head[-1] in "+-":
        # bare radical after a rational part: "a+sqrt(d)", "a-sqrt(d)", "a+-sqrt(d)"
        q = -1 if head[-1] == "-" else 1
        rest = head[:-1]
        if rest.endswith("+"):
            rest = rest[:-1]
        return QuadNum(_parse_rat(rest, text), q, d)
    if not s[len(head)] == "*":
        raise ValueError(f"malformed field element {text!r}")
    # split "a+c" / "a-c" / "a+-c" at the sign that starts the radical coefficient
    cut = None
    for i in range(len(head) - 1, 0, -1):
        if head[i] in "+-" and head[i - 1] not in "+-/":
            cut = i
            break
    if cut is None:
        return QuadNum(0, _parse_rat(head, text), d)
    p = _parse_rat(head[:cut], text)
    qs = head[cut + 1 :] if head[cut] == "+" else head[cut:]
    return QuadNum(p, _parse_rat(qs, text), d)


def _fmt_rat(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_quadnum(x: QuadNum) -> str:
    if x.q == 0:
        return _fmt_rat(x.p)
    return f"{_fmt_rat(x.p)}+{_fmt_rat(x.q)}*sqrt({x.d})"


# ---------------------------------------------------------------------------
# vectors

FieldVector = tuple  # tuple[QuadNum, ...]


def vec(entries: Iterable[Scalar]) -> FieldVector:
    return tuple(QuadNum.coerce(e) for e in entries)


def field_of(vectors: Iterable[Sequence[QuadNum]]) -> int:
    """Common radicand of all entries (1 when everything is rational)."""
    d = 1
    for v in vectors:
        for x in v:
            if x.d != 1:
                if d != 1 and d != x.d:
                    raise FieldMismatch(f"sqrt({d}) and sqrt({x.d}) in one object")
                d = x.d
    return d


def dot(a: Sequence[QuadNum], b: Sequence[Scalar]) -> QuadNum:
    acc = QuadNum()
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def vadd(a: Sequence[QuadNum], b: Sequence[QuadNum]) -> FieldVector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence[QuadNum], b: Sequence[QuadNum]) -> FieldVector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c: Scalar, a: Sequence[QuadNum]) -> FieldVector:
    return tuple(x * c for x in a)


def is_zero(a: Sequence[QuadNum]) -> bool:
    return not any(a)


def is_rational_vector(a: Sequence[QuadNum]) -> bool:
    return all(x.q == 0 for x in a)


def to_floats(a: Sequence[QuadNum]) -> list[float]:
    return [qfloat(x) for x in a]


def unit(n: int, j: int) -> FieldVector:
    return tuple(QuadNum(1 if i == j else 0) for i in range(n))


def primitive_integer(a: Sequence[QuadNum]) -> FieldVector:
    """Positive multiple of a rational vector with coprime integer entries."""
    if not is_rational_vector(a):
        raise ValueError("vector has irrational entries")
    fracs = [x.p for x in a]
    den = 1
    for f in fracs:
        den = den * f.denominator // math.gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    if g == 0:
        return vec(ints)
    return vec(i // g for i in ints)


def normalize_direction(a: Sequence[QuadNum]) -> FieldVector:
    """Canonical positive multiple of a nonzero vector.

    Rational vectors become primitive integer vectors.  Otherwise the vector
    is scaled so that its last nonzero rational entry has modulus one (or, if
    every nonzero entry is irrational, its last nonzero entry).
    """
    if is_zero(a):
        return tuple(a)
    if is_rational_vector(a):
        return primitive_integer(a)
    pivot = None
    for x in reversed(a):
        if x and x.q == 0:
            pivot = x
            break
    if pivot is None:
        pivot = next(x for x in reversed(a) if x)
    return vscale(abs(pivot).inverse(), a)


def parallel_same_direction(a: Sequence[QuadNum], b: Sequence[QuadNum]) -> bool:
    """True iff ``a = c*b`` for some c > 0 (both nonzero)."""
    k = next((i for i, x in enumerate(b) if x), None)
    if k is None or not a[k]:
        return False
    c = a[k] / b[k]
    if c <= 0:
        return False
    return all(x == y * c for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# matrices (lists of row tuples)


def row_reduce(rows: Sequence[Sequence[QuadNum]]) -> tuple[list[list[QuadNum]], list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[QuadNum]]) -> int:
    return len(row_reduce(rows)[1])


def row_basis(rows: Sequence[Sequence[QuadNum]]) -> list[FieldVector]:
    """A basis of the row span (the nonzero rows of the reduced form)."""
    reduced, _ = row_reduce(rows)
    return [tuple(r) for r in reduced]


def nullspace(rows: Sequence[Sequence[QuadNum]], ncols: int) -> list[FieldVector]:
    """Basis of ``{x : r . x = 0 for every row r}``."""
    if not rows:
        return [unit(ncols, j) for j in range(ncols)]
    reduced, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [QuadNum() for _ in range(ncols)]
        x[f] = QuadNum(1)
        for r, pc in zip(reduced, pivots):
            x[pc] = -r[f]
        basis.append(tuple(x))
    return basis


def solve_in_span(basis: Sequence[Sequence[QuadNum]], v: Sequence[QuadNum]) -> list[QuadNum] | None:
    """Coefficients ``t`` with ``sum t_i basis_i = v``, or None if v is outside the span."""
    k = len(basis)
    n = len(v)
    # augmented system: columns are basis vectors, one row per coordinate
    rows = [[basis[i][l] for i in range(k)] + [v[l]] for l in range(n)]
    reduced, pivots = row_reduce(rows)
    if k in pivots:
        return None
    t = [QuadNum() for _ in range(k)]
    for r, pc in zip(reduced, pivots):
        t[pc] = r[k]
    return t
