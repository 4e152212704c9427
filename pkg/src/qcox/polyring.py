"""Exact arithmetic: rationals, univariate polynomials in q, square
polynomial matrices.

Coefficients are exact end to end.  A coefficient is a Python ``int`` or a
``fractions.Fraction``; the two mix freely and compare equal when they
represent the same rational, so no separate rational class is needed.
Polynomials are immutable coefficient tuples in ascending degree with no
trailing zeros (the zero polynomial is the empty tuple).  Matrices are
immutable row tuples of polynomials.

The determinant uses fraction-free Bareiss elimination; the ring is an
integral domain, so every Bareiss division is exact.  The unimodular
inverse stays inside the polynomial ring throughout: it never forms a
rational-function field.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import NotUnimodular

Rational = Fraction

_COEFF_TYPES = (int, Fraction)


def parse_rational(text: str) -> Fraction:
    """Parse ``"a"`` or ``"a/b"`` into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(value) -> str:
    """Render a rational as ``"a"`` or ``"a/b"`` in lowest terms."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Polynomial:
    """Dense univariate polynomial in q with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        for c in cs:
            if not isinstance(c, _COEFF_TYPES):
                raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def _make(cls, cs: list) -> "Polynomial":
        # internal: cs already int/Fraction, may carry trailing zeros
        while cs and not cs[-1]:
            cs.pop()
        p = object.__new__(cls)
        object.__setattr__(p, "coeffs", tuple(cs))
        return p

    @classmethod
    def coerce(cls, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, _COEFF_TYPES):
            return cls._make([value])
        raise TypeError(f"cannot interpret {type(value).__name__} as a polynomial")

    @classmethod
    def monomial(cls, coeff, degree: int) -> "Polynomial":
        if degree < 0:
            raise ValueError("degree must be non-negative")
        return cls._make([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self):
        """The constant it equals, or None if degree > 0."""
        if not self.coeffs:
            return 0
        if len(self.coeffs) == 1:
            return self.coeffs[0]
        return None

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, _COEFF_TYPES):
            if not other:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        cs = list(a)
        for i, c in enumerate(b):
            cs[i] = cs[i] + c
        return Polynomial._make(cs)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._make([-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _ZERO
        cs = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    cs[i + j] += ca * cb
        return Polynomial._make(cs)

    __rmul__ = __mul__

    def exact_div(self, divisor: "Polynomial") -> "Polynomial":
        """Divide by a polynomial that divides self exactly.

        Used by Bareiss steps, whose divisions are exact over an integral
        domain; a nonzero remainder means corrupted input and raises.
        """
        d = divisor.coeffs
        if not d:
            raise ZeroDivisionError("polynomial division by zero")
        if len(d) == 1:
            c = d[0]
            if c == 1:
                return self
            if c == -1:
                return -self
            return Polynomial._make([Fraction(a, 1) / c if isinstance(a, int) else a / c
                                     for a in self.coeffs])
        rem = list(self.coeffs)
        dn = len(d)
        lead = d[-1]
        quot = [0] * max(len(rem) - dn + 1, 0)
        for k in range(len(rem) - dn, -1, -1):
            top = rem[k + dn - 1]
            if not top:
                continue
            f = Fraction(top, 1) / lead if isinstance(top, int) else top / lead
            quot[k] = f
            for i, c in enumerate(d):
                rem[k + i] -= f * c
        if any(rem):
            raise ArithmeticError("inexact polynomial division")
        return Polynomial._make(quot)

    def evaluate(self, q0) -> Fraction:
        """Evaluate at an exact rational point (Horner)."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * q0 + c
        return acc

    def to_coeff_strings(self) -> list[str]:
        """Serialize as ascending coefficient strings, e.g. 1+2q^2 -> ["1","0","2"]."""
        return [format_rational(Fraction(c)) for c in self.coeffs]

    @classmethod
    def from_coeff_strings(cls, items: Sequence[str]) -> "Polynomial":
        return cls(parse_rational(s) for s in items)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for deg, c in enumerate(self.coeffs):
            if not c:
                continue
            neg = c < 0
            mag = -c if neg else c
            mag_s = format_rational(Fraction(mag))
            if deg == 0:
                body = mag_s
            else:
                var = "q" if deg == 1 else f"q^{deg}"
                if mag == 1:
                    body = var
                elif mag.denominator == 1:
                    body = f"{mag_s}{var}"
                else:
                    body = f"({mag_s}){var}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"-{body}" if neg else f"+{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


_ZERO = Polynomial._make([])
_ONE = Polynomial._make([1])

ZERO = _ZERO
ONE = _ONE
MINUS_ONE = Polynomial._make([-1])
Q = Polynomial._make([0, 1])


def poly_vector(values: Iterable) -> tuple[Polynomial, ...]:
    """Coerce a sequence of ints/Fractions/Polynomials to a polynomial vector."""
    return tuple(Polynomial.coerce(v) for v in values)


def _dot(row: Sequence[Polynomial], col: Sequence[Polynomial]) -> Polynomial:
    # accumulates the convolution directly; skips zero factors, which makes
    # products of near-identity matrices cheap
    acc: list = []
    for a, b in zip(row, col):
        ac, bc = a.coeffs, b.coeffs
        if not ac or not bc:
            continue
        need = len(ac) + len(bc) - 1
        if len(acc) < need:
            acc.extend([0] * (need - len(acc)))
        for i, ca in enumerate(ac):
            if not ca:
                continue
            for j, cb in enumerate(bc):
                if cb:
                    acc[i + j] += ca * cb
    return Polynomial._make(acc)


class PolyMatrix:
    """Immutable square matrix over the polynomial ring.

    Vectors are columns: the matrix of a linear map holds the image of the
    j-th basis vector in column j.
    """

    __slots__ = ("n", "rows")

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(Polynomial.coerce(e) for e in row) for row in rows)
        n = len(rs)
        if n == 0:
            raise ValueError("matrix order must be positive")
        for row in rs:
            if len(row) != n:
                raise ValueError("matrix must be square")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rows", rs)

    @classmethod
    def _make(cls, rows: list[list[Polynomial]]) -> "PolyMatrix":
        m = object.__new__(cls)
        object.__setattr__(m, "n", len(rows))
        object.__setattr__(m, "rows", tuple(tuple(r) for r in rows))
        return m

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls._make([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> Polynomial:
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Polynomial, ...]:
        return tuple(row[j] for row in self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_order(other)
        return PolyMatrix._make([[a + b for a, b in zip(ra, rb)]
                                 for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_order(other)
        return PolyMatrix._make([[a - b for a, b in zip(ra, rb)]
                                 for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix._make([[-a for a in row] for row in self.rows])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        self._check_order(other)
        cols = list(zip(*other.rows))
        return PolyMatrix._make([[_dot(row, col) for col in cols] for row in self.rows])

    def scaled(self, factor) -> "PolyMatrix":
        f = Polynomial.coerce(factor)
        return PolyMatrix._make([[f * a for a in row] for row in self.rows])

    def mul_vector(self, vec: Sequence) -> tuple[Polynomial, ...]:
        v = poly_vector(vec)
        if len(v) != self.n:
            raise ValueError(f"vector length {len(v)} != matrix order {self.n}")
        return tuple(_dot(row, v) for row in self.rows)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix._make([list(col) for col in zip(*self.rows)])

    def permuted(self, order: Sequence[int]) -> "PolyMatrix":
        """Reindex rows and columns: entry'(a, b) = entry(order[a], order[b])."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of the indices")
        return PolyMatrix._make([[self.rows[i][j] for j in order] for i in order])

    def is_identity(self) -> bool:
        return all(e == (_ONE if i == j else _ZERO)
                   for i, row in enumerate(self.rows) for j, e in enumerate(row))

    def is_symmetric(self) -> bool:
        return all(self.rows[i][j] == self.rows[j][i]
                   for i in range(self.n) for j in range(i))

    def is_lower_unitriangular(self) -> bool:
        return all(self.rows[i][i] == _ONE for i in range(self.n)) and \
            all(self.rows[i][j].is_zero() for i in range(self.n) for j in range(i + 1, self.n))

    def det(self) -> Polynomial:
        """Determinant by fraction-free Bareiss elimination."""
        n = self.n
        if n == 1:
            return self.rows[0][0]
        m = [list(row) for row in self.rows]
        sign = 1
        prev = _ONE
        for k in range(n - 1):
            piv = next((r for r in range(k, n) if m[r][k]), None)
            if piv is None:
                return _ZERO
            if piv != k:
                m[k], m[piv] = m[piv], m[k]
                sign = -sign
            pivot = m[k][k]
            for i in range(k + 1, n):
                mik = m[i][k]
                row_i = m[i]
                row_k = m[k]
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - mik * row_k[j]).exact_div(prev)
                row_i[k] = _ZERO
            prev = pivot
        d = m[n - 1][n - 1]
        return -d if sign < 0 else d

    def adjugate(self) -> "PolyMatrix":
        """Transpose of the cofactor matrix; satisfies M*adj(M) = det(M)*E."""
        n = self.n
        if n == 1:
            return PolyMatrix.identity(1)
        out = [[_ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                minor = PolyMatrix._make([[self.rows[r][c] for c in range(n) if c != i]
                                          for r in range(n) if r != j])
                cof = minor.det()
                out[i][j] = -cof if (i + j) % 2 else cof
        return PolyMatrix._make(out)

    def inverse_unimodular(self) -> "PolyMatrix":
        """Inverse of a matrix with determinant +1 or -1.

        The result is the adjugate scaled by the determinant, so entries stay
        in the polynomial ring.  A constant-pivot elimination computes it
        directly whenever possible (always, for Cartan matrices, whose
        diagonal entries have the constant 1 available as a pivot); the
        cofactor adjugate covers the rest.

        Raises NotUnimodular when det is not +1 or -1.
        """
        d = self.det()
        if d != 1 and d != -1:
            raise NotUnimodular(d)
        inv = self._inverse_by_constant_pivots()
        if inv is None:
            adj = self.adjugate()
            inv = adj if d == 1 else -adj
        return inv

    def _inverse_by_constant_pivots(self) -> "PolyMatrix | None":
        # Gauss-Jordan on [M | E], only ever dividing by nonzero constants.
        n = self.n
        aug = [list(self.rows[i]) + [(_ONE if j == i else _ZERO) for j in range(n)]
               for i in range(n)]
        free = set(range(n))
        pivot_row_of_col = [0] * n
        for col in range(n):
            piv = None
            for r in range(n):
                if r in free and aug[r][col].constant_value():
                    piv = r
                    break
            if piv is None:
                return None
            free.discard(piv)
            pivot_row_of_col[col] = piv
            c = aug[piv][col].coeffs[0]
            if c != 1:
                inv_c = Fraction(1, 1) / c
                aug[piv] = [inv_c * e for e in aug[piv]]
            prow = aug[piv]
            for r in range(n):
                if r == piv:
                    continue
                f = aug[r][col]
                if f.is_zero():
                    continue
                aug[r] = [e - f * p for e, p in zip(aug[r], prow)]
        return PolyMatrix._make([aug[pivot_row_of_col[j]][n:] for j in range(n)])

    def specialize(self, q0) -> list[list[Fraction]]:
        """Entrywise exact evaluation at q = q0."""
        q0 = Fraction(q0)
        return [[e.evaluate(q0) for e in row] for row in self.rows]

    def to_json_obj(self) -> dict:
        return {"n": self.n,
                "entries": [[e.to_coeff_strings() for e in row] for row in self.rows]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PolyMatrix":
        rows = [[Polynomial.from_coeff_strings(e) for e in row] for row in obj["entries"]]
        m = cls(rows)
        if m.n != obj.get("n", m.n):
            raise ValueError("matrix order does not match entry grid")
        return m

    def __str__(self) -> str:
        cells = [[str(e) for e in row] for row in self.rows]
        widths = [max(len(cells[i][j]) for i in range(self.n)) for j in range(self.n)]
        return "\n".join(
            "[ " + "  ".join(cells[i][j].rjust(widths[j]) for j in range(self.n)) + " ]"
            for i in range(self.n))

    def __repr__(self) -> str:
        return f"PolyMatrix({self.n}x{self.n})"

    def _check_order(self, other: "PolyMatrix") -> None:
        if self.n != other.n:
            raise ValueError(f"matrix orders differ: {self.n} vs {other.n}")


def rank_rational(rows: Sequence[Sequence]) -> int:
    """Exact rank of a rectangular rational matrix.

    Rows are cleared of denominators, then eliminated fraction-free in
    integer arithmetic (Bareiss one-step divisions, which are exact).
    """
    work: list[list[int]] = []
    for row in rows:
        scale = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        ints = [int(x * scale) if isinstance(x, Fraction) else x * scale for x in row]
        if any(ints):
            work.append(ints)
    if not work:
        return 0
    n_rows = len(work)
    n_cols = len(work[0])
    rank = 0
    prev = 1
    for col in range(n_cols):
        piv = next((r for r in range(rank, n_rows) if work[r][col]), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        pivot = work[rank][col]
        prow = work[rank]
        for r in range(rank + 1, n_rows):
            f = work[r][col]
            wr = work[r]
            for c in range(col + 1, n_cols):
                num = pivot * wr[c] - f * prow[c]
                quot, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                wr[c] = quot
            wr[col] = 0
        prev = pivot
        rank += 1
        if rank == n_rows:
            break
    return rank
