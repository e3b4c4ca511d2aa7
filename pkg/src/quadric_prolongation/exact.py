"""Exact scalars and deterministic linear algebra.

Rationals are :class:`fractions.Fraction`.  Gaussian rationals (complex
numbers with rational parts) are provided by :class:`GaussianRational`.
Elimination works on sparse rows so that the few-thousand-row systems built
by the solvers stay cheap.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Hashable, Iterable, Mapping, Sequence

Rational = Fraction

_RATIONAL_RE = re.compile(r"^(-?\d+)/(\d+)$")


def parse_rational(text: str) -> Fraction:
    """Parse a strict ``"p/q"`` string (q > 0, lowest terms)."""
    if not isinstance(text, str):
        raise ValueError(f"expected a rational string 'p/q', got {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ValueError(f"malformed rational string {text!r}; expected 'p/q'")
    p, q = int(m.group(1)), int(m.group(2))
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    value = Fraction(p, q)
    if value.numerator != p or value.denominator != q:
        raise ValueError(f"rational {text!r} is not in lowest terms")
    return value


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class GaussianRational:
    """Complex number ``re + i*im`` with exact rational parts.

    Instances are treated as immutable values.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, _RationalABC)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        raise TypeError(f"cannot coerce {x!r} to GaussianRational")

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(self.re / other, self.im / other)
        if isinstance(other, GaussianRational):
            den = other.norm2()
            if not den:
                raise ZeroDivisionError("division by zero Gaussian rational")
            num = self * other.conj()
            return GaussianRational(num.re / den, num.im / den)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational(other) / self
        return NotImplemented

    def to_pair(self) -> list[str]:
        return [format_rational(self.re), format_rational(self.im)]

    @classmethod
    def from_pair(cls, pair) -> "GaussianRational":
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"complex entry must be a two-element array, got {pair!r}")
        return cls(parse_rational(pair[0]), parse_rational(pair[1]))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


class _Matrix:
    _scalar = staticmethod(Fraction)

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(self._scalar(e) for e in entries)
        if len(entries) != rows * cols:
            raise ValueError(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, [e for r in rows for e in r])

    @classmethod
    def zeros(cls, rows: int, cols: int):
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self):
        return type(self)(
            self.cols, self.rows, [self.entry(i, j) for j in range(self.cols) for i in range(self.rows)]
        )

    def __matmul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                s = self._scalar(0)
                for t in range(self.cols):
                    if ri[t]:
                        s = s + ri[t] * other.entries[t * other.cols + j]
                out.append(s)
        return type(self)(self.rows, other.cols, out)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_rows()!r})"


class RatMatrix(_Matrix):
    """Dense rational matrix, row-major."""

    _scalar = staticmethod(Fraction)

    def mul_vector(self, v: Sequence) -> list[Fraction]:
        return [sum((a * b for a, b in zip(self.row(i), v) if a), Fraction(0)) for i in range(self.rows)]

    @classmethod
    def vstack(cls, mats: Sequence["RatMatrix"], cols: int | None = None) -> "RatMatrix":
        if cols is None:
            cols = mats[0].cols
        entries = []
        rows = 0
        for m in mats:
            if m.cols != cols:
                raise ValueError("column mismatch in vstack")
            entries.extend(m.entries)
            rows += m.rows
        return cls(rows, cols, entries)


class GaussMatrix(_Matrix):
    """Dense Gaussian-rational matrix, row-major."""

    _scalar = staticmethod(GaussianRational.coerce)

    def conj_transpose(self) -> "GaussMatrix":
        return GaussMatrix(
            self.cols,
            self.rows,
            [self.entry(i, j).conj() for j in range(self.cols) for i in range(self.rows)],
        )

    def is_hermitian(self) -> bool:
        return self.rows == self.cols and self == self.conj_transpose()

    def scale(self, c) -> "GaussMatrix":
        return GaussMatrix(self.rows, self.cols, [c * e for e in self.entries])


# -- sparse elimination -----------------------------------------------------


def _reduce_into(pivots: dict, row: dict) -> dict:
    """Reduce ``row`` against a fully reduced pivot set (in place)."""
    for c in [c for c in row if c in pivots]:
        f = row.get(c)
        if not f:
            continue
        for col, val in pivots[c].items():
            nv = row.get(col, 0) - f * val
            if nv:
                row[col] = nv
            else:
                row.pop(col, None)
    return row


def _add_pivot(pivots: dict, row: dict):
    c = min(row)
    inv = 1 / row[c]
    if inv != 1:
        row = {k: v * inv for k, v in row.items()}
    for other in pivots.values():
        f = other.get(c)
        if f:
            for col, val in row.items():
                nv = other.get(col, 0) - f * val
                if nv:
                    other[col] = nv
                else:
                    other.pop(col, None)
    pivots[c] = row
    return c


def echelon(rows: Iterable[Mapping[Hashable, Fraction]]) -> dict:
    """Reduced row-echelon form of sparse rows.

    Returns ``{pivot_key: row}`` where every row is 1 at its own pivot, 0 at
    every other pivot, and 0 at every key smaller than its pivot.  Keys must
    be mutually comparable; the result does not depend on the input row order.
    """
    pivots: dict = {}
    for r in rows:
        r = {k: Fraction(v) for k, v in r.items() if v}
        _reduce_into(pivots, r)
        if r:
            _add_pivot(pivots, r)
    return pivots


def _matrix_rows(m: RatMatrix) -> list[dict]:
    return [{j: v for j, v in enumerate(m.row(i)) if v} for i in range(m.rows)]


def rank(m: RatMatrix) -> int:
    return len(echelon(_matrix_rows(m)))


def sparse_nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """Canonical nullspace basis of a sparse system over columns ``0..ncols-1``.

    Free columns are taken in increasing order; each basis vector has a 1 in
    its free column, 0 in the other free columns.
    """
    pivots = echelon(rows)
    out = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for c, prow in pivots.items():
            x = prow.get(f)
            if x:
                v[c] = -x
        out.append(tuple(v))
    return out


def nullspace(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : m x = 0}`` in reduced-row-echelon canonical form."""
    return sparse_nullspace(_matrix_rows(m), m.cols)


def realify(m: GaussMatrix) -> RatMatrix:
    """Real matrix of ``x -> m x`` with coordinates split as (re, im) pairs."""
    out = [[Fraction(0)] * (2 * m.cols) for _ in range(2 * m.rows)]
    for i in range(m.rows):
        for j in range(m.cols):
            e = m.entry(i, j)
            out[2 * i][2 * j] = e.re
            out[2 * i][2 * j + 1] = -e.im
            out[2 * i + 1][2 * j] = e.im
            out[2 * i + 1][2 * j + 1] = e.re
    return RatMatrix.from_rows(out, 2 * m.cols)


def complexify_vector(v: Sequence[Fraction]) -> list[GaussianRational]:
    """Inverse of the (re, im) splitting used by :func:`realify`."""
    return [GaussianRational(v[2 * i], v[2 * i + 1]) for i in range(len(v) // 2)]


class NotInSpan(ValueError):
    pass


@dataclass
class SpanCoordinates:
    """Coordinates of sparse vectors with respect to a fixed independent set.

    ``basis`` is a sequence of sparse vectors (key -> Fraction).  Raises
    ``ValueError`` if the vectors are dependent.
    """

    basis: Sequence[Mapping]

    def __post_init__(self):
        # each pivot row carries the combination of basis vectors producing it
        pivots: dict = {}
        combos: dict = {}
        for idx, b in enumerate(self.basis):
            vec = {k: Fraction(v) for k, v in b.items() if v}
            combo = {idx: Fraction(1)}
            for c in [c for c in vec if c in pivots]:
                f = vec.get(c)
                if not f:
                    continue
                _axpy(vec, -f, pivots[c])
                _axpy(combo, -f, combos[c])
            if not vec:
                raise ValueError("basis vectors are linearly dependent")
            c = min(vec)
            inv = 1 / vec[c]
            vec = {k: v * inv for k, v in vec.items()}
            combo = {k: v * inv for k, v in combo.items()}
            for pc in pivots:
                f = pivots[pc].get(c)
                if f:
                    _axpy(pivots[pc], -f, vec)
                    _axpy(combos[pc], -f, combo)
            pivots[c] = vec
            combos[c] = combo
        self._pivots = pivots
        self._combo = combos

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, target: Mapping) -> list[Fraction]:
        """Return ``c`` with ``sum c[i] basis[i] == target``; raise NotInSpan otherwise."""
        residual = {k: Fraction(v) for k, v in target.items() if v}
        coords = [Fraction(0)] * len(self.basis)
        for c in [c for c in residual if c in self._pivots]:
            f = residual.get(c)
            if not f:
                continue
            _axpy(residual, -f, self._pivots[c])
            for idx, w in self._combo[c].items():
                coords[idx] += f * w
        if residual:
            raise NotInSpan("vector is not in the span of the basis")
        return coords

    def contains(self, target: Mapping) -> bool:
        try:
            self.coordinates(target)
        except NotInSpan:
            return False
        return True


def _axpy(y: dict, a, x: Mapping):
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)
