"""
Exact rational scalars, vectors and matrices.

Scalars are `fractions.Fraction` (always in lowest terms, positive
denominator, structural equality).  Matrices are dense and row-major;
everything is immutable and every operation is a pure function, so values
can be shared freely between threads.  There is no floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class ShapeError(ValueError):
    """Raised when matrix/vector dimensions do not conform."""


def rat(num, den=1) -> Fraction:
    return Fraction(num, den)


def rat_str(x: Fraction) -> str:
    "Serialize exactly: 'num/den', with '/den' omitted when den == 1."
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)


def parse_rat(s: str) -> Fraction:
    return Fraction(s)


class QVector:
    "An exact rational column vector."

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        self.entries = tuple(Fraction(e) for e in entries)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        return isinstance(other, QVector) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other):
        if self.dim != other.dim:
            raise ShapeError("vector dims %d != %d" % (self.dim, other.dim))
        return QVector(a + b for a, b in zip(self.entries, other.entries))

    def __rmul__(self, scalar):
        c = Fraction(scalar)
        return QVector(c * a for a in self.entries)

    def __repr__(self):
        return "QVector([%s])" % ", ".join(rat_str(e) for e in self.entries)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)


class QMatrix:
    "A dense exact rational matrix, row-major."

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows = rows
        self.cols = cols
        self.entries = tuple(Fraction(e) for e in entries)
        if len(self.entries) != rows * cols:
            raise ShapeError(
                "need %d entries for a %dx%d matrix, got %d"
                % (rows * cols, rows, cols, len(self.entries)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ShapeError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, (ONE if i == j else ZERO for i in range(n) for j in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "QMatrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def row_list(self):
        return [list(self.row(i)) for i in range(self.rows)]

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in +")
        return QMatrix(self.rows, self.cols,
                       (a + b for a, b in zip(self.entries, other.entries)))

    def __rmul__(self, scalar):
        c = Fraction(scalar)
        return QMatrix(self.rows, self.cols, (c * a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            return mat_mul(self, other)
        if isinstance(other, QVector):
            return mat_vec(self, other)
        return NotImplemented

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows,
                       (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def __repr__(self):
        if self.rows * self.cols > 64:
            return "QMatrix(%dx%d)" % (self.rows, self.cols)
        return "QMatrix(%d, %d, [%s])" % (
            self.rows, self.cols, ", ".join(rat_str(e) for e in self.entries))

    def pretty(self) -> str:
        cells = [[rat_str(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def mat_vec(m: QMatrix, v: QVector) -> QVector:
    if m.cols != v.dim:
        raise ShapeError("mat %dx%d applied to vector of dim %d" % (m.rows, m.cols, v.dim))
    return QVector(
        sum((m.entries[i * m.cols + k] * v.entries[k] for k in range(m.cols)), ZERO)
        for i in range(m.rows))


def mat_mul(a: QMatrix, b: QMatrix) -> QMatrix:
    "Exact matrix product; integral inputs take a bound-checked int64 fast path."
    if a.cols != b.rows:
        raise ShapeError("cannot multiply %dx%d by %dx%d" % (a.rows, a.cols, b.rows, b.cols))
    if a.is_integral() and b.is_integral():
        # int64 matmul is exact as long as no intermediate sum can overflow
        ma = max((abs(e.numerator) for e in a.entries), default=0)
        mb = max((abs(e.numerator) for e in b.entries), default=0)
        if a.cols * ma * mb < 2 ** 62:
            na = numpy.array([[int(e) for e in a.row(i)] for i in range(a.rows)], dtype=numpy.int64)
            nb = numpy.array([[int(e) for e in b.row(i)] for i in range(b.rows)], dtype=numpy.int64)
            nc = na @ nb
            return QMatrix(a.rows, b.cols, (int(x) for x in nc.reshape(-1)))
    out = []
    bcols = b.cols
    for i in range(a.rows):
        arow = a.row(i)
        for j in range(bcols):
            s = ZERO
            for k in range(a.cols):
                aik = arow[k]
                if aik:
                    s += aik * b.entries[k * bcols + j]
            out.append(s)
    return QMatrix(a.rows, b.cols, out)


def kronecker(a: QMatrix, b: QMatrix) -> QMatrix:
    "Kronecker product; block (i,j) is a[i,j] * b."
    rows = a.rows * b.rows
    cols = a.cols * b.cols
    out = [ZERO] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            aij = a[i, j]
            if not aij:
                continue
            for k in range(b.rows):
                base = (i * b.rows + k) * cols + j * b.cols
                brow = b.row(k)
                for l in range(b.cols):
                    out[base + l] = aij * brow[l]
    return QMatrix(rows, cols, out)


def _sparse_rows(m: QMatrix):
    rows = []
    for i in range(m.rows):
        row = {j: e for j, e in enumerate(m.row(i)) if e}
        if row:
            rows.append(row)
    return rows


def rref(m: QMatrix):
    """Reduced row echelon form.  Returns (matrix, pivot column list).

    Elimination is sparse-aware internally so that very sparse systems
    (e.g. equivariance constraints, two nonzeros per row) stay fast.
    """
    rows = _sparse_rows(m)
    pivots = []
    done = []
    for col in range(m.cols):
        hit = None
        for idx, row in enumerate(rows):
            if col in row:
                hit = idx
                break
        if hit is None:
            continue
        row = rows.pop(hit)
        inv = ONE / row[col]
        row = {j: v * inv for j, v in row.items()}
        for other in rows:
            f = other.get(col)
            if f:
                for j, v in row.items():
                    nv = other.get(j, ZERO) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        for other in done:
            f = other.get(col)
            if f:
                for j, v in row.items():
                    nv = other.get(j, ZERO) - f * v
                    if nv:
                        other[j] = nv
                    else:
                        other.pop(j, None)
        rows = [r for r in rows if r]
        done.append(row)
        pivots.append(col)
    flat = [ZERO] * (m.rows * m.cols)
    for i, row in enumerate(done):
        for j, v in row.items():
            flat[i * m.cols + j] = v
    return QMatrix(m.rows, m.cols, flat), pivots


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def nullspace(m: QMatrix) -> list[QVector]:
    """Basis of {v : m v = 0}, from the reduced echelon form.

    One basis vector per free column, in increasing free-column order;
    the free coordinate is set to 1.  Deterministic and exact.
    """
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i, f]
        basis.append(QVector(v))
    return basis
