"""Dense exact linear algebra over cyclotomic scalars.

Everything is deterministic: row reduction always takes the first
nonzero entry (smallest row index) in the leftmost unfinished column
as the next pivot, so bases of kernels and column spaces are canonical
for a given input matrix.
"""

from __future__ import annotations

from fractions import Fraction

from .exactnum import Cyclotomic, _coerce


def cyc(x) -> Cyclotomic:
    v = _coerce(x)
    if v is None:
        raise TypeError("cannot coerce %r to a cyclotomic number" % (x,))
    return v


_C0 = Cyclotomic.from_rational(0)
_C1 = Cyclotomic.from_rational(1)


class Matrix:
    """Immutable dense matrix with cyclotomic entries."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        self.nrows = len(rows)
        if rows:
            ncols = len(rows[0])
            for r in rows:
                if len(r) != ncols:
                    raise ValueError("ragged rows")
        elif ncols is None:
            raise ValueError("empty matrix needs an explicit column count")
        self.rows = rows
        self.ncols = ncols

    @staticmethod
    def from_rows(rows, ncols=None) -> "Matrix":
        return Matrix(tuple(tuple(cyc(e) for e in r) for r in rows), ncols=ncols)

    @staticmethod
    def zero(nrows, ncols) -> "Matrix":
        return Matrix(((_C0,) * ncols,) * nrows, ncols=ncols)

    @staticmethod
    def identity(n) -> "Matrix":
        return Matrix(
            tuple(
                tuple(_C1 if i == j else _C0 for j in range(n)) for i in range(n)
            ),
            ncols=n,
        )

    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape() != other.shape():
            return False
        return all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols))

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def __add__(self, other):
        if self.shape() != other.shape():
            raise ValueError("shape mismatch in addition")
        return Matrix(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.rows, other.rows)
            ),
            ncols=self.ncols,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Matrix(
            tuple(tuple(-e for e in r) for r in self.rows), ncols=self.ncols
        )

    def scale(self, c) -> "Matrix":
        c = cyc(c)
        return Matrix(
            tuple(tuple(c * e for e in r) for r in self.rows), ncols=self.ncols
        )

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.scale(other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in multiplication")
        bt = other.rows
        out = []
        for ra in self.rows:
            row = [_C0] * other.ncols
            for k, a in enumerate(ra):
                if not a.is_zero():
                    rb = bt[k]
                    for j, b in enumerate(rb):
                        if not b.is_zero():
                            row[j] = row[j] + a * b
            out.append(tuple(row))
        return Matrix(tuple(out), ncols=other.ncols)

    def transpose(self) -> "Matrix":
        return Matrix(
            tuple(
                tuple(self.rows[i][j] for i in range(self.nrows))
                for j in range(self.ncols)
            ),
            ncols=self.nrows,
        )

    def trace(self) -> Cyclotomic:
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        t = _C0
        for i in range(self.nrows):
            t = t + self.rows[i][i]
        return t

    def kron(self, other) -> "Matrix":
        out = []
        for ra in self.rows:
            for rb in other.rows:
                row = []
                for a in ra:
                    if a.is_zero():
                        row.extend([_C0] * other.ncols)
                    else:
                        row.extend([a * b for b in rb])
                out.append(tuple(row))
        return Matrix(tuple(out), ncols=self.ncols * other.ncols)

    def column(self, j) -> tuple:
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(
            tuple(tuple(self.rows[i][j] for j in cols) for i in rows),
            ncols=len(cols),
        )

    def hstack(self, other) -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        return Matrix(
            tuple(ra + rb for ra, rb in zip(self.rows, other.rows)),
            ncols=self.ncols + other.ncols,
        )

    def vstack(self, other) -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("column count mismatch in vstack")
        return Matrix(self.rows + other.rows, ncols=self.ncols)

    def rref(self):
        """Reduced row echelon form and the pivot column indices."""
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for col in range(self.ncols):
            pivot = None
            for r in range(pr, self.nrows):
                if not rows[r][col].is_zero():
                    pivot = r
                    break
            if pivot is None:
                continue
            rows[pr], rows[pivot] = rows[pivot], rows[pr]
            inv = rows[pr][col].inverse()
            rows[pr] = [e * inv for e in rows[pr]]
            prow = rows[pr]
            for r in range(self.nrows):
                if r != pr and not rows[r][col].is_zero():
                    f = rows[r][col]
                    row = rows[r]
                    for j in range(self.ncols):
                        if not prow[j].is_zero():
                            row[j] = row[j] - f * prow[j]
            pivots.append(col)
            pr += 1
            if pr == self.nrows:
                break
        return Matrix(tuple(tuple(r) for r in rows), ncols=self.ncols), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> "Matrix":
        """Matrix whose columns span the kernel (canonical basis)."""
        red, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        cols = []
        for f in free:
            v = [_C0] * self.ncols
            v[f] = _C1
            for i, p in enumerate(pivots):
                v[p] = -red.rows[i][f]
            cols.append(v)
        return Matrix(
            tuple(tuple(c[i] for c in cols) for i in range(self.ncols)),
            ncols=len(cols),
        )

    def column_space(self) -> "Matrix":
        """The pivot columns of the original matrix (canonical basis)."""
        _, pivots = self.rref()
        return self.submatrix(range(self.nrows), pivots)

    def solve(self, rhs) -> "Matrix":
        """X with self @ X = rhs; free variables set to zero.

        Raises ValueError when inconsistent.
        """
        if self.nrows != rhs.nrows:
            raise ValueError("row count mismatch in solve")
        red, pivots = self.hstack(rhs).rref()
        for p in pivots:
            if p >= self.ncols:
                raise ValueError("inconsistent linear system")
        xrows = [[_C0] * rhs.ncols for _ in range(self.ncols)]
        for i, p in enumerate(pivots):
            for j in range(rhs.ncols):
                xrows[p][j] = red.rows[i][self.ncols + j]
        return Matrix(tuple(tuple(r) for r in xrows), ncols=rhs.ncols)

    def det(self) -> Cyclotomic:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return _C1
        rows = [list(r) for r in self.rows]
        sign = 1
        acc = _C1
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if not rows[r][col].is_zero():
                    pivot = r
                    break
            if pivot is None:
                return _C0
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                sign = -sign
            pv = rows[col][col]
            acc = acc * pv
            inv = pv.inverse()
            for r in range(col + 1, n):
                if not rows[r][col].is_zero():
                    f = rows[r][col] * inv
                    row = rows[r]
                    prow = rows[col]
                    for j in range(col, n):
                        if not prow[j].is_zero():
                            row[j] = row[j] - f * prow[j]
        return acc if sign == 1 else -acc

    def minor(self, rows, cols) -> Cyclotomic:
        return self.submatrix(rows, cols).det()

    def to_complex(self):
        """Entries as python complex numbers (row-major nested lists)."""
        return [[complex(e) for e in r] for r in self.rows]

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    __repr__ = __str__


def block(grid, row_dims, col_dims) -> Matrix:
    """Assemble a block matrix; None blocks mean zero of the declared size."""
    out = []
    for bi, rdim in enumerate(row_dims):
        rows = [[] for _ in range(rdim)]
        for bj, cdim in enumerate(col_dims):
            piece = grid[bi][bj]
            if piece is None:
                for r in rows:
                    r.extend([_C0] * cdim)
            else:
                if piece.shape() != (rdim, cdim):
                    raise ValueError("block shape mismatch at (%d, %d)" % (bi, bj))
                for r, prow in zip(rows, piece.rows):
                    r.extend(prow)
        out.extend(tuple(r) for r in rows)
    return Matrix(tuple(out), ncols=sum(col_dims))
