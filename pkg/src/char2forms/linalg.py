"""Dense exact linear algebra over a field (or local ring) of characteristic 2.

Matrices and vectors are immutable and generic over a ring object that
provides ``zero()``, ``one()``, ``coerce()`` and ``is_unit()``; elements carry
their own arithmetic.  Dimensions here are tiny (at most 6x6), so everything
uses straightforward exact elimination with first-unit pivoting.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence


class LinalgError(Exception):
    pass


class DimensionMismatch(LinalgError):
    pass


class SingularMatrix(LinalgError):
    pass


class BadIndexSet(LinalgError):
    pass


class Vector:
    __slots__ = ("ring", "entries")

    def __init__(self, ring, entries: Iterable):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "entries", tuple(ring.coerce(e) for e in entries))

    def __setattr__(self, name, value):
        raise AttributeError("vectors are immutable")

    @classmethod
    def unit(cls, ring, n: int, i: int) -> "Vector":
        return cls(ring, [ring.one() if j == i else ring.zero() for j in range(n)])

    @classmethod
    def zero(cls, ring, n: int) -> "Vector":
        return cls(ring, [ring.zero()] * n)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "Vector") -> "Vector":
        if len(other) != len(self):
            raise DimensionMismatch("vector lengths differ")
        return Vector(self.ring, [a + b for a, b in zip(self.entries, other.entries)])

    __sub__ = __add__

    def scale(self, s) -> "Vector":
        s = self.ring.coerce(s)
        return Vector(self.ring, [a * s for a in self.entries])

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(e.is_zero() for e in self.entries)

    def __eq__(self, other):
        return (isinstance(other, Vector) and self.ring == other.ring
                and self.entries == other.entries)

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return " ".join(str(e) for e in self.entries)

    def __repr__(self):
        return f"Vector({self})"


class Matrix:
    __slots__ = ("ring", "nrows", "ncols", "entries")

    def __init__(self, ring, rows: Iterable[Iterable]):
        rows = tuple(tuple(ring.coerce(e) for e in row) for row in rows)
        if not rows or not rows[0]:
            raise DimensionMismatch("matrix needs at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", width)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, name, value):
        raise AttributeError("matrices are immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        one, zero = ring.one(), ring.zero()
        return cls(ring, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, nrows: int, ncols: int) -> "Matrix":
        zero = ring.zero()
        return cls(ring, [[zero] * ncols for _ in range(nrows)])

    @classmethod
    def diagonal(cls, ring, diag: Sequence) -> "Matrix":
        diag = [ring.coerce(d) for d in diag]
        zero = ring.zero()
        n = len(diag)
        return cls(ring, [[diag[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, ring, columns: Sequence[Vector]) -> "Matrix":
        n = len(columns[0])
        return cls(ring, [[col[i] for col in columns] for i in range(n)])

    @classmethod
    def block(cls, grid: Sequence[Sequence["Matrix"]]) -> "Matrix":
        ring = grid[0][0].ring
        rows = []
        for band in grid:
            height = band[0].nrows
            if any(b.nrows != height for b in band):
                raise DimensionMismatch("block heights differ within a band")
            for i in range(height):
                row = []
                for b in band:
                    row.extend(b.entries[i])
                rows.append(row)
        return cls(ring, rows)

    # -- access --------------------------------------------------------------
    def __getitem__(self, key):
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return Vector(self.ring, self.entries[i])

    def column(self, j: int) -> Vector:
        return Vector(self.ring, [self.entries[i][j] for i in range(self.nrows)])

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.ncols)]

    # -- algebra --------------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionMismatch("matrix shapes differ")
        return Matrix(self.ring, [[a + b for a, b in zip(r1, r2)]
                                  for r1, r2 in zip(self.entries, other.entries)])

    __sub__ = __add__

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch(
                    f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
            cols = list(zip(*other.entries))
            return Matrix(self.ring,
                          [[_dot(row, col) for col in cols] for row in self.entries])
        if isinstance(other, Vector):
            if self.ncols != len(other):
                raise DimensionMismatch("matrix/vector shapes differ")
            return Vector(self.ring, [_dot(row, other.entries) for row in self.entries])
        s = self.ring.coerce(other)
        return Matrix(self.ring, [[e * s for e in row] for row in self.entries])

    def __rmul__(self, other):
        s = self.ring.coerce(other)
        return Matrix(self.ring, [[s * e for e in row] for row in self.entries])

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, list(zip(*self.entries)))

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.nrows) for j in range(i))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def is_diagonal(self) -> bool:
        return self.is_square() and all(
            self.entries[i][j].is_zero()
            for i in range(self.nrows) for j in range(self.ncols) if i != j)

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.ring, self.nrows) if self.is_square() else False

    def trace(self):
        if not self.is_square():
            raise LinalgError("trace needs a square matrix")
        total = self.ring.zero()
        for i in range(self.nrows):
            total = total + self.entries[i][i]
        return total

    def det(self):
        if not self.is_square():
            raise LinalgError("determinant needs a square matrix")
        n = self.nrows
        if n <= 3:
            return _cofactor_det(self)
        rows = [list(r) for r in self.entries]
        det = self.ring.one()
        for c in range(n):
            pivot = next((r for r in range(c, n) if self.ring.is_unit(rows[r][c])), None)
            if pivot is None:
                return self.ring.zero()
            if pivot != c:
                rows[c], rows[pivot] = rows[pivot], rows[c]  # char 2: no sign flip
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for r in range(c + 1, n):
                f = rows[r][c] * inv
                if not f.is_zero():
                    rows[r] = [a + f * b for a, b in zip(rows[r], rows[c])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise SingularMatrix("inverse needs a square matrix")
        n = self.nrows
        rows = [list(r) + list(ident_row)
                for r, ident_row in zip(self.entries, Matrix.identity(self.ring, n).entries)]
        for c in range(n):
            pivot = next((r for r in range(c, n) if self.ring.is_unit(rows[r][c])), None)
            if pivot is None:
                raise SingularMatrix("matrix is not invertible")
            rows[c], rows[pivot] = rows[pivot], rows[c]
            inv = rows[c][c].inverse()
            rows[c] = [x * inv for x in rows[c]]
            for r in range(n):
                if r != c and not rows[r][c].is_zero():
                    f = rows[r][c]
                    rows[r] = [a + f * b for a, b in zip(rows[r], rows[c])]
        return Matrix(self.ring, [row[n:] for row in rows])

    def rank(self) -> int:
        rows = [list(r) for r in self.entries]
        return len(_echelon(rows, self.ring)[1])

    def kernel_basis(self) -> list[Vector]:
        """Basis of the right null space (free variables set in index order)."""
        rows = [list(r) for r in self.entries]
        rows, pivots = _echelon(rows, self.ring)
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            vec = [self.ring.zero()] * self.ncols
            vec[f] = self.ring.one()
            for r, c in enumerate(pivots):
                vec[c] = rows[r][f]
            basis.append(Vector(self.ring, vec))
        return basis

    def solve(self, rhs: Vector) -> Optional[Vector]:
        """One solution of self * x = rhs, or None (free variables zero)."""
        if len(rhs) != self.nrows:
            raise DimensionMismatch("right-hand side has wrong length")
        rows = [list(r) + [b] for r, b in zip(self.entries, rhs.entries)]
        rows, pivots = _echelon(rows, self.ring, ncols=self.ncols)
        for r in range(len(pivots), self.nrows):
            if not rows[r][-1].is_zero():
                return None
        x = [self.ring.zero()] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = rows[r][-1]
        return Vector(self.ring, x)

    def submatrix(self, row_set: Sequence[int], col_set: Sequence[int]) -> "Matrix":
        for i in row_set:
            if not 0 <= i < self.nrows:
                raise BadIndexSet(f"row index {i} out of range")
        for j in col_set:
            if not 0 <= j < self.ncols:
                raise BadIndexSet(f"column index {j} out of range")
        return Matrix(self.ring, [[self.entries[i][j] for j in col_set] for i in row_set])

    def minor_det(self, row_set: Sequence[int], col_set: Sequence[int]):
        if len(row_set) != len(col_set):
            raise BadIndexSet("minor needs index sets of equal size")
        return self.submatrix(row_set, col_set).det()

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.ring == other.ring
                and self.entries == other.entries)

    def __hash__(self):
        return hash(self.entries)

    def __str__(self):
        return "\n".join(" ".join(str(e) for e in row) for row in self.entries)

    def __repr__(self):
        return f"Matrix(\n{self}\n)"


def _dot(row, col):
    it = zip(row, col)
    a, b = next(it)
    total = a * b
    for a, b in it:
        total = total + a * b
    return total


def _cofactor_det(m: Matrix):
    e = m.entries
    n = m.nrows
    if n == 1:
        return e[0][0]
    if n == 2:
        return e[0][0] * e[1][1] + e[0][1] * e[1][0]
    return (e[0][0] * (e[1][1] * e[2][2] + e[1][2] * e[2][1])
            + e[0][1] * (e[1][0] * e[2][2] + e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] + e[1][1] * e[2][0]))


def _echelon(rows, ring, ncols: Optional[int] = None):
    """Reduced row echelon form in place (unit pivots); returns (rows, pivots)."""
    if not rows:
        return rows, []
    width = ncols if ncols is not None else len(rows[0])
    pivots = []
    r = 0
    for c in range(width):
        pivot = next((i for i in range(r, len(rows)) if ring.is_unit(rows[i][c])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [a + f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots
