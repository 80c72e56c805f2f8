"""Exact rational linear algebra.

Dense matrices of :class:`fractions.Fraction` with rank, nullspace and linear
solving by Gauss–Jordan elimination. Nothing here ever rounds.

Pivot rule: within the current column, the nonzero candidate with the
smallest bit-length (numerator plus denominator bits) wins, ties going to
the lowest row index. Results are therefore fully deterministic.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .exceptions import DimensionMismatchError, ErrorContext

Number = Union[int, Fraction]
Vector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_vector(values: Iterable[Number]) -> Vector:
    """Convert any iterable of ints/Fractions into an immutable rational vector."""
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence[Number], v: Sequence[Number]) -> Fraction:
    """Exact inner product."""
    if len(u) != len(v):
        raise DimensionMismatchError(
            "Vectors have different lengths",
            ErrorContext(operation="dot", details={"left": len(u), "right": len(v)}),
        )
    return Fraction(sum(a * b for a, b in zip(u, v) if a and b))


def bit_length(value: Fraction) -> int:
    """Size of a rational in bits, used to rank pivot candidates."""
    return value.numerator.bit_length() + value.denominator.bit_length()


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of exact rationals, stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatchError(
                "Matrix dimensions must be nonnegative",
                ErrorContext(operation="RationalMatrix", details={"rows": self.rows, "cols": self.cols}),
            )
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatchError(
                "Entry count does not match rows × cols",
                ErrorContext(
                    operation="RationalMatrix",
                    details={"rows": self.rows, "cols": self.cols, "entries": len(self.entries)},
                ),
            )
        object.__setattr__(self, "entries", as_vector(self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]], cols: Optional[int] = None) -> "RationalMatrix":
        """Build a matrix from a list of rows.

        Args:
            rows: Row vectors, all of the same length
            cols: Column count, required only when ``rows`` is empty

        Raises:
            DimensionMismatchError: If rows are ragged
        """
        if not rows:
            return cls(0, cols or 0, ())
        width = len(rows[0])
        if cols is not None and cols != width:
            raise DimensionMismatchError(
                "Declared column count does not match row length",
                ErrorContext(operation="from_rows", details={"cols": cols, "row_length": width}),
            )
        for index, row in enumerate(rows):
            if len(row) != width:
                raise DimensionMismatchError(
                    "Ragged rows",
                    ErrorContext(operation="from_rows", details={"row": index, "length": len(row), "expected": width}),
                )
        return cls(len(rows), width, tuple(v for row in rows for v in row))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        """The rows × cols zero matrix."""
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "RationalMatrix":
        """The size × size identity matrix."""
        return cls(size, size, tuple(ONE if i == j else ZERO for i in range(size) for j in range(size)))

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        i, j = index
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        """Row i as an immutable vector."""
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_list(self) -> List[List[Fraction]]:
        """Mutable copy of the rows, for elimination."""
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RationalMatrix":
        """The cols × rows transpose."""
        entries = tuple(self[i, j] for j in range(self.cols) for i in range(self.rows))
        return RationalMatrix(self.cols, self.rows, entries)

    def select_rows(self, indices: Iterable[int]) -> "RationalMatrix":
        """Submatrix made of the given rows, in the given order."""
        picked = [self.row(i) for i in indices]
        return RationalMatrix.from_rows(picked, cols=self.cols)

    def vstack(self, other: "RationalMatrix") -> "RationalMatrix":
        """Rows of ``self`` followed by the rows of ``other``.

        Raises:
            DimensionMismatchError: If the column counts differ
        """
        if other.cols != self.cols:
            raise DimensionMismatchError(
                "Cannot stack matrices with different column counts",
                ErrorContext(operation="vstack", details={"top": self.cols, "bottom": other.cols}),
            )
        return RationalMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def matvec(self, v: Sequence[Number]) -> Vector:
        """Exact product ``self · v``."""
        if len(v) != self.cols:
            raise DimensionMismatchError(
                "Vector length does not match column count",
                ErrorContext(operation="matvec", details={"cols": self.cols, "vector": len(v)}),
            )
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def scale_row(self, i: int, factor: Number) -> "RationalMatrix":
        """Copy with row i multiplied by ``factor``."""
        rows = self.row_list()
        rows[i] = [Fraction(factor) * v for v in rows[i]]
        return RationalMatrix.from_rows(rows, cols=self.cols)

    def swap_rows(self, i: int, j: int) -> "RationalMatrix":
        """Copy with rows i and j exchanged."""
        rows = self.row_list()
        rows[i], rows[j] = rows[j], rows[i]
        return RationalMatrix.from_rows(rows, cols=self.cols)


@dataclass(frozen=True)
class RowEchelon:
    """Reduced row echelon form of a matrix, optionally with a carried right-hand side."""

    rows: Tuple[Vector, ...]
    pivot_columns: Tuple[int, ...]
    rhs: Optional[Vector]
    cols: int

    @property
    def rank(self) -> int:
        return len(self.pivot_columns)

    @property
    def free_columns(self) -> Tuple[int, ...]:
        """Columns without a pivot."""
        pivots = set(self.pivot_columns)
        return tuple(c for c in range(self.cols) if c not in pivots)


def _choose_pivot(work: List[List[Fraction]], column: int, start: int) -> Optional[int]:
    best: Optional[int] = None
    best_bits = 0
    for r in range(start, len(work)):
        value = work[r][column]
        if value:
            bits = bit_length(value)
            if best is None or bits < best_bits:
                best, best_bits = r, bits
    return best


def row_reduce(m: RationalMatrix, rhs: Optional[Sequence[Number]] = None, reduced: bool = True) -> RowEchelon:
    """Exact Gauss–Jordan elimination.

    Args:
        m: Matrix to reduce
        rhs: Optional right-hand side carried through the same row operations
        reduced: If False, stop at row echelon form (enough for the rank)

    Returns:
        RowEchelon with pivot rows first; for ``reduced=True`` every pivot is 1 and
        is the only nonzero in its column
    """
    work = m.row_list()
    b: Optional[List[Fraction]] = None
    if rhs is not None:
        if len(rhs) != m.rows:
            raise DimensionMismatchError(
                "Right-hand side length does not match row count",
                ErrorContext(operation="row_reduce", details={"rows": m.rows, "rhs": len(rhs)}),
            )
        b = [Fraction(v) for v in rhs]

    pivots: List[int] = []
    pivot_row = 0
    for c in range(m.cols):
        if pivot_row == m.rows:
            break
        r = _choose_pivot(work, c, pivot_row)
        if r is None:
            continue
        if r != pivot_row:
            work[r], work[pivot_row] = work[pivot_row], work[r]
            if b is not None:
                b[r], b[pivot_row] = b[pivot_row], b[r]
        prow = work[pivot_row]
        pval = prow[c]
        if reduced and pval != 1:
            prow = [v / pval for v in prow]
            work[pivot_row] = prow
            if b is not None:
                b[pivot_row] /= pval
            pval = ONE

        targets = range(m.rows) if reduced else range(pivot_row + 1, m.rows)
        for t in targets:
            if t == pivot_row:
                continue
            factor = work[t][c]
            if not factor:
                continue
            factor = factor / pval
            trow = work[t]
            for k in range(c, m.cols):
                if prow[k]:
                    trow[k] -= factor * prow[k]
            if b is not None:
                b[t] -= factor * b[pivot_row]
        pivots.append(c)
        pivot_row += 1

    return RowEchelon(
        rows=tuple(tuple(row) for row in work),
        pivot_columns=tuple(pivots),
        rhs=tuple(b) if b is not None else None,
        cols=m.cols,
    )


def rank(m: RationalMatrix) -> int:
    """Exact rank over the rationals. Empty matrices have rank 0."""
    if m.rows == 0 or m.cols == 0:
        return 0
    return row_reduce(m, reduced=False).rank


def nullspace_basis(m: RationalMatrix) -> List[Vector]:
    """Basis of ``{v : m·v = 0}``, one vector per free column in ascending order.

    Each basis vector has a 1 in its own free column and 0 in every other free
    column.
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(ONE if i == j else ZERO for i in range(m.cols)) for j in range(m.cols)]

    echelon = row_reduce(m)
    basis: List[Vector] = []
    for free in echelon.free_columns:
        v = [ZERO] * m.cols
        v[free] = ONE
        for r, pc in enumerate(echelon.pivot_columns):
            v[pc] = -echelon.rows[r][free]
        basis.append(tuple(v))
    return basis


def solve(m: RationalMatrix, b: Sequence[Number]) -> Optional[Vector]:
    """One exact solution of ``m·x = b``, with free variables set to 0.

    Returns:
        The solution, or None when the system is inconsistent

    Raises:
        DimensionMismatchError: If ``len(b) != m.rows``
    """
    if len(b) != m.rows:
        raise DimensionMismatchError(
            "Right-hand side length does not match row count",
            ErrorContext(operation="solve", details={"rows": m.rows, "rhs": len(b)}),
        )
    if m.rows == 0:
        return (ZERO,) * m.cols

    echelon = row_reduce(m, rhs=b)
    assert echelon.rhs is not None
    for r in range(echelon.rank, m.rows):
        if echelon.rhs[r]:
            return None

    x = [ZERO] * m.cols
    for r, pc in enumerate(echelon.pivot_columns):
        x[pc] = echelon.rhs[r]
    return tuple(x)
