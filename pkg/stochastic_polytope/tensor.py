"""Stochastic tensors, permutation tensors and Latin squares.

Index convention: ``entries[i][j][k]`` with zero-based i, j, k. A Latin
square cell holding symbol s corresponds to the third index k = s - 1, so
``L.cells[i][j] == k + 1`` exactly when the permutation tensor has a 1 at
(i, j, k). Flat storage is row-major in (i, j, k): flat index
``(i * n + j) * n + k``.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import DimensionMismatchError, ErrorContext, TensorShapeError, ValidationError
from .linalg import ONE, ZERO, Number, Vector, as_vector
from .logging_config import get_logger

logger = get_logger(__name__)

DEFAULT_MAX_DENOMINATOR = 1000
# Largest order drawn by randomized backtracking; above it squares are isotopes of the cyclic one
FULL_SUPPORT_MAX_ORDER = 6


def flat_index(n: int, i: int, j: int, k: int) -> int:
    """Position of entry (i, j, k) in the flat entry tuple."""
    return (i * n + j) * n + k


def unflatten_index(n: int, index: int) -> Tuple[int, int, int]:
    """Inverse of flat_index."""
    i, rest = divmod(index, n * n)
    j, k = divmod(rest, n)
    return i, j, k


@dataclass(frozen=True)
class StochasticTensor:
    """An n×n×n array of exact rationals, stored flat.

    Construction checks only the shape; use :func:`validate` (or
    :meth:`checked`) for the line-sum conditions, since intermediate points in
    some algorithms are built before they are known to be stochastic.
    """

    n: int
    entries: Vector

    def __post_init__(self) -> None:
        if self.n < 1:
            raise TensorShapeError(
                "Tensor dimension must be at least 1", ErrorContext(operation="StochasticTensor", details={"n": self.n})
            )
        if len(self.entries) != self.n**3:
            raise TensorShapeError(
                "Tensor needs exactly n³ entries",
                ErrorContext(operation="StochasticTensor", details={"n": self.n, "entries": len(self.entries)}),
            )
        object.__setattr__(self, "entries", as_vector(self.entries))

    @classmethod
    def from_nested(cls, grid: Any) -> "StochasticTensor":
        """Build a tensor from an ``entries[i][j][k]`` nested sequence.

        Raises:
            TensorShapeError: If the grid is ragged or not cubic
        """
        n = _cubic_side(grid)
        return cls(n, tuple(grid[i][j][k] for i in range(n) for j in range(n) for k in range(n)))

    @classmethod
    def checked(cls, n: int, entries: Sequence[Number]) -> "StochasticTensor":
        """Build a tensor and require it to satisfy all stochastic conditions."""
        tensor = cls(n, tuple(entries))
        report = validate(tensor)
        if not report.ok:
            raise ValidationError(
                report.message, ErrorContext(operation="StochasticTensor.checked", details=report.details())
            )
        return tensor

    def entry(self, i: int, j: int, k: int) -> Fraction:
        """Entry (i, j, k)."""
        return self.entries[flat_index(self.n, i, j, k)]

    def as_array(self) -> np.ndarray:
        """n×n×n numpy object array of Fractions (exact; numpy only does the indexing)."""
        arr = np.empty(len(self.entries), dtype=object)
        arr[:] = self.entries
        return arr.reshape(self.n, self.n, self.n)

    def as_nested(self) -> List[List[List[Fraction]]]:
        """Entries as an ``[i][j][k]`` nested list."""
        return self.as_array().tolist()


@dataclass(frozen=True)
class LatinSquare:
    """An n×n array over symbols 1..n, each row and column a permutation."""

    n: int
    cells: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        problem = latin_square_problem(self.cells)
        if problem is not None or len(self.cells) != self.n:
            raise ValidationError(
                problem or "Row count does not match n",
                ErrorContext(operation="LatinSquare", details={"n": self.n, "cells": self.cells}),
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "LatinSquare":
        """Build a square from its rows of symbols 1..n."""
        return cls(len(rows), tuple(tuple(int(s) for s in row) for row in rows))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`: ok, or the first violated condition and where."""

    ok: bool
    condition: Optional[str] = None
    indices: Optional[Tuple[int, ...]] = None
    value: Optional[Fraction] = None

    @property
    def message(self) -> str:
        if self.ok:
            return "ok"
        assert self.condition is not None and self.indices is not None
        if self.condition == "nonnegativity":
            i, j, k = self.indices
            return f"entry ({i},{j},{k}) < 0"
        axis = {"sum_over_i": ("j", "k"), "sum_over_j": ("i", "k"), "sum_over_k": ("i", "j")}[self.condition]
        where = ",".join(f"{name}={idx}" for name, idx in zip(axis, self.indices))
        return f"line sum {self.condition} at ({where}) is {self.value}, expected 1"

    def details(self) -> dict:
        return {"condition": self.condition, "indices": self.indices, "value": str(self.value)}


def _cubic_side(grid: Any) -> int:
    """Side length of a nested n×n×n grid; raise on anything ragged."""
    try:
        n = len(grid)
    except TypeError as e:
        raise TensorShapeError("Tensor grid is not a sequence", ErrorContext(operation="shape_check")) from e
    if n < 1:
        raise TensorShapeError("Tensor grid is empty", ErrorContext(operation="shape_check"))
    for i, plane in enumerate(grid):
        if not isinstance(plane, (list, tuple)) or len(plane) != n:
            raise TensorShapeError(
                "Ragged tensor grid", ErrorContext(operation="shape_check", details={"i": i, "expected": n})
            )
        for j, line in enumerate(plane):
            if not isinstance(line, (list, tuple)) or len(line) != n:
                raise TensorShapeError(
                    "Ragged tensor grid",
                    ErrorContext(operation="shape_check", details={"i": i, "j": j, "expected": n}),
                )
    return n


def validate(candidate: Any) -> ValidationReport:
    """Check the stochastic tensor conditions exactly.

    Conditions are checked in order: nonnegativity, then sums over i for every
    (j, k), sums over j for every (i, k), sums over k for every (i, j). The
    first violation found is reported.

    Args:
        candidate: A StochasticTensor or an ``entries[i][j][k]`` nested grid

    Raises:
        TensorShapeError: If a nested grid is ragged
    """
    tensor = candidate if isinstance(candidate, StochasticTensor) else StochasticTensor.from_nested(candidate)
    arr = tensor.as_array()
    n = tensor.n

    for index, value in enumerate(tensor.entries):
        if value < 0:
            return ValidationReport(False, "nonnegativity", unflatten_index(n, index), value)

    for axis, name in ((0, "sum_over_i"), (1, "sum_over_j"), (2, "sum_over_k")):
        sums = arr.sum(axis=axis)
        for a in range(n):
            for b in range(n):
                total = Fraction(sums[a, b])
                if total != 1:
                    return ValidationReport(False, name, (a, b), total)
    return ValidationReport(True)


def is_integral(t: StochasticTensor) -> bool:
    """True iff every entry is 0 or 1."""
    return all(v == 0 or v == 1 for v in t.entries)


def latin_to_tensor(square: LatinSquare) -> StochasticTensor:
    """The 0-1 permutation tensor of a Latin square."""
    n = square.n
    entries = [ZERO] * n**3
    for i, row in enumerate(square.cells):
        for j, symbol in enumerate(row):
            entries[flat_index(n, i, j, symbol - 1)] = ONE
    return StochasticTensor(n, tuple(entries))


def tensor_to_latin(t: StochasticTensor) -> Optional[LatinSquare]:
    """Inverse of :func:`latin_to_tensor`; None when the tensor is not integral."""
    if not is_integral(t):
        return None
    n = t.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            ones = [k for k in range(n) if t.entry(i, j, k) == 1]
            if len(ones) != 1:
                raise ValidationError(
                    "Integral tensor is not stochastic",
                    ErrorContext(operation="tensor_to_latin", details={"i": i, "j": j}),
                )
            row.append(ones[0] + 1)
        rows.append(row)
    return LatinSquare.from_rows(rows)


def latin_square_problem(cells: Sequence[Sequence[int]]) -> Optional[str]:
    """Describe why ``cells`` is not a Latin square, or None if it is one."""
    n = len(cells)
    symbols = set(range(1, n + 1))
    for i, row in enumerate(cells):
        if len(row) != n:
            return f"row {i} has length {len(row)}, expected {n}"
        if set(row) != symbols:
            return f"row {i} is not a permutation of 1..{n}"
    for j in range(n):
        if {cells[i][j] for i in range(n)} != symbols:
            return f"column {j} is not a permutation of 1..{n}"
    return None


def cyclic_latin_square(n: int) -> LatinSquare:
    """The square with cells[i][j] = (i + j) mod n + 1."""
    return LatinSquare.from_rows([[(i + j) % n + 1 for j in range(n)] for i in range(n)])


def convex_combination(terms: Sequence[Tuple[Number, StochasticTensor]]) -> StochasticTensor:
    """Exact weighted sum of tensors of the same dimension."""
    if not terms:
        raise DimensionMismatchError("Empty combination", ErrorContext(operation="convex_combination"))
    n = terms[0][1].n
    total = [ZERO] * n**3
    for weight, tensor in terms:
        if tensor.n != n:
            raise DimensionMismatchError(
                "Tensors of different dimension",
                ErrorContext(operation="convex_combination", details={"n": n, "other": tensor.n}),
            )
        w = Fraction(weight)
        for index, value in enumerate(tensor.entries):
            if value:
                total[index] += w * value
    return StochasticTensor(n, tuple(total))


def _random_fill(n: int, rng: random.Random) -> List[List[int]]:
    """Randomized backtracking: fill cells row-major, trying the free symbols in shuffled order."""
    cells = [[0] * n for _ in range(n)]
    row_used = [0] * n
    col_used = [0] * n

    def fill(position: int) -> bool:
        if position == n * n:
            return True
        i, j = divmod(position, n)
        candidates = [s for s in range(n) if not (row_used[i] | col_used[j]) & (1 << s)]
        rng.shuffle(candidates)
        for s in candidates:
            cells[i][j] = s + 1
            row_used[i] |= 1 << s
            col_used[j] |= 1 << s
            if fill(position + 1):
                return True
            row_used[i] &= ~(1 << s)
            col_used[j] &= ~(1 << s)
        cells[i][j] = 0
        return False

    fill(0)
    return cells


def random_latin_square(n: int, rng: random.Random) -> LatinSquare:
    """Random Latin square of order n.

    Up to ``FULL_SUPPORT_MAX_ORDER`` every square of order n can be drawn
    (randomized backtracking, not uniform). Above it, rows, columns and
    symbols of the cyclic square are permuted, which reaches only the squares
    isotopic to it.
    """
    if n <= FULL_SUPPORT_MAX_ORDER:
        return LatinSquare.from_rows(_random_fill(n, rng))
    rows = list(range(n))
    cols = list(range(n))
    symbols = list(range(1, n + 1))
    rng.shuffle(rows)
    rng.shuffle(cols)
    rng.shuffle(symbols)
    return LatinSquare.from_rows([[symbols[(rows[i] + cols[j]) % n] for j in range(n)] for i in range(n)])


def random_tensor(
    n: int,
    seed: int,
    max_denominator: int = DEFAULT_MAX_DENOMINATOR,
    max_terms: Optional[int] = None,
) -> StochasticTensor:
    """Reproducible pseudo-random point of Ωₙ.

    A convex combination of randomly chosen Latin-square tensors whose weights
    share one denominator no larger than ``max_denominator``.

    Args:
        n: Tensor dimension
        seed: Generator seed; equal seeds give equal tensors
        max_denominator: Bound on the common weight denominator
        max_terms: Bound on the number of combined squares, default (n−1)³+1
    """
    if n < 1:
        raise ValidationError("n must be at least 1", ErrorContext(operation="random_tensor", details={"n": n}))
    rng = random.Random(seed)
    limit = max_terms if max_terms is not None else (n - 1) ** 3 + 1
    terms = rng.randint(1, max(1, min(limit, max_denominator)))
    denominator = rng.randint(terms, max_denominator)

    # Random composition of `denominator` into `terms` positive parts
    cuts = sorted(rng.sample(range(1, denominator), terms - 1))
    bounds = [0, *cuts, denominator]
    weights = [Fraction(bounds[t + 1] - bounds[t], denominator) for t in range(terms)]

    squares = [latin_to_tensor(random_latin_square(n, rng)) for _ in range(terms)]
    tensor = convex_combination(list(zip(weights, squares)))
    logger.debug("Generated random tensor", extra={"n": n, "seed": seed, "terms": terms, "denominator": denominator})
    return tensor


def check_same_dimension(n: int, tensor: StochasticTensor, operation: str) -> None:
    """Raise DimensionMismatchError unless the tensor has dimension n."""
    if tensor.n != n:
        raise DimensionMismatchError(
            f"Tensor has dimension {tensor.n}, expected {n}",
            ErrorContext(operation=operation, details={"expected": n, "actual": tensor.n}),
        )
