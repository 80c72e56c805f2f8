"""Exact vertex enumeration and Latin square enumeration.

Vertices are found with the double description method run on the
homogenized cone of the polytope in its affine chart::

    P = {z : A·z ≥ c}   ->   C = {(y₀, y) : y₀ ≥ 0, A·y − c·y₀ ≥ 0}

Vertices of P are the extreme rays of C with y₀ > 0. Rays are kept as
primitive integer vectors together with a bitmask of the constraints they
make tight, which is all the adjacency test needs.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .batch_processor import BatchProcessor, chunk_sequence
from .exceptions import EmptyPolytopeError, ErrorContext, UnboundedPolyhedronError, ValidationError
from .linalg import RationalMatrix, Vector, rank, solve
from .logging_config import get_logger
from .performance import monitor_performance
from .polytope import OMEGA, HRepresentation
from .tensor import LatinSquare, StochasticTensor, is_integral

logger = get_logger(__name__)

COMBINATORIAL = "combinatorial"
ALGEBRAIC = "algebraic"
ADJACENCY_METHODS = (COMBINATORIAL, ALGEBRAIC)

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Ray:
    """Extreme ray of the current cone: primitive integer direction and tight-constraint bitmask."""

    vector: IntVector
    tight: int


@dataclass(frozen=True)
class VertexSet:
    """All vertices of a polytope in canonical (lexicographic) order."""

    n: Optional[int]
    kind: str
    points: Tuple[Vector, ...]
    integral_count: int
    nonintegral_count: int

    @property
    def total(self) -> int:
        """Number of vertices."""
        return len(self.points)

    @property
    def vertices(self) -> Tuple[StochasticTensor, ...]:
        """The vertices as stochastic tensors (Ωₙ only)."""
        if self.kind != OMEGA or self.n is None:
            raise ValidationError(
                "Only vertex sets of Ωₙ hold tensors",
                ErrorContext(operation="VertexSet.vertices", details={"kind": self.kind}),
            )
        return tuple(StochasticTensor(self.n, p) for p in self.points)


def primitive(values: Sequence[Fraction]) -> IntVector:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    denominator = 1
    for v in values:
        denominator = math.lcm(denominator, Fraction(v).denominator)
    ints = [int(Fraction(v) * denominator) for v in values]
    divisor = 0
    for v in ints:
        divisor = math.gcd(divisor, v)
    if divisor > 1:
        ints = [v // divisor for v in ints]
    return tuple(ints)


def _int_dot(a: IntVector, b: IntVector) -> int:
    return sum(x * y for x, y in zip(a, b) if x and y)


def homogenized_rows(h: HRepresentation) -> List[IntVector]:
    """Row 0 is y₀ ≥ 0; row i+1 is inequality i of the chart, (−cᵢ, Aᵢ)."""
    chart = h.chart
    a = chart.reduced_inequalities
    rows = [tuple([1] + [0] * a.cols)]
    for i in range(a.rows):
        rows.append(primitive([-chart.reduced_rhs[i], *a.row(i)]))
    return rows


def _initial_cone(rows: List[IntVector]) -> Tuple[List[int], List[Ray]]:
    """Pick independent rows greedily in order and return the simplicial cone they bound."""
    width = len(rows[0])
    chosen: List[int] = []
    for index, row in enumerate(rows):
        candidate = RationalMatrix.from_rows([rows[c] for c in chosen] + [row], cols=width)
        if rank(candidate) == len(chosen) + 1:
            chosen.append(index)
            if len(chosen) == width:
                break
    if len(chosen) < width:
        raise UnboundedPolyhedronError(
            "Constraint rows do not span the space; the polyhedron has a lineality space",
            ErrorContext(operation="initial_cone", details={"rank": len(chosen), "width": width}),
        )

    basis = RationalMatrix.from_rows([rows[c] for c in chosen])
    full = 0
    for c in chosen:
        full |= 1 << c
    rays = []
    for position, row_index in enumerate(chosen):
        unit = [0] * width
        unit[position] = 1
        direction = solve(basis, unit)
        assert direction is not None
        rays.append(Ray(primitive(direction), full & ~(1 << row_index)))
    return chosen, rays


class DoubleDescription:
    """Incremental conversion of ``{y : R·y ≥ 0}`` into its extreme rays."""

    def __init__(
        self,
        rows: List[IntVector],
        adjacency: str = COMBINATORIAL,
        processor: Optional[BatchProcessor] = None,
    ):
        if adjacency not in ADJACENCY_METHODS:
            raise ValidationError(
                f"Unknown adjacency method: {adjacency}",
                ErrorContext(operation="DoubleDescription", details={"choices": ADJACENCY_METHODS}),
            )
        self.rows = rows
        self.width = len(rows[0])
        self.adjacency = adjacency
        self.processor = processor or BatchProcessor(batch_size=64, max_workers=1)

    def _adjacent_combinatorial(self, common: int, rays: List[Ray]) -> bool:
        # Only p and n themselves may contain the common tight set
        holders = 0
        for r in rays:
            if r.tight & common == common:
                holders += 1
                if holders > 2:
                    return False
        return True

    def _adjacent_algebraic(self, common: int) -> bool:
        tight_rows = [row for index, row in enumerate(self.rows) if common >> index & 1]
        if not tight_rows:
            return self.width == 2
        return rank(RationalMatrix.from_rows(tight_rows, cols=self.width)) == self.width - 2

    def _new_rays(
        self,
        plus: Sequence[Tuple[Ray, int]],
        minus: Sequence[Tuple[Ray, int]],
        rays: List[Ray],
        row_bit: int,
    ) -> List[Ray]:
        created = []
        needed = self.width - 2
        for p, vp in plus:
            for m, vm in minus:
                common = p.tight & m.tight
                if common.bit_count() < needed:
                    continue
                if self.adjacency == COMBINATORIAL:
                    adjacent = self._adjacent_combinatorial(common, rays)
                else:
                    adjacent = self._adjacent_algebraic(common)
                if not adjacent:
                    continue
                combined = [vp * b - vm * a for a, b in zip(p.vector, m.vector)]
                divisor = 0
                for v in combined:
                    divisor = math.gcd(divisor, v)
                created.append(Ray(tuple(v // divisor for v in combined), common | row_bit))
        return created

    def run(self) -> List[Ray]:
        """Insert every constraint and return the extreme rays."""
        chosen, rays = _initial_cone(self.rows)
        initial = set(chosen)
        remaining = [i for i in range(len(self.rows)) if i not in initial]
        logger.debug("Initial cone", extra={"rows": chosen, "rays": len(rays)})

        for index in remaining:
            row = self.rows[index]
            row_bit = 1 << index
            plus, zero, minus = [], [], []
            for ray in rays:
                value = _int_dot(row, ray.vector)
                if value > 0:
                    plus.append((ray, value))
                elif value == 0:
                    zero.append(Ray(ray.vector, ray.tight | row_bit))
                else:
                    minus.append((ray, value))

            current = rays
            batches = self.processor.map_chunks(
                chunk_sequence(plus, self.processor.batch_size),
                lambda chunk: self._new_rays(chunk, minus, current, row_bit),
            )
            created = [ray for batch in batches for ray in batch]
            rays = [ray for ray, _ in plus] + zero + created
            logger.debug(
                "Added constraint",
                extra={"row": index, "plus": len(plus), "zero": len(zero), "minus": len(minus), "rays": len(rays)},
            )
        return rays


@monitor_performance("enumerate_vertices")
def enumerate_vertices(
    h: HRepresentation,
    adjacency: str = COMBINATORIAL,
    processor: Optional[BatchProcessor] = None,
) -> VertexSet:
    """All vertices of a bounded H-representation, exact and in canonical order.

    Raises:
        EmptyPolytopeError: If the polytope is empty
        UnboundedPolyhedronError: If the polyhedron is unbounded
    """
    chart = h.chart
    rows = homogenized_rows(h)
    rays = DoubleDescription(rows, adjacency=adjacency, processor=processor).run()

    reduced_vertices = []
    recession = 0
    for ray in rays:
        head, tail = ray.vector[0], ray.vector[1:]
        if head > 0:
            reduced_vertices.append(tuple(Fraction(v, head) for v in tail))
        else:
            recession += 1
    if not reduced_vertices:
        raise EmptyPolytopeError(
            "Polytope is empty", ErrorContext(operation="enumerate_vertices", details={"kind": h.kind})
        )
    if recession:
        raise UnboundedPolyhedronError(
            "Polyhedron is unbounded",
            ErrorContext(operation="enumerate_vertices", details={"recession_rays": recession}),
        )

    points = sorted({chart.to_ambient(z) for z in reduced_vertices})
    if h.kind == OMEGA and h.n is not None:
        integral = sum(1 for p in points if is_integral(StochasticTensor(h.n, p)))
    else:
        integral = sum(1 for p in points if all(v == 0 or v == 1 for v in p))

    logger.info(
        "Enumerated vertices",
        extra={"kind": h.kind, "n": h.n, "total": len(points), "integral": integral},
    )
    return VertexSet(
        n=h.n,
        kind=h.kind,
        points=tuple(points),
        integral_count=integral,
        nonintegral_count=len(points) - integral,
    )


def _backtrack(n: int, visit: Callable[[List[List[int]]], None]) -> None:
    """Fill cells row-major, trying symbols in increasing order; call ``visit`` on each full square."""
    cells = [[0] * n for _ in range(n)]
    row_used = [0] * n
    col_used = [0] * n
    last = n * n

    def fill(position: int) -> None:
        if position == last:
            visit(cells)
            return
        i, j = divmod(position, n)
        taken = row_used[i] | col_used[j]
        for s in range(n):
            bit = 1 << s
            if taken & bit:
                continue
            cells[i][j] = s + 1
            row_used[i] |= bit
            col_used[j] |= bit
            fill(position + 1)
            row_used[i] &= ~bit
            col_used[j] &= ~bit
        cells[i][j] = 0

    fill(0)


def enumerate_latin_squares(n: int) -> List[LatinSquare]:
    """All Latin squares of order n in row-major lexicographic order."""
    if n < 1:
        raise ValidationError(
            "n must be at least 1", ErrorContext(operation="enumerate_latin_squares", details={"n": n})
        )
    squares: List[LatinSquare] = []
    _backtrack(n, lambda cells: squares.append(LatinSquare.from_rows(cells)))
    return squares


@monitor_performance("latin_count_backtrack")
def latin_count_backtrack(n: int) -> int:
    """L_n by backtracking, without materializing the squares."""
    if n < 1:
        raise ValidationError("n must be at least 1", ErrorContext(operation="latin_count_backtrack", details={"n": n}))
    count = 0

    def visit(_: List[List[int]]) -> None:
        nonlocal count
        count += 1

    _backtrack(n, visit)
    return count
