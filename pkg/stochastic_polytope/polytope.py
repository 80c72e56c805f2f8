"""H-representations of Ωₙ (and friends), dimension, facets, vertex tests and decomposition.

A polytope is stored as ``{x : E·x = b, G·x ≥ h}``. For Ωₙ, E holds all 3n²
line-sum rows (redundant rows included, the rank computation takes care of
them) and G is the identity with h = 0.

Most of the geometry runs in an affine chart of the equality system: the
reduced row echelon form of E gives a particular solution x₀ with zeros in
the free columns and a nullspace basis N that is the identity on the free
columns, so ``x = x₀ + N·z`` and z is simply x restricted to the free
columns. Inequalities become ``A·z ≥ c`` with A = G·N and c = h − G·x₀.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, List, Optional, Sequence, Tuple

from .exceptions import (
    ConsistencyError,
    EmptyPolytopeError,
    ErrorContext,
    UnboundedPolyhedronError,
    ValidationError,
)
from .linalg import ONE, ZERO, Number, RationalMatrix, Vector, as_vector, dot, nullspace_basis, rank, row_reduce
from .logging_config import get_logger
from .performance import monitor_performance
from .tensor import StochasticTensor, check_same_dimension, flat_index, validate

logger = get_logger(__name__)

OMEGA = "omega"
BIRKHOFF = "birkhoff"
GENERIC = "generic"


@dataclass(frozen=True)
class AffineChart:
    """Coordinates z on the affine hull of the equalities, x = origin + Σ zⱼ·basis[j]."""

    origin: Vector
    basis: Tuple[Vector, ...]
    free_columns: Tuple[int, ...]
    equality_rank: int
    reduced_inequalities: RationalMatrix
    reduced_rhs: Vector

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_reduced(self, x: Sequence[Number]) -> Vector:
        """Chart coordinates z of an ambient point."""
        return tuple(Fraction(x[c]) - self.origin[c] for c in self.free_columns)

    def to_ambient(self, z: Sequence[Number]) -> Vector:
        """Ambient point x₀ + N·z."""
        x = list(self.origin)
        for coefficient, vector in zip(z, self.basis):
            if coefficient:
                for index, value in enumerate(vector):
                    if value:
                        x[index] += coefficient * value
        return tuple(x)

    def slack(self, z: Sequence[Number]) -> Vector:
        """``A·z − c``; nonnegative exactly on the polytope."""
        a = self.reduced_inequalities
        return tuple(dot(a.row(i), z) - self.reduced_rhs[i] for i in range(a.rows))

    def rates(self, direction: Sequence[Number]) -> Vector:
        """How fast each slack changes along ``direction``."""
        return self.reduced_inequalities.matvec(direction)

    def active_rank(self, active: Sequence[int]) -> int:
        """Rank of the equalities stacked with the given inequality rows, in ambient terms."""
        if not active:
            return self.equality_rank
        return self.equality_rank + rank(self.reduced_inequalities.select_rows(active))


@dataclass(frozen=True)
class HRepresentation:
    """``{x : equalities·x = equality_rhs, inequalities·x ≥ inequality_rhs}``."""

    ambient_dim: int
    equalities: RationalMatrix
    equality_rhs: Vector
    inequalities: RationalMatrix
    inequality_rhs: Vector
    n: Optional[int] = None
    kind: str = GENERIC

    @classmethod
    def generic(
        cls,
        equalities: Sequence[Sequence[Number]],
        equality_rhs: Sequence[Number],
        inequalities: Sequence[Sequence[Number]],
        inequality_rhs: Sequence[Number],
        ambient_dim: Optional[int] = None,
    ) -> "HRepresentation":
        """An arbitrary polytope; inequality rows are read as ``g·x ≥ h``."""
        width = ambient_dim
        if width is None:
            width = len(inequalities[0]) if inequalities else len(equalities[0])
        e = RationalMatrix.from_rows(equalities, cols=width)
        g = RationalMatrix.from_rows(inequalities, cols=width)
        if len(equality_rhs) != e.rows or len(inequality_rhs) != g.rows:
            raise ValidationError(
                "Right-hand side lengths do not match the constraint rows",
                ErrorContext(
                    operation="HRepresentation.generic", details={"equalities": e.rows, "inequalities": g.rows}
                ),
            )
        return cls(width, e, as_vector(equality_rhs), g, as_vector(inequality_rhs))

    @cached_property
    def chart(self) -> AffineChart:
        """Affine chart of the equality system.

        Raises:
            EmptyPolytopeError: If the equalities are inconsistent
        """
        if self.equalities.rows:
            echelon = row_reduce(self.equalities, rhs=self.equality_rhs)
            assert echelon.rhs is not None
            if any(echelon.rhs[r] for r in range(echelon.rank, self.equalities.rows)):
                raise EmptyPolytopeError(
                    "Equality system is inconsistent", ErrorContext(operation="chart", details={"kind": self.kind})
                )
            origin = [ZERO] * self.ambient_dim
            for r, pc in enumerate(echelon.pivot_columns):
                origin[pc] = echelon.rhs[r]
            free = echelon.free_columns
            equality_rank = echelon.rank
        else:
            origin = [ZERO] * self.ambient_dim
            free = tuple(range(self.ambient_dim))
            equality_rank = 0
        basis = tuple(nullspace_basis(self.equalities)) if self.ambient_dim else ()

        g = self.inequalities
        columns = [g.matvec(vector) for vector in basis]
        entries = tuple(columns[j][i] for i in range(g.rows) for j in range(len(basis)))
        reduced = RationalMatrix(g.rows, len(basis), entries)
        offsets = g.matvec(origin)
        reduced_rhs = tuple(self.inequality_rhs[i] - offsets[i] for i in range(g.rows))
        return AffineChart(
            origin=tuple(origin),
            basis=basis,
            free_columns=tuple(free),
            equality_rank=equality_rank,
            reduced_inequalities=reduced,
            reduced_rhs=reduced_rhs,
        )

    def contains(self, x: Sequence[Number]) -> bool:
        """Exact membership test."""
        if len(x) != self.ambient_dim:
            return False
        if self.equalities.matvec(x) != self.equality_rhs:
            return False
        return all(lhs >= rhs for lhs, rhs in zip(self.inequalities.matvec(x), self.inequality_rhs))


@dataclass(frozen=True)
class VertexCertificate:
    """Tight inequalities at a point and the rank they give together with the equalities."""

    point: Any
    active_inequalities: Tuple[int, ...]
    active_rank: int
    ambient_dim: int

    @property
    def is_vertex(self) -> bool:
        return self.active_rank == self.ambient_dim


def build_omega_h(n: int) -> HRepresentation:
    """H-representation of Ωₙ in ℝ^{n³}.

    Equality rows come in three families, in this order: Σᵢ x_ijk = 1 for each
    (j, k), Σⱼ x_ijk = 1 for each (i, k), Σₖ x_ijk = 1 for each (i, j).
    Inequality row ``flat_index(i, j, k)`` is x_ijk ≥ 0.
    """
    if n < 1:
        raise ValidationError("n must be at least 1", ErrorContext(operation="build_omega_h", details={"n": n}))
    size = n**3
    rows: List[List[int]] = []
    for a in range(n):
        for b in range(n):
            row = [0] * size
            for i in range(n):
                row[flat_index(n, i, a, b)] = 1
            rows.append(row)
    for a in range(n):
        for b in range(n):
            row = [0] * size
            for j in range(n):
                row[flat_index(n, a, j, b)] = 1
            rows.append(row)
    for a in range(n):
        for b in range(n):
            row = [0] * size
            for k in range(n):
                row[flat_index(n, a, b, k)] = 1
            rows.append(row)

    return HRepresentation(
        ambient_dim=size,
        equalities=RationalMatrix.from_rows(rows),
        equality_rhs=(ONE,) * len(rows),
        inequalities=RationalMatrix.identity(size),
        inequality_rhs=(ZERO,) * size,
        n=n,
        kind=OMEGA,
    )


def build_birkhoff_h(n: int) -> HRepresentation:
    """H-representation of the Birkhoff polytope ωₙ of n×n doubly stochastic matrices.

    Coordinates are x_ij at flat index i·n + j; n row-sum rows then n column-sum rows.
    """
    if n < 1:
        raise ValidationError("n must be at least 1", ErrorContext(operation="build_birkhoff_h", details={"n": n}))
    size = n * n
    rows = [[1 if index // n == i else 0 for index in range(size)] for i in range(n)]
    rows += [[1 if index % n == j else 0 for index in range(size)] for j in range(n)]
    return HRepresentation(
        ambient_dim=size,
        equalities=RationalMatrix.from_rows(rows),
        equality_rhs=(ONE,) * len(rows),
        inequalities=RationalMatrix.identity(size),
        inequality_rhs=(ZERO,) * size,
        n=n,
        kind=BIRKHOFF,
    )


def dimension(h: HRepresentation) -> int:
    """Ambient dimension minus the rank of the equalities: (n−1)³ for Ωₙ."""
    return h.ambient_dim - rank(h.equalities)


def facet_count(h: HRepresentation) -> int:
    """Number of inequality rows, which is how Ωₙ's n³ facets are counted.

    For n ≤ 2 several coordinate inequalities of Ωₙ define the same face or the
    whole polytope, so the count is a count of constraints there, not of
    geometric facets.
    """
    count = h.inequalities.rows
    if h.kind in (OMEGA, BIRKHOFF) and h.n is not None and h.n <= 2:
        logger.info(
            "Facet count is the inequality count; not all of them are proper facets",
            extra={"n": h.n, "kind": h.kind, "count": count},
        )
    return count


def certify_point(h: HRepresentation, x: Sequence[Number]) -> VertexCertificate:
    """Vertex certificate for a feasible point given in ambient coordinates.

    Raises:
        ValidationError: If the point is not in the polytope
    """
    point = as_vector(x)
    if not h.contains(point):
        raise ValidationError(
            "Point is not in the polytope", ErrorContext(operation="certify_point", details={"kind": h.kind})
        )
    chart = h.chart
    slack = chart.slack(chart.to_reduced(point))
    active = tuple(i for i, s in enumerate(slack) if s == 0)
    return VertexCertificate(point, active, chart.active_rank(active), h.ambient_dim)


def is_vertex(h: HRepresentation, t: StochasticTensor) -> VertexCertificate:
    """Vertex certificate for a stochastic tensor against Ωₙ's H-representation.

    Raises:
        DimensionMismatchError: If ``t.n`` differs from ``h.n``
        ValidationError: If ``t`` is not a stochastic tensor
    """
    if h.n is not None:
        check_same_dimension(h.n, t, "is_vertex")
    report = validate(t)
    if not report.ok:
        raise ValidationError(report.message, ErrorContext(operation="is_vertex", details=report.details()))
    certificate = certify_point(h, t.entries)
    return VertexCertificate(t, certificate.active_inequalities, certificate.active_rank, certificate.ambient_dim)


def _blocking_step(slack: Sequence[Fraction], rates: Sequence[Fraction]) -> Optional[Fraction]:
    """Largest step keeping every slack nonnegative, or None if nothing blocks."""
    best: Optional[Fraction] = None
    for s, r in zip(slack, rates):
        if r < 0:
            step = s / -r
            if best is None or step < best:
                best = step
    return best


def descend_to_vertex(chart: AffineChart, z: Vector) -> Vector:
    """Walk from ``z`` to a vertex of its minimal face.

    Each step moves along the first nullspace vector of the tight rows (the +
    direction when it is blocked, otherwise the − direction) until another
    inequality becomes tight.
    """
    a = chart.reduced_inequalities
    while True:
        slack = chart.slack(z)
        active = [i for i, s in enumerate(slack) if s == 0]
        free_directions = nullspace_basis(RationalMatrix.from_rows([a.row(i) for i in active], cols=a.cols))
        if not free_directions:
            return z
        direction = free_directions[0]
        rates = chart.rates(direction)
        step = _blocking_step(slack, rates)
        if step is None:
            direction = tuple(-v for v in direction)
            step = _blocking_step(slack, tuple(-r for r in rates))
        if step is None:
            raise UnboundedPolyhedronError(
                "Polyhedron contains a line; it is not a polytope", ErrorContext(operation="descend_to_vertex")
            )
        z = tuple(zi + step * di for zi, di in zip(z, direction))


def decompose_point(h: HRepresentation, x: Sequence[Number]) -> List[Tuple[Fraction, Vector]]:
    """Write a point of the polytope as a convex combination of vertices.

    Each round descends from the current residual to a vertex v of its minimal
    face, then pushes the residual away from v along the ray until a new
    inequality becomes tight: residual = θ·v + (1−θ)·next. The rank of the
    tight rows grows every round, so there are at most dimension + 1 terms.

    Returns:
        (weight, vertex) pairs with positive weights summing to 1
    """
    point = as_vector(x)
    if not h.contains(point):
        raise ValidationError("Point is not in the polytope", ErrorContext(operation="decompose_point"))
    chart = h.chart
    limit = chart.dimension + 1

    terms: List[Tuple[Fraction, Vector]] = []
    mass = ONE
    residual = chart.to_reduced(point)
    while True:
        vertex = descend_to_vertex(chart, residual)
        if vertex == residual:
            terms.append((mass, residual))
            break
        direction = tuple(r - v for r, v in zip(residual, vertex))
        step = _blocking_step(chart.slack(vertex), chart.rates(direction))
        if step is None:
            raise UnboundedPolyhedronError("Ray never leaves the polyhedron", ErrorContext(operation="decompose_point"))
        theta = ONE - ONE / step
        terms.append((mass * theta, vertex))
        mass = mass / step
        residual = tuple(v + step * d for v, d in zip(vertex, direction))
        if len(terms) >= limit:
            raise ConsistencyError(
                "Decomposition exceeded dimension + 1 terms",
                ErrorContext(operation="decompose_point", details={"limit": limit}),
            )

    logger.debug("Decomposed point", extra={"terms": len(terms), "dimension": chart.dimension})
    return [(weight, chart.to_ambient(v)) for weight, v in terms]


@monitor_performance("caratheodory_decompose")
def caratheodory_decompose(h: HRepresentation, t: StochasticTensor) -> List[Tuple[Fraction, StochasticTensor]]:
    """Decompose a stochastic tensor into at most (n−1)³+1 weighted vertices of Ωₙ.

    Raises:
        ValidationError: If ``t`` is not a stochastic tensor
        DimensionMismatchError: If ``t.n`` differs from ``h.n``
    """
    if h.n is not None:
        check_same_dimension(h.n, t, "caratheodory_decompose")
    report = validate(t)
    if not report.ok:
        raise ValidationError(
            f"Cannot decompose: {report.message}",
            ErrorContext(operation="caratheodory_decompose", details=report.details()),
        )
    return [(weight, StochasticTensor(t.n, vertex)) for weight, vertex in decompose_point(h, t.entries)]
