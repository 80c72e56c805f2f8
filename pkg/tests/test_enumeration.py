from fractions import Fraction

import pytest

from stochastic_polytope.batch_processor import BatchProcessor
from stochastic_polytope.enumeration import (
    ALGEBRAIC,
    COMBINATORIAL,
    DoubleDescription,
    enumerate_latin_squares,
    enumerate_vertices,
    homogenized_rows,
    latin_count_backtrack,
    primitive,
)
from stochastic_polytope.exceptions import EmptyPolytopeError, UnboundedPolyhedronError, ValidationError
from stochastic_polytope.polytope import HRepresentation, build_birkhoff_h, build_omega_h, is_vertex
from stochastic_polytope.tensor import LatinSquare, latin_to_tensor, validate


def triangle():
    return HRepresentation.generic([], [], [[1, 0], [0, 1], [-1, -1]], [0, 0, -1], ambient_dim=2)


def test_primitive_scales_to_coprime_integers():
    assert primitive([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert primitive([4, 6, 0]) == (2, 3, 0)


def test_homogenized_rows_start_with_the_head_row():
    rows = homogenized_rows(triangle())
    assert rows[0] == (1, 0, 0)
    assert rows[3] == (1, -1, -1)


def test_unknown_adjacency_method_is_rejected():
    with pytest.raises(ValidationError):
        DoubleDescription([(1, 0)], adjacency="guess")


@pytest.mark.parametrize("adjacency", [COMBINATORIAL, ALGEBRAIC])
def test_triangle_has_three_vertices(adjacency):
    vertex_set = enumerate_vertices(triangle(), adjacency=adjacency)
    assert vertex_set.points == ((0, 0), (0, 1), (1, 0))


def test_omega1_is_a_point():
    vertex_set = enumerate_vertices(build_omega_h(1))
    assert (vertex_set.total, vertex_set.integral_count, vertex_set.nonintegral_count) == (1, 1, 0)


@pytest.mark.parametrize("adjacency", [COMBINATORIAL, ALGEBRAIC])
def test_omega2_has_two_integral_vertices(adjacency):
    vertex_set = enumerate_vertices(build_omega_h(2), adjacency=adjacency)
    assert vertex_set.total == 2
    assert vertex_set.integral_count == 2


def test_omega3_counts(omega3_vertices):
    assert omega3_vertices.total == 66
    assert omega3_vertices.integral_count == 12
    assert omega3_vertices.nonintegral_count == 54


def test_omega3_vertices_are_certified(omega3_vertices):
    h = build_omega_h(3)
    for tensor in omega3_vertices.vertices:
        assert validate(tensor).ok
        assert is_vertex(h, tensor).is_vertex


def test_omega3_vertices_are_sorted_and_distinct(omega3_vertices):
    points = list(omega3_vertices.points)
    assert points == sorted(set(points))


@pytest.mark.parametrize("n", [2, 3])
def test_integral_vertices_are_the_latin_squares(n, omega3_vertices):
    vertex_set = omega3_vertices if n == 3 else enumerate_vertices(build_omega_h(n))
    integral = {p for p in vertex_set.points if all(v in (0, 1) for v in p)}
    squares = {latin_to_tensor(square).entries for square in enumerate_latin_squares(n)}
    assert integral == squares


@pytest.mark.parametrize("adjacency", [COMBINATORIAL, ALGEBRAIC])
def test_birkhoff3_vertices_are_permutation_matrices(adjacency):
    vertex_set = enumerate_vertices(build_birkhoff_h(3), adjacency=adjacency)
    assert vertex_set.total == 6
    assert vertex_set.integral_count == 6
    for point in vertex_set.points:
        rows = [point[3 * i : 3 * i + 3] for i in range(3)]
        assert all(sum(row) == 1 for row in rows)


def test_birkhoff4_has_factorial_many_vertices():
    assert enumerate_vertices(build_birkhoff_h(4)).total == 24


def test_parallel_pairing_gives_the_same_vertices():
    serial = enumerate_vertices(build_birkhoff_h(3))
    parallel = enumerate_vertices(build_birkhoff_h(3), processor=BatchProcessor(batch_size=1, max_workers=4))
    assert serial == parallel


def test_vertices_property_is_only_for_omega():
    vertex_set = enumerate_vertices(build_birkhoff_h(2))
    with pytest.raises(ValidationError):
        vertex_set.vertices


def test_infeasible_system_is_empty():
    h = HRepresentation.generic([], [], [[1], [-1]], [1, 0])
    with pytest.raises(EmptyPolytopeError):
        enumerate_vertices(h)


def test_half_line_is_unbounded():
    h = HRepresentation.generic([], [], [[1]], [0])
    with pytest.raises(UnboundedPolyhedronError):
        enumerate_vertices(h)


def test_latin_squares_in_lexicographic_order():
    squares = enumerate_latin_squares(3)
    assert len(squares) == 12
    assert squares[0] == LatinSquare.from_rows([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    assert squares == sorted(squares, key=lambda s: s.cells)


@pytest.mark.parametrize("n, expected", [(1, 1), (2, 2), (3, 12), (4, 576)])
def test_latin_count_backtrack(n, expected):
    assert latin_count_backtrack(n) == expected


def test_latin_count_rejects_zero():
    with pytest.raises(ValidationError):
        latin_count_backtrack(0)
