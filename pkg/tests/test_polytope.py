from fractions import Fraction

import pytest

from stochastic_polytope.enumeration import enumerate_latin_squares
from stochastic_polytope.exceptions import DimensionMismatchError, EmptyPolytopeError, ValidationError
from stochastic_polytope.polytope import (
    HRepresentation,
    build_birkhoff_h,
    build_omega_h,
    caratheodory_decompose,
    certify_point,
    decompose_point,
    dimension,
    facet_count,
    is_vertex,
)
from stochastic_polytope.tensor import (
    StochasticTensor,
    convex_combination,
    cyclic_latin_square,
    latin_to_tensor,
    random_tensor,
)

HALF = Fraction(1, 2)


def triangle():
    return HRepresentation.generic([], [], [[1, 0], [0, 1], [-1, -1]], [0, 0, -1], ambient_dim=2)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_omega_dimension(n):
    assert dimension(build_omega_h(n)) == (n - 1) ** 3


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_facet_count_is_n_cubed(n):
    assert facet_count(build_omega_h(n)) == n**3


@pytest.mark.parametrize("n", [2, 3, 4])
def test_birkhoff_dimension_and_facets(n):
    h = build_birkhoff_h(n)
    assert dimension(h) == (n - 1) ** 2
    assert facet_count(h) == n * n


def test_chart_dimension_matches_dimension():
    h = build_omega_h(3)
    assert h.chart.dimension == 8
    assert h.chart.equality_rank == 19


def test_permutation_tensor_is_vertex_with_full_rank():
    tensor = latin_to_tensor(cyclic_latin_square(3))
    certificate = is_vertex(build_omega_h(3), tensor)
    assert certificate.is_vertex
    assert certificate.active_rank == 27
    assert len(certificate.active_inequalities) == 18


def test_uniform_tensor_is_not_vertex():
    tensor = StochasticTensor(2, (HALF,) * 8)
    certificate = is_vertex(build_omega_h(2), tensor)
    assert not certificate.is_vertex
    assert certificate.active_inequalities == ()
    assert certificate.active_rank == 7


def test_is_vertex_rejects_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        is_vertex(build_omega_h(3), StochasticTensor(2, (HALF,) * 8))


def test_is_vertex_rejects_non_stochastic_tensor():
    with pytest.raises(ValidationError):
        is_vertex(build_omega_h(2), StochasticTensor(2, (1,) * 8))


def test_generic_triangle_membership_and_certificates():
    h = triangle()
    assert h.contains((Fraction(1, 3), Fraction(1, 3)))
    assert not h.contains((1, 1))
    assert certify_point(h, (1, 0)).is_vertex
    assert not certify_point(h, (HALF, 0)).is_vertex
    with pytest.raises(ValidationError):
        certify_point(h, (2, 0))


def test_inconsistent_equalities_give_empty_polytope():
    h = HRepresentation.generic([[1, 1], [1, 1]], [0, 1], [[1, 0], [0, 1]], [0, 0])
    with pytest.raises(EmptyPolytopeError):
        h.chart


def test_decompose_vertex_gives_single_term():
    tensor = latin_to_tensor(cyclic_latin_square(3))
    terms = caratheodory_decompose(build_omega_h(3), tensor)
    assert terms == [(1, tensor)]


def test_decompose_uniform_n2_gives_two_halves():
    tensor = StochasticTensor(2, (HALF,) * 8)
    terms = caratheodory_decompose(build_omega_h(2), tensor)
    assert [weight for weight, _ in terms] == [HALF, HALF]
    assert terms[0][1] != terms[1][1]
    assert convex_combination(terms) == tensor


def test_decompose_triangle_centroid():
    terms = decompose_point(triangle(), (Fraction(1, 3), Fraction(1, 3)))
    assert len(terms) == 3
    assert sum(weight for weight, _ in terms) == 1
    assert sorted(point for _, point in terms) == [(0, 0), (0, 1), (1, 0)]


def test_decompose_birkhoff_matrix():
    h = build_birkhoff_h(3)
    point = [Fraction(v, 6) for v in (3, 2, 1, 1, 3, 2, 2, 1, 3)]
    terms = decompose_point(h, point)
    assert len(terms) <= 5
    assert sum(w for w, _ in terms) == 1
    total = [sum(w * p[i] for w, p in terms) for i in range(9)]
    assert total == point
    assert all(set(p) <= {0, 1} for _, p in terms)


def test_decompose_rejects_invalid_tensor():
    with pytest.raises(ValidationError):
        caratheodory_decompose(build_omega_h(2), StochasticTensor(2, (1,) * 8))


@pytest.mark.parametrize("seed", range(100))
def test_caratheodory_decomposition_of_random_tensors(seed):
    h = build_omega_h(3)
    tensor = random_tensor(3, seed)
    terms = caratheodory_decompose(h, tensor)
    assert 1 <= len(terms) <= 9
    assert all(weight > 0 for weight, _ in terms)
    assert sum(weight for weight, _ in terms) == 1
    assert convex_combination(terms) == tensor
    assert all(is_vertex(h, vertex).is_vertex for _, vertex in terms)


def test_midpoint_of_two_permutation_tensors_is_not_vertex():
    first, second = (latin_to_tensor(square) for square in enumerate_latin_squares(3)[:2])
    midpoint = convex_combination([(HALF, first), (HALF, second)])
    assert not is_vertex(build_omega_h(3), midpoint).is_vertex
    assert is_vertex(build_omega_h(3), first).is_vertex
