import random
from fractions import Fraction

import pytest

from stochastic_polytope.exceptions import DimensionMismatchError
from stochastic_polytope.linalg import RationalMatrix, dot, nullspace_basis, rank, row_reduce, solve
from stochastic_polytope.polytope import build_omega_h


def hilbert(size):
    return RationalMatrix.from_rows([[Fraction(1, i + j + 1) for j in range(size)] for i in range(size)])


def test_rank_of_small_matrices():
    assert rank(RationalMatrix.identity(3)) == 3
    assert rank(RationalMatrix.from_rows([[1, 2], [2, 4]])) == 1
    assert rank(RationalMatrix.zeros(2, 3)) == 0
    assert rank(RationalMatrix.from_rows([], cols=4)) == 0


def test_hilbert_matrix_is_full_rank_exactly():
    assert rank(hilbert(6)) == 6


def test_row_reduce_prefers_smallest_pivot():
    echelon = row_reduce(RationalMatrix.from_rows([[2, 4], [1, 3]]))
    assert echelon.pivot_columns == (0, 1)
    assert echelon.rows == ((1, 0), (0, 1))
    assert echelon.free_columns == ()


def test_row_reduce_carries_rhs():
    echelon = row_reduce(RationalMatrix.from_rows([[1, 1], [1, -1]]), rhs=[3, 1])
    assert echelon.rhs == (Fraction(2), Fraction(1))


def test_nullspace_basis_has_unit_free_columns():
    m = RationalMatrix.from_rows([[1, 1, 1]])
    basis = nullspace_basis(m)
    assert basis == [(-1, 1, 0), (-1, 0, 1)]
    for v in basis:
        assert m.matvec(v) == (0,)


def test_nullspace_of_matrix_without_rows_is_identity():
    assert nullspace_basis(RationalMatrix.from_rows([], cols=2)) == [(1, 0), (0, 1)]


def test_solve_returns_exact_solution():
    x = solve(RationalMatrix.from_rows([[1, 2], [3, 4]]), [5, 6])
    assert x == (Fraction(-4), Fraction(9, 2))


def test_solve_hilbert_system_exactly():
    h = hilbert(5)
    b = h.matvec([1] * 5)
    assert solve(h, b) == (1, 1, 1, 1, 1)


def test_solve_inconsistent_system_returns_none():
    assert solve(RationalMatrix.from_rows([[1, 1], [1, 1]]), [1, 2]) is None


def test_solve_rejects_wrong_rhs_length():
    with pytest.raises(DimensionMismatchError):
        solve(RationalMatrix.identity(2), [1, 2, 3])


def test_ragged_rows_are_rejected():
    with pytest.raises(DimensionMismatchError):
        RationalMatrix.from_rows([[1, 2], [3]])


def test_dot_rejects_different_lengths():
    with pytest.raises(DimensionMismatchError):
        dot([1, 2], [1])


def test_transpose_and_select_rows():
    m = RationalMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert m.transpose().row(0) == (1, 4)
    assert m.select_rows([1]).row(0) == (4, 5, 6)
    assert m.vstack(m).rows == 4


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_line_sum_matrix_rank(n):
    h = build_omega_h(n)
    assert h.equalities.rows == 3 * n * n
    assert rank(h.equalities) == 3 * n * n - 3 * n + 1


def random_matrix(rng, rows, cols):
    return RationalMatrix.from_rows(
        [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)]
    )


@pytest.mark.parametrize("seed", range(40))
def test_rank_is_invariant_under_transpose_and_row_operations(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 5), rng.randint(1, 6)
    m = random_matrix(rng, rows, cols)
    r = rank(m)
    assert r == rank(m.transpose())
    assert r == rank(m.swap_rows(0, rows - 1))
    assert r == rank(m.scale_row(rng.randrange(rows), Fraction(-3, 7)))


def test_row_operations_return_new_matrices():
    m = RationalMatrix.from_rows([[1, 2], [3, 4]])
    assert m.swap_rows(0, 1).row(0) == (3, 4)
    assert m.scale_row(1, Fraction(1, 2)).row(1) == (Fraction(3, 2), 2)
    assert m.row(0) == (1, 2)


def test_omega2_equalities_have_one_dimensional_nullspace():
    equalities = build_omega_h(2).equalities
    basis = nullspace_basis(equalities)
    assert len(basis) == 1
    assert equalities.matvec(basis[0]) == (0,) * equalities.rows
