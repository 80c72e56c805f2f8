import itertools
import math
import re
from fractions import Fraction

import pytest

from stochastic_polytope.batch_processor import BatchProcessor
from stochastic_polytope.bounds import (
    barnette_simplicial_max,
    binomial,
    build_bound_report,
    compare_exact,
    decimal_approx,
    l0,
    latin_count_shao_wei,
    lbt_lower,
    lbt_lower_closed_form,
    linial_luria_upper,
    lower_latin_ratio,
    new_upper,
    new_upper_direct,
    new_upper_factored,
    old_upper,
    old_upper_factored,
    permanent,
    u0,
    ubt_upper,
    verify_propositions,
)
from stochastic_polytope.enumeration import latin_count_backtrack
from stochastic_polytope.exceptions import ComputationLimitError, DomainError, ValidationError


def test_binomial_zero_convention():
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    assert binomial(-1, 0) == 0
    assert binomial(0, 0) == 1
    assert binomial(4, -1) == 0


def test_compare_exact():
    assert compare_exact(Fraction(1, 3), Fraction(1, 2)) == -1
    assert compare_exact(Fraction(2, 4), Fraction(1, 2)) == 0
    assert compare_exact(Fraction(7), Fraction(13, 2)) == 1


@pytest.mark.parametrize(
    "n, expected",
    [(2, Fraction(1)), (3, Fraction(64, 27)), (4, Fraction(6561, 256))],
)
def test_lower_latin_ratio(n, expected):
    assert lower_latin_ratio(n) == expected


def test_old_upper_values():
    assert old_upper(2) == 21318
    assert old_upper(3) == Fraction(math.comb(65, 26), 27)
    assert old_upper(4) == Fraction(math.comb(138, 63), 64)


def test_new_upper_values():
    assert new_upper(2) == 2
    assert new_upper(3) == 10395
    assert new_upper(4) == 2 * math.comb(50, 37)
    assert new_upper(10) == 2 * math.comb(635, 271)


@pytest.mark.parametrize("n", range(2, 21))
def test_upper_bound_formulas_agree(n):
    assert new_upper(n) == new_upper_direct(n)


def test_ubt_upper():
    assert ubt_upper(8, 27) == 10395
    assert ubt_upper(1, 8) == 2
    # Cyclic 4-polytope with 6 vertices has 9 facets, dually 9 vertices for 6 facets
    assert ubt_upper(4, 6) == 9
    with pytest.raises(DomainError):
        ubt_upper(0, 5)
    with pytest.raises(DomainError):
        ubt_upper(3, 3)


def test_u0_values():
    assert u0(2, 3) == 3
    assert u0(8, 10) == 25
    assert u0(8, 11) == 55
    with pytest.raises(DomainError):
        u0(8, 8)


@pytest.mark.parametrize(
    "d, x, expected",
    [(8, 27, 11), (27, 64, 29), (64, 125, 66), (125, 216, 127), (216, 343, 218)],
)
def test_l0_values(d, x, expected):
    assert l0(d, x) == expected


def test_l0_domain():
    with pytest.raises(DomainError):
        l0(1, 8)
    with pytest.raises(DomainError):
        l0(8, 8)


def test_lbt_lower_closed_form():
    assert lbt_lower(3) == 11
    for n in range(4, 21):
        assert lbt_lower(n) == (n - 1) ** 3 + 2 == lbt_lower_closed_form(n)
    with pytest.raises(DomainError):
        lbt_lower(2)


def test_barnette_bound():
    assert barnette_simplicial_max(8, 27) == 11
    with pytest.raises(DomainError):
        barnette_simplicial_max(1, 8)


def test_linial_luria_upper():
    assert linial_luria_upper(2) == 4096
    assert linial_luria_upper(10) == 10**300


def test_permanent():
    assert permanent([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert permanent([[1] * 3] * 3) == 6
    assert permanent([[1] * 4] * 4) == 24
    assert permanent([[1, 1], [1, 0]]) == 1
    assert permanent([[0, 0], [1, 1]]) == 0
    assert permanent([]) == 1


def test_permanent_rejects_bad_input():
    with pytest.raises(ValidationError):
        permanent([[1, 0], [1]])
    with pytest.raises(ValidationError):
        permanent([[2, 0], [0, 1]])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shao_wei_matches_backtracking(n):
    assert latin_count_shao_wei(n) == latin_count_backtrack(n)


def test_shao_wei_partition_does_not_change_the_sum():
    processor = BatchProcessor(batch_size=1000, max_workers=4)
    assert latin_count_shao_wei(4, processor=processor) == 576


def test_shao_wei_refuses_above_ceiling():
    with pytest.raises(ComputationLimitError):
        latin_count_shao_wei(6)
    with pytest.raises(ComputationLimitError):
        latin_count_shao_wei(4, ceiling=3)


@pytest.mark.slow
def test_latin_count_n5():
    assert latin_count_shao_wei(5) == 161280
    assert latin_count_backtrack(5) == 161280


def test_decimal_approx():
    assert decimal_approx(Fraction(64, 27)) == "≈2.37037"
    assert decimal_approx(Fraction(6561, 256)) == "≈25.6289"
    assert decimal_approx(Fraction(21318)) == "≈21318"


def test_n10_upper_bound_rendering():
    rendered = decimal_approx(Fraction(new_upper(10)))
    assert re.fullmatch(r"≈9\.8\d*e\+186", rendered)
    assert compare_exact(Fraction(new_upper(10)), Fraction(linial_luria_upper(10))) < 0


def test_factored_forms():
    assert new_upper_factored(4) == "2·C(50,37)"
    assert new_upper_factored(3) == "C(23,19) + C(22,19)"
    assert old_upper_factored(3) == "(1/27)·C(65,26)"
    assert old_upper_factored(4) == "(1/64)·C(138,63)"


def test_verify_propositions_up_to_10():
    rows = verify_propositions(2, 10)
    assert [row.n for row in rows] == list(range(2, 11))
    assert all(row.holds for row in rows)
    directions = {row.n: row.lbt_vs_latin_ratio for row in rows}
    assert directions[2] is None
    assert directions[3] == directions[4] == ">"
    assert all(directions[n] == "<" for n in range(5, 11))


def test_verify_propositions_up_to_30():
    assert all(row.holds for row in verify_propositions(2, 30))


def test_verify_propositions_rejects_bad_range():
    with pytest.raises(ValidationError):
        verify_propositions(3, 2)
    with pytest.raises(ValidationError):
        verify_propositions(1, 4)


def test_bound_report_for_n3_with_enumeration():
    report = build_bound_report(3, enumerated_f0=66)
    assert report.lower_latin_ratio == Fraction(64, 27)
    assert report.latin_count == 12
    assert report.lbt_lower == 11
    assert report.new_upper == 10395
    assert report.barnette_simplicial_max == 11
    assert report.verdicts["f0_within_bounds"] is True
    assert report.verdicts["not_simplicial"] is True
    assert report.verdicts["latin_count_below_f0"] is True
    assert report.verdicts["latin_ratio_below_latin_count"] is True
    assert report.new_upper_factored == "C(23,19) + C(22,19)"


def test_bound_report_for_n2_and_n4():
    small = build_bound_report(2)
    assert small.lbt_lower is None
    assert small.barnette_simplicial_max is None
    assert small.old_upper == 21318
    assert small.verdicts["f0_within_bounds"] is None

    large = build_bound_report(4, latin_ceiling=3)
    assert large.latin_count is None
    assert large.enumerated_f0 is None
    assert large.lbt_lower == 29
    assert large.verdicts["latin_ratio_below_latin_count"] is None


def test_bound_report_rejects_n1():
    with pytest.raises(DomainError):
        build_bound_report(1)


def test_binomial_symmetry_and_pascal_identity():
    for a in range(1, 201):
        for b in range(a + 1):
            assert binomial(a, b) == binomial(a, a - b)
            assert binomial(a, b) == binomial(a - 1, b - 1) + binomial(a - 1, b)


@pytest.mark.parametrize("d", range(2, 31))
def test_u0_is_nondecreasing(d):
    values = [u0(d, m) for m in range(d + 1, d + 201)]
    assert all(a <= b for a, b in zip(values, values[1:]))


def permanent_by_permutations(m):
    size = len(m)
    return sum(math.prod(m[i][p[i]] for i in range(size)) for p in itertools.permutations(range(size)))


@pytest.mark.parametrize("size", [1, 2, 3])
def test_permanent_matches_permutation_sum_for_all_0_1_matrices(size):
    for bits in itertools.product((0, 1), repeat=size * size):
        m = [list(bits[i * size : (i + 1) * size]) for i in range(size)]
        assert permanent(m) == permanent_by_permutations(m)
