from fractions import Fraction

from stochastic_polytope.bounds import build_bound_report, new_upper, old_upper, verify_propositions
from stochastic_polytope.polytope import build_omega_h, is_vertex
from stochastic_polytope.reporting import (
    BOUNDS_COLUMNS,
    UNKNOWN,
    VERDICT_COLUMNS,
    exact_cell,
    render_bounds,
    render_check,
    render_decomposition,
    render_vertex_summary,
    render_verdicts,
)
from stochastic_polytope.tensor import StochasticTensor, cyclic_latin_square, latin_to_tensor, validate

HALF = Fraction(1, 2)


def test_exact_cell():
    assert exact_cell(None) == UNKNOWN
    assert exact_cell(12) == "12"
    assert exact_cell(21318) == "21318"
    assert exact_cell(Fraction(64, 27)) == "64/27 ≈2.37037"


def test_exact_cell_long_values():
    assert exact_cell(new_upper(4), "2·C(50,37)").startswith("2·C(50,37) ≈")
    approx = exact_cell(old_upper(3))
    assert approx.startswith("≈")
    assert " " not in approx


def test_bounds_table_has_three_sections():
    text = render_bounds([build_bound_report(4, latin_count=576)], "table")
    sections = text.split("\n\n")
    assert len(sections) == 3
    assert sections[0].startswith("n  lower bound")
    assert "2·C(50,37)" in sections[1]
    assert "576" in sections[2]


def test_bounds_csv():
    lines = render_bounds([build_bound_report(2)], "csv").splitlines()
    assert lines[0] == ",".join(BOUNDS_COLUMNS)
    assert lines[1].split(",")[:6] == ["2", "1", "2", UNKNOWN, UNKNOWN, "2"]


def test_bounds_rendering_is_deterministic():
    reports = [build_bound_report(n, latin_ceiling=3) for n in (2, 3, 4)]
    for output_format in ("table", "csv", "json"):
        assert render_bounds(reports, output_format) == render_bounds(reports, output_format)


def test_verdicts_table_and_csv():
    rows = verify_propositions(2, 4)
    table = render_verdicts(rows, "table").splitlines()
    assert table[0].startswith("n  new<old  new<n^(3n^2)  lbt closed form")
    assert len(table) == 2 + 3
    csv_lines = render_verdicts(rows, "csv").splitlines()
    assert csv_lines[0] == ",".join(VERDICT_COLUMNS)
    assert all(line.endswith(",yes") for line in csv_lines[1:])


def test_vertex_summary(omega3_vertices):
    assert render_vertex_summary(omega3_vertices) == "66 / 12 / 54"


def test_render_check():
    h = build_omega_h(2)
    vertex = latin_to_tensor(cyclic_latin_square(2))
    assert render_check(validate(vertex), is_vertex(h, vertex)) == "valid, vertex, active rank 8"

    uniform = StochasticTensor(2, (HALF,) * 8)
    assert render_check(validate(uniform), is_vertex(h, uniform)) == "valid, not a vertex, active rank 7"

    broken = StochasticTensor(2, (1,) + (HALF,) * 7)
    assert render_check(validate(broken), None).startswith("invalid: ")


def test_render_decomposition():
    point = StochasticTensor(1, (Fraction(1),))
    assert render_decomposition([(Fraction(1), point)], exact=True) == (
        "terms: 1\nterm 0: weight 1\n  [0,0,:] 1\nreconstruction: exact\n"
    )
    assert render_decomposition([], exact=False).endswith("reconstruction: MISMATCH\n")
