"""Human-readable, CSV and JSON renderings of command results.

Everything here is a pure function of its input so that command output is
byte-identical between runs.
"""

import csv
import io
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from .bounds import BoundReport, VerdictRow, decimal_approx
from .enumeration import VertexSet
from .polytope import VertexCertificate
from .serialization import dumps_bound_reports, dumps_verdicts
from .tensor import StochasticTensor, ValidationReport

UNKNOWN = "?"
# Exact values longer than this are shown in factored form in tables
MAX_EXACT_WIDTH = 8

BOUNDS_COLUMNS = (
    "n",
    "lower_latin_ratio",
    "latin_count",
    "lbt_lower",
    "enumerated_f0",
    "new_upper",
    "new_upper_factored",
    "old_upper",
    "old_upper_factored",
    "linial_luria_upper",
    "barnette_simplicial_max",
)


def exact_cell(value: Optional[Union[int, Fraction]], factored: Optional[str] = None) -> str:
    """Exact value, or its factored form when too long, with an approximation for non-integers and large values."""
    if value is None:
        return UNKNOWN
    fraction = Fraction(value)
    exact = str(fraction)
    if len(exact) > MAX_EXACT_WIDTH:
        return f"{factored} {decimal_approx(fraction)}" if factored else decimal_approx(fraction)
    if fraction.denominator != 1:
        return f"{exact} {decimal_approx(fraction)}"
    return exact


def _table(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    body = [list(header)] + [list(row) for row in rows]
    widths = [max(len(row[c]) for row in body) for c in range(len(header))]
    lines = []
    for index, row in enumerate(body):
        lines.append("  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip())
        if index == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def render_bounds_table(reports: Sequence[BoundReport]) -> str:
    """Vertex-count table (lower bound, f₀, old upper) followed by the upper-bound comparison table."""
    counts = _table(
        ("n", "lower bound (n!)^2n/n^(n^2)", "f0", "old upper bound"),
        (
            (
                str(r.n),
                exact_cell(r.lower_latin_ratio),
                exact_cell(r.enumerated_f0),
                exact_cell(r.old_upper, r.old_upper_factored),
            )
            for r in reports
        ),
    )
    uppers = _table(
        ("n", "new upper bound", "old upper bound"),
        (
            (str(r.n), exact_cell(r.new_upper, r.new_upper_factored), exact_cell(r.old_upper, r.old_upper_factored))
            for r in reports
        ),
    )
    extras = _table(
        ("n", "L_n", "lbt lower", "barnette max", "n^(3n^2)"),
        (
            (
                str(r.n),
                exact_cell(r.latin_count),
                exact_cell(r.lbt_lower),
                exact_cell(r.barnette_simplicial_max),
                exact_cell(r.linial_luria_upper),
            )
            for r in reports
        ),
    )
    return "\n".join((counts, uppers, extras))


def _csv_value(value: Optional[Union[int, Fraction]]) -> str:
    return UNKNOWN if value is None else str(Fraction(value))


def render_bounds_csv(reports: Sequence[BoundReport]) -> str:
    """One CSV row per report; unknown values are "?"."""
    return _csv(
        BOUNDS_COLUMNS,
        (
            (
                r.n,
                _csv_value(r.lower_latin_ratio),
                _csv_value(r.latin_count),
                _csv_value(r.lbt_lower),
                _csv_value(r.enumerated_f0),
                _csv_value(r.new_upper),
                r.new_upper_factored,
                _csv_value(r.old_upper),
                r.old_upper_factored,
                _csv_value(r.linial_luria_upper),
                _csv_value(r.barnette_simplicial_max),
            )
            for r in reports
        ),
    )


def render_bounds(reports: Sequence[BoundReport], output_format: str) -> str:
    """Render reports as a table, CSV or JSON."""
    if output_format == "json":
        return dumps_bound_reports(list(reports))
    if output_format == "csv":
        return render_bounds_csv(reports)
    return render_bounds_table(reports)


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return "n/a"
    return "yes" if value else "NO"


VERDICT_COLUMNS = ("n", "new<old", "new<n^(3n^2)", "lbt closed form", "lbt vs ratio", "expected", "lbt<=new", "holds")


def _verdict_cells(row: VerdictRow) -> Tuple[str, ...]:
    return (
        str(row.n),
        _flag(row.new_below_old),
        _flag(row.new_below_linial_luria),
        _flag(row.lbt_matches_closed_form),
        row.lbt_vs_latin_ratio or "n/a",
        row.expected_lbt_vs_latin_ratio or "n/a",
        _flag(row.lbt_below_new_upper),
        _flag(row.holds),
    )


def render_verdicts(rows: Sequence[VerdictRow], output_format: str) -> str:
    """Render verdict rows as a table, CSV or JSON."""
    if output_format == "json":
        return dumps_verdicts(list(rows))
    cells = [_verdict_cells(row) for row in rows]
    if output_format == "csv":
        return _csv(VERDICT_COLUMNS, cells)
    return _table(VERDICT_COLUMNS, cells)


def render_vertex_summary(vertex_set: VertexSet) -> str:
    """total / integral / non-integral."""
    return f"{vertex_set.total} / {vertex_set.integral_count} / {vertex_set.nonintegral_count}"


def render_check(report: ValidationReport, certificate: Optional[VertexCertificate]) -> str:
    """One-line verdict for the check command."""
    if not report.ok:
        return f"invalid: {report.message}"
    assert certificate is not None
    if certificate.is_vertex:
        return f"valid, vertex, active rank {certificate.active_rank}"
    return f"valid, not a vertex, active rank {certificate.active_rank}"


def render_tensor(tensor: StochasticTensor) -> List[str]:
    """One line per (i, j): the k-line of entries."""
    n = tensor.n
    return [
        f"  [{i},{j},:] " + " ".join(str(tensor.entry(i, j, k)) for k in range(n)) for i in range(n) for j in range(n)
    ]


def render_decomposition(terms: Sequence[Tuple[Fraction, StochasticTensor]], exact: bool) -> str:
    """Weights and vertices of a decomposition, then the reconstruction result."""
    lines = [f"terms: {len(terms)}"]
    for index, (weight, vertex) in enumerate(terms):
        lines.append(f"term {index}: weight {weight}")
        lines.extend(render_tensor(vertex))
    lines.append(f"reconstruction: {'exact' if exact else 'MISMATCH'}")
    return "\n".join(lines) + "\n"
