"""JSON documents shared by the library and the CLI.

Tensor document::

    {"n": 2, "entries": [[["1/2", "1/2"], ["1/2", "1/2"]], [[...], [...]]]}

``entries[i][j][k]`` holds a rational string "p/q", an integer string, or a
JSON integer. Anything else (floats, decimals, booleans) is rejected.

Vertex-set document: n, kind, total, integral and non-integral counts, then
the vertices in canonical order, each in the tensor entry layout.

Bound-report document: every value as an exact string next to a 6-digit
decimal approximation, plus the verdict table.
"""

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .bounds import BoundReport, VerdictRow, decimal_approx, new_upper_factored, old_upper_factored
from .enumeration import VertexSet
from .exceptions import ErrorContext, TensorFormatError
from .linalg import Vector
from .logging_config import get_logger
from .polytope import BIRKHOFF, OMEGA
from .tensor import StochasticTensor

logger = get_logger(__name__)

RATIONAL_PATTERN = re.compile(r"^[+-]?\d+(/\d+)?$")

JsonDocument = Dict[str, Any]


def _format_error(message: str, field: str, **details: Any) -> TensorFormatError:
    return TensorFormatError(
        f"{message} (field {field})", ErrorContext(operation="parse", details={"field": field, **details})
    )


def parse_rational(token: Any, field: str = "value") -> Fraction:
    """Parse a "p/q" or integer string, or a JSON integer."""
    if isinstance(token, bool):
        raise _format_error("Booleans are not rational numbers", field, token=token)
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, str) and RATIONAL_PATTERN.match(token.strip()):
        numerator, _, denominator = token.strip().partition("/")
        if denominator and int(denominator) == 0:
            raise _format_error("Zero denominator", field, token=token)
        return Fraction(int(numerator), int(denominator or 1))
    raise _format_error("Not a rational token", field, token=token)


def format_rational(value: Fraction) -> str:
    """Integer or "p/q" string."""
    return str(value)


def loads_json(text: str, source: str = "<string>") -> JsonDocument:
    """Parse JSON, reporting syntax errors by line and column."""
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFormatError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
            ErrorContext(operation="parse", details={"source": source, "line": e.lineno, "column": e.colno}),
        ) from e
    if not isinstance(document, dict):
        raise _format_error("Top level must be an object", "<root>", source=source)
    return document


def _parse_grid(value: Any, depth: int, side: int, field: str) -> List[Any]:
    """Parse a nested ``side``-wide grid of the given depth into Fractions."""
    if not isinstance(value, list) or len(value) != side:
        raise _format_error(f"Expected an array of length {side}", field)
    if depth == 1:
        return [parse_rational(token, f"{field}[{index}]") for index, token in enumerate(value)]
    return [_parse_grid(item, depth - 1, side, f"{field}[{index}]") for index, item in enumerate(value)]


def _parse_n(document: JsonDocument) -> int:
    n = document.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise _format_error("n must be a positive integer", "n", value=n)
    return n


def tensor_to_document(tensor: StochasticTensor) -> JsonDocument:
    """Tensor document with entries as exact strings."""
    return {
        "n": tensor.n,
        "entries": [[[format_rational(v) for v in line] for line in plane] for plane in tensor.as_nested()],
    }


def tensor_from_document(document: JsonDocument) -> StochasticTensor:
    """Parse a tensor document; shape and tokens are checked, stochasticity is not."""
    n = _parse_n(document)
    if "entries" not in document:
        raise _format_error("Missing field", "entries")
    grid = _parse_grid(document["entries"], 3, n, "entries")
    return StochasticTensor.from_nested(grid)


def dumps_tensor(tensor: StochasticTensor) -> str:
    """Tensor document as indented JSON text."""
    return json.dumps(tensor_to_document(tensor), indent=2) + "\n"


def loads_tensor(text: str, source: str = "<string>") -> StochasticTensor:
    """Parse tensor document text."""
    return tensor_from_document(loads_json(text, source))


def read_tensor(path: Union[str, Path]) -> StochasticTensor:
    """Read and parse a tensor document file."""
    path = Path(path)
    logger.debug("Reading tensor", extra={"path": str(path)})
    return loads_tensor(path.read_text(encoding="utf-8"), source=str(path))


def write_text(path: Union[str, Path], text: str) -> None:
    """Write text to a file, creating parent directories."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _point_layout(point: Vector, n: Optional[int], kind: str) -> Any:
    values = [format_rational(v) for v in point]
    if kind == OMEGA and n is not None:
        return [[values[(i * n + j) * n : (i * n + j + 1) * n] for j in range(n)] for i in range(n)]
    if kind == BIRKHOFF and n is not None:
        return [values[i * n : (i + 1) * n] for i in range(n)]
    return values


def vertex_set_to_document(vertex_set: VertexSet) -> JsonDocument:
    """Vertex-set document; Ωₙ vertices are nested n×n×n grids, Birkhoff vertices n×n."""
    return {
        "n": vertex_set.n,
        "kind": vertex_set.kind,
        "total": vertex_set.total,
        "integral": vertex_set.integral_count,
        "nonintegral": vertex_set.nonintegral_count,
        "vertices": [_point_layout(p, vertex_set.n, vertex_set.kind) for p in vertex_set.points],
    }


def _flatten(value: Any) -> List[Any]:
    if isinstance(value, list):
        return [item for part in value for item in _flatten(part)]
    return [value]


def vertex_set_from_document(document: JsonDocument) -> VertexSet:
    """Parse a vertex-set document and check its counts."""
    kind = document.get("kind", OMEGA)
    n = document.get("n")
    points = []
    for index, vertex in enumerate(document.get("vertices", [])):
        field = f"vertices[{index}]"
        if kind == OMEGA:
            grid = _parse_grid(vertex, 3, _parse_n(document), field)
        elif kind == BIRKHOFF:
            grid = _parse_grid(vertex, 2, _parse_n(document), field)
        else:
            if not isinstance(vertex, list):
                raise _format_error("Expected an array", field)
            grid = [parse_rational(token, f"{field}[{k}]") for k, token in enumerate(vertex)]
        points.append(tuple(_flatten(grid)))
    for name in ("total", "integral", "nonintegral"):
        if not isinstance(document.get(name), int):
            raise _format_error("Missing or non-integer count", name)
    if document["total"] != len(points) or document["integral"] + document["nonintegral"] != len(points):
        raise _format_error("Counts do not match the vertex list", "total")
    return VertexSet(
        n=n,
        kind=kind,
        points=tuple(points),
        integral_count=document["integral"],
        nonintegral_count=document["nonintegral"],
    )


def dumps_vertex_set(vertex_set: VertexSet) -> str:
    """Vertex-set document as JSON text."""
    return json.dumps(vertex_set_to_document(vertex_set), indent=2) + "\n"


def loads_vertex_set(text: str, source: str = "<string>") -> VertexSet:
    """Parse vertex-set document text."""
    return vertex_set_from_document(loads_json(text, source))


def _exact(value: Optional[Union[int, Fraction]]) -> Optional[Dict[str, str]]:
    if value is None:
        return None
    fraction = Fraction(value)
    return {"exact": format_rational(fraction), "approx": decimal_approx(fraction)}


def _from_exact(entry: Optional[Dict[str, str]], field: str) -> Optional[Fraction]:
    if entry is None:
        return None
    if not isinstance(entry, dict) or "exact" not in entry:
        raise _format_error("Expected an object with an exact value", field)
    return parse_rational(entry["exact"], field)


def _from_exact_int(entry: Optional[Dict[str, str]], field: str) -> Optional[int]:
    value = _from_exact(entry, field)
    if value is None:
        return None
    if value.denominator != 1:
        raise _format_error("Expected an integer", field)
    return value.numerator


def bound_report_to_document(report: BoundReport) -> JsonDocument:
    """Bound report document with exact values and approximations."""
    return {
        "n": report.n,
        "lower_latin_ratio": _exact(report.lower_latin_ratio),
        "latin_count": _exact(report.latin_count),
        "lbt_lower": _exact(report.lbt_lower),
        "enumerated_f0": _exact(report.enumerated_f0),
        "new_upper": {**_exact(report.new_upper), "factored": new_upper_factored(report.n)},  # type: ignore[dict-item]
        "old_upper": {**_exact(report.old_upper), "factored": old_upper_factored(report.n)},  # type: ignore[dict-item]
        "linial_luria_upper": _exact(report.linial_luria_upper),
        "barnette_simplicial_max": _exact(report.barnette_simplicial_max),
        "verdicts": dict(report.verdicts),
    }


def bound_report_from_document(document: JsonDocument) -> BoundReport:
    """Parse a bound report document."""
    n = _parse_n(document)
    old = _from_exact(document.get("old_upper"), "old_upper")
    ratio = _from_exact(document.get("lower_latin_ratio"), "lower_latin_ratio")
    new = _from_exact_int(document.get("new_upper"), "new_upper")
    linial_luria = _from_exact_int(document.get("linial_luria_upper"), "linial_luria_upper")
    if old is None or ratio is None or new is None or linial_luria is None:
        raise _format_error("Missing required bound", "<root>")
    return BoundReport(
        n=n,
        lower_latin_ratio=ratio,
        latin_count=_from_exact_int(document.get("latin_count"), "latin_count"),
        lbt_lower=_from_exact_int(document.get("lbt_lower"), "lbt_lower"),
        old_upper=old,
        new_upper=new,
        linial_luria_upper=linial_luria,
        barnette_simplicial_max=_from_exact_int(document.get("barnette_simplicial_max"), "barnette_simplicial_max"),
        enumerated_f0=_from_exact_int(document.get("enumerated_f0"), "enumerated_f0"),
        verdicts=dict(document.get("verdicts", {})),
    )


def dumps_bound_reports(reports: List[BoundReport]) -> str:
    """Bound reports as a JSON list."""
    return json.dumps([bound_report_to_document(r) for r in reports], indent=2, ensure_ascii=False) + "\n"


def loads_bound_reports(text: str) -> List[BoundReport]:
    """Parse a JSON list of bound reports."""
    try:
        documents = json.loads(text)
    except json.JSONDecodeError as e:
        raise TensorFormatError(
            f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}", ErrorContext(operation="parse")
        ) from e
    return [bound_report_from_document(document) for document in documents]


def dumps_verdicts(rows: List[VerdictRow]) -> str:
    """Verdict rows as a JSON list."""
    return json.dumps([row.as_dict() for row in rows], indent=2) + "\n"
