"""Vertex-count bounds for Ωₙ, evaluated exactly.

Upper bounds: the Upper Bound Theorem in its dual (facet) form, its
specialisation to Ωₙ, the older binomial bound and the n^{3n²} bound.
Lower bounds: the Latin square ratio (n!)^{2n}/n^{n²}, the general
polytope lower bound l₀ᵈ(x), and Barnette's simplicial bound. Counting: a
Ryser permanent and the Shao–Wei inclusion–exclusion count of Latin squares.

Binomial convention throughout: C(a, b) = 0 for b < 0 or b > a (including
a < 0), and C(a, 0) = 1 for a ≥ 0.
"""

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .batch_processor import BatchProcessor
from .exceptions import ComputationLimitError, DomainError, ErrorContext, ValidationError
from .logging_config import get_logger
from .performance import monitor_performance

logger = get_logger(__name__)

DEFAULT_LATIN_CEILING = 5
SIGNIFICANT_DIGITS = 6


def binomial(a: int, b: int) -> int:
    """C(a, b) with the zero convention outside 0 ≤ b ≤ a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


def compare_exact(left: Fraction, right: Fraction) -> int:
    """Sign of ``left − right`` by cross-multiplication: -1, 0 or 1."""
    lhs = left.numerator * right.denominator
    rhs = right.numerator * left.denominator
    return (lhs > rhs) - (lhs < rhs)


def decimal_approx(value: Fraction, digits: int = SIGNIFICANT_DIGITS) -> str:
    """Round-half-even decimal rendering with ``digits`` significant digits, prefixed "≈"."""
    context = Context(prec=digits, rounding=ROUND_HALF_EVEN, Emax=10**9, Emin=-(10**9))
    approx = context.divide(Decimal(value.numerator), Decimal(value.denominator))
    return f"≈{approx:.{digits}g}"


def _require(condition: bool, message: str, operation: str, **details: object) -> None:
    if not condition:
        raise DomainError(message, ErrorContext(operation=operation, details=dict(details)))


def lower_latin_ratio(n: int) -> Fraction:
    """(n!)^{2n} / n^{n²}."""
    _require(n >= 1, "n must be at least 1", "lower_latin_ratio", n=n)
    return Fraction(math.factorial(n) ** (2 * n), n ** (n * n))


def p_of_n(n: int) -> int:
    """Top index n³+6n²−6n+2 of the older binomial bound."""
    return n**3 + 6 * n**2 - 6 * n + 2


def old_upper(n: int) -> Fraction:
    """(1/n³)·C(p(n), n³−1) with p(n) = n³+6n²−6n+2."""
    _require(n >= 2, "n must be at least 2", "old_upper", n=n)
    return Fraction(binomial(p_of_n(n), n**3 - 1), n**3)


def ubt_upper(d: int, f: int) -> int:
    """Most vertices a d-polytope with f facets can have (dual Upper Bound Theorem)."""
    _require(d >= 1, "d must be at least 1", "ubt_upper", d=d, f=f)
    _require(f > d, "a bounded d-polytope has at least d+1 facets", "ubt_upper", d=d, f=f)
    return binomial(f - (d + 1) // 2, f - d) + binomial(f - (d + 2) // 2, f - d)


def omega_dimension(n: int) -> int:
    """Dimension (n−1)³ of Ωₙ."""
    return (n - 1) ** 3


def equality_rank(n: int) -> int:
    """Rank 3n²−3n+1 of the 3n² line-sum equalities of Ωₙ."""
    return 3 * n * n - 3 * n + 1


def new_upper(n: int) -> int:
    """The Upper Bound Theorem applied to Ωₙ: d = (n−1)³, n³ facets."""
    _require(n >= 2, "n must be at least 2", "new_upper", n=n)
    return ubt_upper(omega_dimension(n), n**3)


def new_upper_direct(n: int) -> int:
    """Same bound written with lower index 3n²−3n+1, evaluated literally."""
    _require(n >= 2, "n must be at least 2", "new_upper_direct", n=n)
    d = omega_dimension(n)
    r = equality_rank(n)
    return binomial(n**3 - (d + 1) // 2, r) + binomial(n**3 - (d + 2) // 2, r)


def linial_luria_upper(n: int) -> int:
    """n^{3n²}."""
    _require(n >= 2, "n must be at least 2", "linial_luria_upper", n=n)
    return n ** (3 * n * n)


def _u0(d: int, m: int) -> int:
    return binomial(m - d // 2 - 1, (d - 1) // 2) + binomial(m - (d - 1) // 2 - 1, d // 2)


def u0(d: int, m: int) -> int:
    """u₀ᵈ(m): the most facets a d-polytope with m vertices can have."""
    _require(d >= 2, "d must be at least 2", "u0", d=d, m=m)
    _require(m > d, "a d-polytope has at least d+1 vertices", "u0", d=d, m=m)
    return _u0(d, m)


def l0(d: int, x: int) -> int:
    """l₀ᵈ(x): the k with u₀ᵈ(k−1) < x ≤ u₀ᵈ(k), found by scanning upward from k = d+1.

    Raises:
        DomainError: If d < 2 (u₀ is constant there, no k exists) or x ≤ d
    """
    _require(d >= 2, "l0 is undefined for d < 2", "l0", d=d, x=x)
    _require(x > d, "a d-polytope has at least d+1 facets", "l0", d=d, x=x)
    k = d + 1
    while _u0(d, k) < x:
        k += 1
    if not _u0(d, k - 1) < x <= _u0(d, k):
        raise DomainError("l0 bracketing failed", ErrorContext(operation="l0", details={"d": d, "x": x, "k": k}))
    return k


def lbt_lower(n: int) -> int:
    """l₀^{(n−1)³}(n³), the general lower bound applied to Ωₙ (n ≥ 3)."""
    _require(n >= 3, "the lower bound theorem needs dimension (n−1)³ ≥ 2, i.e. n ≥ 3", "lbt_lower", n=n)
    return l0(omega_dimension(n), n**3)


def lbt_lower_closed_form(n: int) -> int:
    """11 for n = 3 and (n−1)³+2 for n ≥ 4."""
    _require(n >= 3, "n must be at least 3", "lbt_lower_closed_form", n=n)
    return 11 if n == 3 else omega_dimension(n) + 2


def barnette_simplicial_max(d: int, f: int) -> int:
    """Largest f₀ with f ≥ (d−1)·f₀ − (d+1)(d−2).

    That is the most vertices a simplicial d-polytope with f facets can have.
    """
    _require(d >= 2, "d must be at least 2", "barnette_simplicial_max", d=d, f=f)
    return (f + (d + 1) * (d - 2)) // (d - 1)


def _as_row_masks(m: Sequence[Sequence[int]], operation: str) -> List[int]:
    size = len(m)
    masks = []
    for i, row in enumerate(m):
        if len(row) != size:
            raise ValidationError(
                "Matrix must be square",
                ErrorContext(operation=operation, details={"row": i, "length": len(row), "size": size}),
            )
        mask = 0
        for j, value in enumerate(row):
            if value not in (0, 1):
                raise ValidationError(
                    "Matrix entries must be 0 or 1", ErrorContext(operation=operation, details={"row": i, "column": j})
                )
            if value:
                mask |= 1 << j
        masks.append(mask)
    return masks


def permanent_of_rows(rows: Sequence[int], size: int) -> int:
    """Ryser's formula on a 0-1 matrix given as row bitmasks.

    per(A) = (−1)^n Σ_{S ⊆ columns} (−1)^{|S|} Π_i |row_i ∩ S|
    """
    total = 0
    for subset in range(1, 1 << size):
        product = 1
        for row in rows:
            product *= (row & subset).bit_count()
            if not product:
                break
        if product:
            total += -product if subset.bit_count() & 1 else product
    return -total if size & 1 else total


def permanent(m: Sequence[Sequence[int]]) -> int:
    """Permanent of a square 0-1 matrix (Ryser)."""
    masks = _as_row_masks(m, "permanent")
    if not masks:
        return 1
    return permanent_of_rows(masks, len(masks))


def _shao_wei_partial(n: int, codes: range) -> int:
    """Σ (−1)^{σ₀(A)} C(per A, n) over matrices whose n²-bit codes lie in ``codes``.

    Row i of A is bits [i·n, (i+1)·n) of the code.
    """
    cells = n * n
    row_mask = (1 << n) - 1
    total = 0
    for code in codes:
        rows = [(code >> (i * n)) & row_mask for i in range(n)]
        if not all(rows):
            continue
        per = permanent_of_rows(rows, n)
        if per < n:
            continue
        term = math.comb(per, n)
        total += -term if (cells - code.bit_count()) & 1 else term
    return total


@monitor_performance("latin_count_shao_wei")
def latin_count_shao_wei(
    n: int,
    ceiling: int = DEFAULT_LATIN_CEILING,
    processor: Optional[BatchProcessor] = None,
) -> int:
    """L_n = n!·Σ_{A ∈ Bₙ} (−1)^{σ₀(A)}·C(per A, n) over all 0-1 n×n matrices.

    Raises:
        ComputationLimitError: If n exceeds ``ceiling``
    """
    _require(n >= 1, "n must be at least 1", "latin_count_shao_wei", n=n)
    if n > ceiling:
        raise ComputationLimitError(
            f"Shao–Wei sum over 2^{n * n} matrices refused: n={n} exceeds the ceiling {ceiling}",
            ErrorContext(operation="latin_count_shao_wei", details={"n": n, "ceiling": ceiling}),
        )
    processor = processor or BatchProcessor(max_workers=1)
    total = processor.sum_range(0, 1 << (n * n), lambda codes: _shao_wei_partial(n, codes))
    count = math.factorial(n) * total
    logger.info("Counted Latin squares", extra={"n": n, "method": "shao_wei", "count": count})
    return count


def binomial_label(a: int, b: int) -> str:
    """C(a,b) as a label."""
    return f"C({a},{b})"


def new_upper_factored(n: int) -> str:
    """E.g. "2·C(50,37)" for n = 4, "C(23,19) + C(22,19)" for n = 3."""
    d = omega_dimension(n)
    f = n**3
    first = (f - (d + 1) // 2, f - d)
    second = (f - (d + 2) // 2, f - d)
    if first == second:
        return f"2·{binomial_label(*first)}"
    return f"{binomial_label(*first)} + {binomial_label(*second)}"


def old_upper_factored(n: int) -> str:
    """E.g. "(1/27)·C(65,26)"."""
    return f"(1/{n ** 3})·{binomial_label(p_of_n(n), n ** 3 - 1)}"


@dataclass(frozen=True)
class VerdictRow:
    """Bound comparison checks for one n; None marks a check that does not apply."""

    n: int
    new_below_old: bool
    new_below_linial_luria: bool
    lbt_matches_closed_form: Optional[bool]
    lbt_vs_latin_ratio: Optional[str]
    expected_lbt_vs_latin_ratio: Optional[str]
    lbt_below_new_upper: Optional[bool]

    @property
    def lbt_ratio_direction_ok(self) -> Optional[bool]:
        """Whether the lower bound compares with the Latin ratio in the expected direction."""
        if self.expected_lbt_vs_latin_ratio is None:
            return None
        return self.lbt_vs_latin_ratio == self.expected_lbt_vs_latin_ratio

    @property
    def holds(self) -> bool:
        """True when every applicable check passes."""
        checks = [
            self.new_below_old,
            self.new_below_linial_luria,
            self.lbt_matches_closed_form,
            self.lbt_ratio_direction_ok,
            self.lbt_below_new_upper,
        ]
        return all(check is not False for check in checks)

    def as_dict(self) -> Dict[str, object]:
        """Plain dict for serialization, including holds."""
        return {
            "n": self.n,
            "new_below_old": self.new_below_old,
            "new_below_linial_luria": self.new_below_linial_luria,
            "lbt_matches_closed_form": self.lbt_matches_closed_form,
            "lbt_vs_latin_ratio": self.lbt_vs_latin_ratio,
            "expected_lbt_vs_latin_ratio": self.expected_lbt_vs_latin_ratio,
            "lbt_ratio_direction_ok": self.lbt_ratio_direction_ok,
            "lbt_below_new_upper": self.lbt_below_new_upper,
            "holds": self.holds,
        }


def _relation(sign: int) -> str:
    return {-1: "<", 0: "=", 1: ">"}[sign]


def verify_row(n: int) -> VerdictRow:
    """All bound comparisons for one n.

    Args:
        n: Dimension, at least 2; the lower-bound checks apply from n = 3

    Returns:
        VerdictRow with None for the checks that do not apply
    """
    new = new_upper(n)
    old = old_upper(n)
    if n >= 3:
        lbt = lbt_lower(n)
        relation = _relation(compare_exact(Fraction(lbt), lower_latin_ratio(n)))
        expected = ">" if n in (3, 4) else "<"
        matches = lbt == lbt_lower_closed_form(n)
        sandwich = lbt <= new
    else:
        relation = expected = None
        matches = sandwich = None
    return VerdictRow(
        n=n,
        new_below_old=compare_exact(Fraction(new), old) < 0,
        new_below_linial_luria=new < linial_luria_upper(n),
        lbt_matches_closed_form=matches,
        lbt_vs_latin_ratio=relation,
        expected_lbt_vs_latin_ratio=expected,
        lbt_below_new_upper=sandwich,
    )


def verify_propositions(n_min: int, n_max: int) -> List[VerdictRow]:
    """Check the upper-bound comparisons, the lower-bound closed form and its comparison with the Latin ratio."""
    if not 2 <= n_min <= n_max:
        raise ValidationError(
            "Need 2 ≤ n_min ≤ n_max",
            ErrorContext(operation="verify_propositions", details={"n_min": n_min, "n_max": n_max}),
        )
    rows = [verify_row(n) for n in range(n_min, n_max + 1)]
    failed = [row.n for row in rows if not row.holds]
    logger.info("Verified propositions", extra={"n_min": n_min, "n_max": n_max, "failed": failed})
    return rows


@dataclass(frozen=True)
class BoundReport:
    """Every bound for one n, exact, with the comparison verdicts."""

    n: int
    lower_latin_ratio: Fraction
    latin_count: Optional[int]
    lbt_lower: Optional[int]
    old_upper: Fraction
    new_upper: int
    linial_luria_upper: int
    barnette_simplicial_max: Optional[int]
    enumerated_f0: Optional[int] = None
    verdicts: Dict[str, Optional[bool]] = field(default_factory=dict)

    @property
    def new_upper_factored(self) -> str:
        return new_upper_factored(self.n)

    @property
    def old_upper_factored(self) -> str:
        return old_upper_factored(self.n)


def build_bound_report(
    n: int,
    latin_ceiling: int = DEFAULT_LATIN_CEILING,
    enumerated_f0: Optional[int] = None,
    latin_count: Optional[int] = None,
    processor: Optional[BatchProcessor] = None,
) -> BoundReport:
    """Assemble a BoundReport.

    Args:
        n: Dimension, at least 2
        latin_ceiling: Largest n for which L_n is computed (Shao–Wei) when not supplied
        enumerated_f0: Known vertex count, enabling the sandwich and Barnette verdicts
        latin_count: Known L_n, skipping the computation
        processor: Batch processor for the Shao–Wei sum
    """
    _require(n >= 2, "n must be at least 2", "build_bound_report", n=n)
    ratio = lower_latin_ratio(n)
    if latin_count is None and n <= latin_ceiling:
        latin_count = latin_count_shao_wei(n, ceiling=latin_ceiling, processor=processor)
    lbt = lbt_lower(n) if n >= 3 else None
    d = omega_dimension(n)
    barnette = barnette_simplicial_max(d, n**3) if d >= 2 else None
    row = verify_row(n)

    verdicts: Dict[str, Optional[bool]] = {
        "new_below_old": row.new_below_old,
        "new_below_linial_luria": row.new_below_linial_luria,
        "lbt_matches_closed_form": row.lbt_matches_closed_form,
        "lbt_ratio_direction_ok": row.lbt_ratio_direction_ok,
        "lbt_below_new_upper": row.lbt_below_new_upper,
        "latin_ratio_below_latin_count": (
            None if latin_count is None else compare_exact(ratio, Fraction(latin_count)) <= 0
        ),
        "latin_count_below_f0": None,
        "f0_within_bounds": None,
        "not_simplicial": None,
    }
    if enumerated_f0 is not None:
        if latin_count is not None:
            verdicts["latin_count_below_f0"] = latin_count <= enumerated_f0
        verdicts["f0_within_bounds"] = (lbt is None or lbt <= enumerated_f0) and enumerated_f0 <= new_upper(n)
        if barnette is not None:
            verdicts["not_simplicial"] = enumerated_f0 > barnette

    return BoundReport(
        n=n,
        lower_latin_ratio=ratio,
        latin_count=latin_count,
        lbt_lower=lbt,
        old_upper=old_upper(n),
        new_upper=new_upper(n),
        linial_luria_upper=linial_luria_upper(n),
        barnette_simplicial_max=barnette,
        enumerated_f0=enumerated_f0,
        verdicts=verdicts,
    )
