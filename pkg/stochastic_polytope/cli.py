"""Command-line interface for the stochastic-polytope toolkit.

Subcommands:
- bounds: every vertex-count bound for one n or a range, as tables, CSV or JSON
- enumerate: exact vertex enumeration of Ωₙ (or the Birkhoff polytope)
- check: validity and vertexhood of a tensor file
- decompose: convex decomposition of a tensor into vertices
- latin: count Latin squares by backtracking, by the permanent formula, or both
- verify: the upper/lower bound comparisons for a range of n
- random: a reproducible random stochastic tensor

Results go to stdout (or --out); logs and performance metrics go to stderr.
Exit codes: 0 success, 1 validation or verification failure, 2 usage,
configuration or parse error.
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

from .batch_processor import BatchProcessor
from .bounds import build_bound_report, latin_count_shao_wei, verify_propositions
from .config import Config, ConfigManager
from .enumeration import enumerate_vertices, latin_count_backtrack
from .exceptions import (
    ConsistencyError,
    ErrorContext,
    PolytopeError,
    TensorFormatError,
    TensorShapeError,
    ValidationError,
    handle_error,
)
from .logging_config import get_logger, setup_logging
from .performance import get_performance_monitor
from .polytope import build_birkhoff_h, build_omega_h, caratheodory_decompose, is_vertex
from .reporting import render_bounds, render_check, render_decomposition, render_verdicts, render_vertex_summary
from .serialization import dumps_tensor, dumps_vertex_set, read_tensor, write_text
from .tensor import StochasticTensor, convex_combination, random_tensor, validate
from .validators import (
    OUTPUT_FORMATS,
    validate_dimension,
    validate_file_path,
    validate_log_format,
    validate_n_range,
    validate_output_format,
    validate_rotation_settings,
)

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LATIN_METHODS = ("backtrack", "permanent", "both")


def _common_options() -> argparse.ArgumentParser:
    """Logging, configuration and output flags shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="Enable debug logging")
    common.add_argument("--no-json-logging", action="store_true", help="Disable JSON logging format")
    common.add_argument("--log-file", help="Path to log file (logs always go to stderr as well)")
    common.add_argument(
        "--log-format",
        help="Custom format string for logs. For JSON format, specify space-separated field names. "
        "For text format, use standard Python logging format strings.",
    )
    common.add_argument("--max-log-size", type=int, help="Maximum log file size in MB before rotation")
    common.add_argument("--log-backup-count", type=int, help="Number of backup files to keep")
    common.add_argument(
        "--rotate-when",
        choices=["S", "M", "H", "D", "W0", "W1", "W2", "W3", "W4", "W5", "W6", "midnight"],
        help="When to rotate logs (S=seconds, M=minutes, H=hours, D=days, W0-W6=weekday, midnight)",
    )
    common.add_argument("--rotate-interval", type=int, help="Interval for time-based rotation")
    common.add_argument("--config-dir", help="Directory holding <env>.yaml configuration files")
    common.add_argument("--config-env", default="default", help="Configuration environment name (default: default)")
    common.add_argument("--max-workers", type=int, help="Maximum number of parallel workers")
    common.add_argument("--show-performance", action="store_true", help="Show performance metrics on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per command."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="stochastic-polytope",
        description="Exact computations on the polytope of n×n×n stochastic tensors",
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    bounds = subparsers.add_parser("bounds", parents=[common], help="Vertex-count bounds for one n or a range")
    bounds.add_argument("--n", type=int, required=True, help="Dimension (first of the range with --n-max)")
    bounds.add_argument("--n-max", type=int, help="Last dimension of the range")
    bounds.add_argument("--format", choices=OUTPUT_FORMATS, default="table", help="Output format (default: table)")
    bounds.add_argument("--with-enumeration", action="store_true", help="Fill the f0 column by enumerating vertices")
    bounds.add_argument("--out", help="Write the result to this file instead of stdout")

    enumerate_cmd = subparsers.add_parser("enumerate", parents=[common], help="Enumerate all vertices exactly")
    enumerate_cmd.add_argument("--n", type=int, required=True, help="Dimension")
    enumerate_cmd.add_argument("--out", help="Write the vertex-set document to this file")
    enumerate_cmd.add_argument("--birkhoff", action="store_true", help="Enumerate the Birkhoff polytope instead")
    enumerate_cmd.add_argument(
        "--adjacency", choices=["combinatorial", "algebraic"], help="Adjacency test for the double description method"
    )

    check = subparsers.add_parser("check", parents=[common], help="Validate a tensor file and test vertexhood")
    check.add_argument("--input", required=True, help="Tensor document to check")
    check.add_argument("--n", type=int, help="Expected dimension")

    decompose = subparsers.add_parser("decompose", parents=[common], help="Decompose a tensor into vertices")
    source = decompose.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="Tensor document to decompose")
    source.add_argument("--seed", type=int, help="Decompose random_tensor(n, seed) instead of a file")
    decompose.add_argument("--n", type=int, help="Dimension (required with --seed)")

    latin = subparsers.add_parser("latin", parents=[common], help="Count Latin squares")
    latin.add_argument("--n", type=int, required=True, help="Order of the squares")
    latin.add_argument("--method", choices=LATIN_METHODS, default="both", help="Counting method (default: both)")

    verify = subparsers.add_parser("verify", parents=[common], help="Check the bound comparisons for a range of n")
    verify.add_argument("--n", type=int, default=2, help="First dimension (default: 2)")
    verify.add_argument("--n-max", type=int, default=10, help="Last dimension (default: 10)")
    verify.add_argument("--format", choices=OUTPUT_FORMATS, default="table", help="Output format (default: table)")

    random_cmd = subparsers.add_parser("random", parents=[common], help="Write a reproducible random tensor")
    random_cmd.add_argument("--n", type=int, required=True, help="Dimension")
    random_cmd.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")
    random_cmd.add_argument("--out", help="Write the tensor document to this file instead of stdout")

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    return build_parser().parse_args(argv)


def validate_args(args: argparse.Namespace, config: Config) -> None:
    """Validate command line arguments against each other and the configuration.

    Raises:
        ValidationError: If any argument is invalid
    """
    if args.log_file:
        validate_file_path(args.log_file)
    if args.log_format:
        validate_log_format(args.log_format, not args.no_json_logging)
    validate_rotation_settings(
        max_bytes=args.max_log_size * 1024 * 1024 if args.max_log_size else None,
        backup_count=args.log_backup_count,
        rotate_when=args.rotate_when,
        rotate_interval=args.rotate_interval,
    )
    if args.max_workers is not None:
        validate_dimension(args.max_workers, 1, field_name="max-workers")
    if getattr(args, "format", None) is not None:
        validate_output_format(args.format)
    if getattr(args, "out", None):
        validate_file_path(args.out)
    if getattr(args, "input", None):
        validate_file_path(args.input, must_exist=True, must_be_file=True)

    command = args.command
    if command == "bounds":
        n_max = args.n_max if args.n_max is not None else args.n
        validate_n_range(args.n, n_max, 2, config.limits.bounds_n_max)
    elif command == "verify":
        validate_n_range(args.n, args.n_max, 2, config.limits.bounds_n_max)
    elif command in ("enumerate", "random"):
        validate_dimension(args.n, 1)
    elif command == "check" and args.n is not None:
        validate_dimension(args.n, 1)
    elif command == "latin":
        validate_dimension(args.n, 1, config.computation.latin_ceiling)
    elif command == "decompose":
        if args.seed is not None and args.n is None:
            raise ValidationError(
                "--seed needs --n", ErrorContext(operation="validate_args", details={"seed": args.seed})
            )
        if args.n is not None:
            validate_dimension(args.n, 1)


def load_config(args: argparse.Namespace) -> Config:
    """Load the configuration selected by --config-dir and --config-env."""
    return ConfigManager(args.config_dir).load_config(args.config_env)


def configure_logging(args: argparse.Namespace, config: Config) -> None:
    """Set up logging from config, letting command line flags override it."""
    rotation = config.logging.rotation
    setup_logging(
        log_file_path=args.log_file or config.logging.file,
        log_level="DEBUG" if args.verbose else config.logging.level,
        json_format=config.logging.json and not args.no_json_logging,
        log_format=args.log_format or config.logging.format,
        max_bytes=args.max_log_size * 1024 * 1024 if args.max_log_size else rotation["max_bytes"],
        backup_count=args.log_backup_count if args.log_backup_count is not None else rotation["backup_count"],
        rotate_when=args.rotate_when or rotation["when"],
        rotate_interval=args.rotate_interval or rotation["interval"],
    )


def make_processor(args: argparse.Namespace, config: Config) -> BatchProcessor:
    """Batch processor sized from config and --max-workers."""
    workers = args.max_workers if args.max_workers is not None else config.computation.max_workers
    return BatchProcessor(batch_size=config.computation.batch_size, max_workers=workers)


def emit(text: str, out: Optional[str] = None) -> None:
    """Write command output to ``out`` or stdout."""
    if out:
        write_text(out, text)
        logger.info("Wrote output", extra={"path": out})
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def print_performance_metrics() -> None:
    """Print performance metrics summary to stderr."""
    summary = get_performance_monitor().get_operation_summary()
    if not summary:
        return

    err = sys.stderr
    print("\nPerformance Metrics:", file=err)
    print(f"Total Operations: {summary['total_operations']}", file=err)
    print(f"Successful Operations: {summary['successful_operations']}", file=err)
    print(f"Failed Operations: {summary['failed_operations']}", file=err)
    print(f"Total Duration: {summary['total_duration']:.2f} seconds", file=err)
    print(f"Average Duration: {summary['average_duration']:.2f} seconds", file=err)
    for op in summary["operations"]:
        print(f"\n{op['operation']}:", file=err)
        print(f"  Duration: {op['duration']:.2f} seconds", file=err)
        print(f"  Success: {op['success']}", file=err)
        if op.get("error"):
            print(f"  Error: {op['error']}", file=err)


def cmd_bounds(args: argparse.Namespace, config: Config) -> int:
    """Render bound reports for n..n_max."""
    n_max = args.n_max if args.n_max is not None else args.n
    processor = make_processor(args, config)
    reports = []
    for n in range(args.n, n_max + 1):
        enumerated = None
        if args.with_enumeration:
            if n < config.limits.enumerate_warn_n:
                enumerated = enumerate_vertices(
                    build_omega_h(n), adjacency=config.computation.adjacency, processor=processor
                ).total
            else:
                logger.warning("Skipping enumeration, f0 left unknown", extra={"n": n})
        reports.append(
            build_bound_report(
                n,
                latin_ceiling=config.computation.report_latin_ceiling,
                enumerated_f0=enumerated,
                processor=processor,
            )
        )
    emit(render_bounds(reports, args.format), args.out)
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace, config: Config) -> int:
    """Enumerate vertices and print the total / integral / non-integral summary."""
    if args.n >= config.limits.enumerate_warn_n:
        logger.warning("Enumeration at this n may not finish in reasonable time", extra={"n": args.n})
    h = build_birkhoff_h(args.n) if args.birkhoff else build_omega_h(args.n)
    vertex_set = enumerate_vertices(
        h, adjacency=args.adjacency or config.computation.adjacency, processor=make_processor(args, config)
    )
    if args.out:
        write_text(args.out, dumps_vertex_set(vertex_set))
    emit(render_vertex_summary(vertex_set) + "\n")
    return EXIT_OK


def cmd_check(args: argparse.Namespace, config: Config) -> int:
    """Validate a tensor file and report vertexhood; exit 1 if invalid."""
    tensor = read_tensor(args.input)
    if args.n is not None and tensor.n != args.n:
        raise ValidationError(
            f"Tensor has dimension {tensor.n}, expected {args.n}",
            ErrorContext(operation="check", details={"expected": args.n, "actual": tensor.n}),
        )
    report = validate(tensor)
    certificate = is_vertex(build_omega_h(tensor.n), tensor) if report.ok else None
    emit(render_check(report, certificate) + "\n")
    return EXIT_OK if report.ok else EXIT_FAILURE


def _load_decompose_input(args: argparse.Namespace, config: Config) -> StochasticTensor:
    if args.input:
        tensor = read_tensor(args.input)
        if args.n is not None and tensor.n != args.n:
            raise ValidationError(
                f"Tensor has dimension {tensor.n}, expected {args.n}",
                ErrorContext(operation="decompose", details={"expected": args.n, "actual": tensor.n}),
            )
        return tensor
    return random_tensor(
        args.n,
        args.seed,
        max_denominator=config.computation.random_max_denominator,
        max_terms=config.computation.random_max_terms,
    )


def cmd_decompose(args: argparse.Namespace, config: Config) -> int:
    """Decompose a tensor into vertices and check the reconstruction."""
    tensor = _load_decompose_input(args, config)
    terms = caratheodory_decompose(build_omega_h(tensor.n), tensor)
    limit = (tensor.n - 1) ** 3 + 1
    if len(terms) > limit:
        raise ConsistencyError(
            f"Decomposition has {len(terms)} terms, more than {limit}",
            ErrorContext(operation="decompose", details={"terms": len(terms), "limit": limit}),
        )
    exact = convex_combination(terms) == tensor and sum(w for w, _ in terms) == 1
    emit(render_decomposition(terms, exact))
    return EXIT_OK if exact else EXIT_FAILURE


def cmd_latin(args: argparse.Namespace, config: Config) -> int:
    """Count Latin squares with one or both methods."""
    counts: Dict[str, int] = {}
    if args.method in ("backtrack", "both"):
        counts["backtrack"] = latin_count_backtrack(args.n)
    if args.method in ("permanent", "both"):
        counts["permanent"] = latin_count_shao_wei(
            args.n, ceiling=config.computation.latin_ceiling, processor=make_processor(args, config)
        )
    values = set(counts.values())
    if len(values) != 1:
        raise ConsistencyError(
            "Latin square counts disagree",
            ErrorContext(operation="latin", details={"n": args.n, **counts}),
        )
    count = values.pop()
    suffix = " (backtrack and permanent agree)" if args.method == "both" else ""
    emit(f"L_{args.n} = {count}{suffix}\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    """Print the verdict table; exit 1 if any row fails."""
    rows = verify_propositions(args.n, args.n_max)
    emit(render_verdicts(rows, args.format))
    return EXIT_OK if all(row.holds for row in rows) else EXIT_FAILURE


def cmd_random(args: argparse.Namespace, config: Config) -> int:
    """Write a reproducible random tensor document."""
    tensor = random_tensor(
        args.n,
        args.seed,
        max_denominator=config.computation.random_max_denominator,
        max_terms=config.computation.random_max_terms,
    )
    emit(dumps_tensor(tensor), args.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, Config], int]] = {
    "bounds": cmd_bounds,
    "enumerate": cmd_enumerate,
    "check": cmd_check,
    "decompose": cmd_decompose,
    "latin": cmd_latin,
    "verify": cmd_verify,
    "random": cmd_random,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the CLI.

    Returns:
        int: Exit code (0 success, 1 validation or verification failure, 2 usage or parse error)
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    try:
        config = load_config(args)
        validate_args(args, config)
        configure_logging(args, config)
    except PolytopeError as e:
        setup_logging(json_format=False)
        handle_error(e, logger)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return COMMANDS[args.command](args, config)
    except (TensorFormatError, TensorShapeError) as e:
        handle_error(e, logger)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PolytopeError as e:
        handle_error(e, logger)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        logger.error("I/O error", extra={"error": str(e)})
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    finally:
        if args.show_performance:
            print_performance_metrics()


if __name__ == "__main__":
    sys.exit(main())
