import argparse
import logging
import sys
from typing import List, Optional

from .config import Settings
from .core.bounds import evaluate_bounds
from .core.errors import (
    ArithmeticOverflowError, BudgetExceededError, HypothesisError,
    InvalidParameterError, PointFileError, TheoremViolation
)
from .core.lattice import check_dist_lemma, coset_partition, reduce
from .core.pointset import affine_rank, dilate, require_dilation_factor, sumset_size
from .core.structure import line_cover_number, min_hyperplane_cover
from .engine.search_engine import SearchMode, SearchTask, search_min
from .generator.constructions import construct_AN, verify_construction
from .io.point_files import digest, read_point_file, write_point_file, write_text
from .io.reports import (
    ReportDocument, bound_results, bound_rows, construction_results,
    search_parameters, search_results
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_PARAMETER = 3
EXIT_HYPOTHESIS = 4
EXIT_BUDGET = 5


def _emit(args, document: ReportDocument) -> None:
    write_text(getattr(args, "out", None), document.to_json())


def cmd_compute(args, settings: Settings) -> int:
    A = read_point_file(args.input)
    q = require_dilation_factor(args.q)
    rank = affine_rank(A)
    r = coset_partition(A, q).r
    size = sumset_size(A, dilate(A, q))
    print(f"|A|={len(A)} rank={rank} r={r} |A+qA|={size}")
    if args.report:
        document = ReportDocument(
            command="compute",
            input_digest=digest(A),
            parameters={"q": q, "d": A.dim},
            results={"size": len(A), "rank": rank, "cosets": r, "sum_of_dilates": size},
        )
        write_text(args.report, document.to_json())
    return EXIT_OK


def cmd_reduce(args, settings: Settings) -> int:
    A = read_point_file(args.input)
    record = reduce(A)
    write_point_file(args.out, record.output, comments=[
        f"reduced from {digest(A)}",
        f"anchor {' '.join(str(c) for c in record.anchor)}",
        f"det {record.det}",
    ])
    if args.report:
        document = ReportDocument(
            command="reduce",
            input_digest=digest(A),
            parameters={"d": A.dim},
            results={
                "det": record.det,
                "anchor": list(record.anchor),
                "transform": [list(row) for row in record.transform],
            },
        )
        document.add_witness("input", A)
        document.add_witness("reduced", record.output)
        write_text(args.report, document.to_json())
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    A = read_point_file(args.input)
    q = require_dilation_factor(args.q)
    report = evaluate_bounds(A, q)
    document = ReportDocument(
        command="verify",
        input_digest=digest(A),
        parameters={"q": q, "d": A.dim},
        results=bound_results(report),
        bounds=bound_rows(report),
    )
    document.add_witness("input", A)
    if report.summary.rank == A.dim:
        reduced = reduce(A).output
        verdicts = [check_dist_lemma(reduced, q, i) for i in range(coset_partition(reduced, q).r)]
        document.results["coset_dichotomy"] = [
            {"index": v.index, "residue": list(v.residue), "arm": v.arm.value, "lhs": v.lhs, "rhs": v.rhs}
            for v in verdicts
        ]
    _emit(args, document)
    if document.failed():
        logging.error(f"{len(report.failures())} bound(s) failed; witness written to the report")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_construct(args, settings: Settings) -> int:
    A = construct_AN(args.d, args.N)
    comments = [f"A_{args.N} in Z^{args.d}"]
    if args.q is not None:
        record = verify_construction(args.d, args.N, args.q)
        comments.append(f"|A+qA| = {record.computed} for q = {record.q}, upper bound {record.upper_bound}")
        if args.report:
            document = ReportDocument(
                command="construct",
                input_digest=digest(A),
                parameters={"family": args.family, "d": args.d, "N": args.N, "q": record.q},
                results=construction_results(record),
            )
            document.add_witness("construction", A)
            write_text(args.report, document.to_json())
    write_point_file(args.out, A, comments=comments)
    return EXIT_OK


def cmd_search(args, settings: Settings) -> int:
    if args.seed is not None and args.random is None:
        raise InvalidParameterError("--seed only applies with --random")
    task = SearchTask(
        d=args.d,
        q=args.q,
        n=args.n,
        grid=args.grid,
        mode=SearchMode.RANDOM if args.random is not None else SearchMode.EXHAUSTIVE,
        samples=args.random,
        seed=args.seed,
        budget=settings.budget,
    )
    record = search_min(task, workers=settings.workers, progress=args.progress)
    document = ReportDocument(
        command="search",
        input_digest=digest(record.witness),
        parameters=search_parameters(record),
        results=search_results(record),
    )
    document.add_witness("minimizer", record.witness)
    _emit(args, document)
    return EXIT_OK


def cmd_cover(args, settings: Settings) -> int:
    A = read_point_file(args.input)
    lines = line_cover_number(A)
    print(f"lines={lines.count} direction={' '.join(str(c) for c in lines.witness.v)}")
    if A.dim >= 2 and affine_rank(A) == A.dim:
        planes = min_hyperplane_cover(A)
        print(f"hyperplanes={planes.count} normal={' '.join(str(c) for c in planes.witness.v)}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", type=int, help="Candidate budget for exhaustive search (DILATE_BUDGET).")
    parser.add_argument("--workers", type=int, help="Worker processes for search (DILATE_WORKERS).")
    parser.add_argument("--log-level", help="Logging level name (DILATE_LOG_LEVEL).")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dilates",
        description="Sums of dilates A + q·A in Z^d: exact computation, bound checks and extremal search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="Print |A|, rank, coset count and |A+qA|.")
    compute.add_argument("--input", default=None, help="Point file (default: standard input).")
    compute.add_argument("--q", type=int, required=True)
    compute.add_argument("--report", default=None, help="Also write a JSON report here.")
    compute.set_defaults(handler=cmd_compute)

    red = sub.add_parser("reduce", help="Write the reduced set L^-1(A - a).")
    red.add_argument("--input", default=None)
    red.add_argument("--out", default=None, help="Reduced point file (default: standard output).")
    red.add_argument("--report", default=None)
    red.set_defaults(handler=cmd_reduce)

    verify = sub.add_parser("verify", help="Evaluate every bound and the coset dichotomy on A.")
    verify.add_argument("--input", default=None)
    verify.add_argument("--q", type=int, required=True)
    verify.add_argument("--out", default=None, help="JSON report (default: standard output).")
    verify.set_defaults(handler=cmd_verify)

    construct = sub.add_parser("construct", help="Write the extremal family A_N.")
    construct.add_argument("--family", choices=["AN"], default="AN")
    construct.add_argument("--d", type=int, required=True)
    construct.add_argument("--N", type=int, required=True)
    construct.add_argument("--q", type=int, default=None, help="Also verify the construction for this q.")
    construct.add_argument("--out", default=None)
    construct.add_argument("--report", default=None)
    construct.set_defaults(handler=cmd_construct)

    search = sub.add_parser("search", help="Minimise |A+qA| over rank-d n-subsets of {0..grid}^d.")
    search.add_argument("--d", type=int, required=True)
    search.add_argument("--q", type=int, required=True)
    search.add_argument("--n", type=int, required=True)
    search.add_argument("--grid", type=int, required=True)
    search.add_argument("--random", type=int, default=None, metavar="COUNT", help="Sample COUNT random subsets.")
    search.add_argument("--seed", type=int, default=None)
    search.add_argument("--progress", action="store_true")
    search.add_argument("--out", default=None)
    search.set_defaults(handler=cmd_search)

    cover = sub.add_parser("cover", help="Print the line cover and hyperplane cover numbers.")
    cover.add_argument("--input", default=None)
    cover.set_defaults(handler=cmd_cover)

    for p in (compute, red, verify, construct, search, cover):
        _add_common(p)
    return parser


def _settings(args) -> Settings:
    settings = Settings.from_env()
    if args.budget is not None:
        settings.budget = args.budget
    if args.workers is not None:
        settings.workers = args.workers
    if args.log_level is not None:
        settings.log_level = args.log_level.upper()
    if settings.budget < 1 or settings.workers < 1:
        raise InvalidParameterError("--budget and --workers must be positive")
    if not isinstance(logging.getLevelName(settings.log_level), int):
        raise InvalidParameterError(f"unknown log level {settings.log_level!r}")
    return settings


def _report_violation(args, error: TheoremViolation) -> None:
    document = ReportDocument(
        command=args.command,
        parameters={"q": error.q},
        results={"violation": str(error)},
    )
    if error.witness is not None:
        document.add_witness("counterexample", error.witness)
        document.input_digest = digest(error.witness)
    _emit(args, document)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(asctime)s - %(levelname)s - %(message)s")
    try:
        settings = _settings(args)
    except ValueError as e:
        logging.error(str(e))
        return EXIT_PARAMETER
    logging.getLogger().setLevel(settings.log_level)

    try:
        return args.handler(args, settings)
    except PointFileError as e:
        logging.error(str(e))
        return EXIT_PARSE
    except HypothesisError as e:
        logging.error(str(e))
        return EXIT_HYPOTHESIS
    except (InvalidParameterError, ArithmeticOverflowError) as e:
        logging.error(str(e))
        return EXIT_PARAMETER
    except BudgetExceededError as e:
        logging.error(str(e))
        return EXIT_BUDGET
    except TheoremViolation as e:
        logging.error(f"theorem violation: {e}")
        _report_violation(args, e)
        return EXIT_VIOLATION


if __name__ == "__main__":
    sys.exit(main())
