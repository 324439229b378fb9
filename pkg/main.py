#!/usr/bin/env python3
"""
qhi - Main Application Entry Point
Quantum hyperbolic invariants of punctured-torus and 4-punctured-sphere mapping classes.

    python main.py --surface torus --word RL --N 3
    python main.py --matrix 2,1,1,1 --N 5 --output reports/rl5.json
    python main.py --verify-only reports/rl5.json
    python main.py tabulate --word RL --N 3,5,7 --csv reports/sweep.csv
    python main.py history
"""

import argparse
import json
import sys
from typing import List, Optional, Tuple

from pipeline.run import EXIT_ERROR, EXIT_OK, RunConfig, run, verify_report
from pipeline.sweep import SweepSpec, tabulate
from utils.config import get_config
from utils.errors import QHIError
from utils.logger import get_logger, setup_logger

logger = get_logger(__name__)


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated integers, got '{text}'")


def parse_matrix(text: str) -> Tuple[int, int, int, int]:
    values = parse_int_list(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"Matrix needs four entries a,b,c,d (row-major), got '{text}'")
    return tuple(values)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"Not a complex number: '{text}'")


def parse_weights(text: str) -> Tuple[complex, complex]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("Weights are given as x1,x2 (Python complex literals)")
    return parse_complex(parts[0]), parse_complex(parts[1])


def parse_selectors(text: str):
    """'all', or 'r:s;r:s;...' with one pair per step."""
    if text.strip().lower() == "all":
        return "all"
    pairs = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            r, s = chunk.split(":")
            pairs.append((int(r), int(s)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"Selector '{chunk}' is not of the form r:s")
    return pairs


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Compute and certify quantum hyperbolic invariants of mapping classes."
    )
    parser.add_argument("command", nargs="?", default="run", choices=["run", "tabulate", "history"],
                        help="run (default), tabulate a sweep, or print the run archive summary")
    parser.add_argument("--surface", default="torus", help="torus (torus1) or sphere (sphere4)")
    parser.add_argument("--word", help="LR word; comma-separated list for tabulate")
    parser.add_argument("--matrix", type=parse_matrix, help="SL2(Z) matrix a,b,c,d (row-major)")
    parser.add_argument("--N", type=parse_int_list, default=[3], help="odd order of q; comma list for tabulate")
    parser.add_argument("--k", type=parse_int_list, default=[1], help="q = exp(2 pi i k / N); comma list for tabulate")
    parser.add_argument("--selectors", type=parse_selectors, help="root selectors r:s;... or 'all' (tabulate)")
    parser.add_argument("--weights", type=parse_weights, help="manual initial weights x1,x2")
    parser.add_argument("--h", type=parse_complex, default=1.0, help="central value h (torus only)")
    parser.add_argument("--seed-grid", dest="seed_grid", help="solver grid, e.g. 10x10 or 10,10,0.2,5")
    parser.add_argument("--output", help="write the JSON report here instead of stdout")
    parser.add_argument("--verify-only", dest="verify_only", help="re-check a stored JSON report")
    parser.add_argument("--csv", help="CSV path for tabulate")
    parser.add_argument("--store", action="store_true", help="archive the run in the database")
    parser.add_argument("--limit", type=int, default=10, help="failed runs listed by history")
    parser.add_argument("--log-level", dest="log_level", help="override LOG_LEVEL")
    return parser


def _single(values: List[int], name: str, parser: argparse.ArgumentParser) -> int:
    if len(values) != 1:
        parser.error(f"--{name} takes a single value outside tabulate")
    return values[0]


def run_command(args, parser) -> int:
    selectors = args.selectors
    if selectors == "all":
        parser.error("--selectors all is only meaningful for tabulate")
    if (args.word is None) == (args.matrix is None):
        parser.error("give exactly one of --word or --matrix")

    config = RunConfig.from_config(
        surface=args.surface,
        N=_single(args.N, "N", parser),
        k=_single(args.k, "k", parser),
        word=args.word,
        matrix=args.matrix,
        selectors=selectors,
        weights=args.weights,
        h=args.h,
        seed_grid=args.seed_grid,
        output=args.output,
    )
    result = run(config)

    if result.report is not None and not args.output:
        print(result.report.to_json())
    if result.error:
        print(json.dumps(result.error, sort_keys=True), file=sys.stderr)

    if args.store:
        store_result(result, config)
    return result.exit_code


def store_result(result, config) -> None:
    from database.init_db import get_session
    from database.queries import record_run

    session = get_session()
    try:
        record_run(session, result, config)
    except Exception as e:
        logger.error(f"❌ Could not archive run: {e}")
    finally:
        session.close()


def verify_command(args) -> int:
    result = verify_report(args.verify_only)
    print(json.dumps({"path": args.verify_only, "exitCode": result.exit_code,
                      "checks": result.checks, "error": result.error}, sort_keys=True, indent=2))
    return result.exit_code


def tabulate_command(args, parser) -> int:
    words = [w.strip() for w in (args.word or "").split(",") if w.strip()]
    base = RunConfig.from_config(h=args.h, seed_grid=args.seed_grid)
    spec = SweepSpec(
        words=words,
        Ns=args.N,
        ks=args.k,
        surface=args.surface,
        selectors=args.selectors if args.selectors == "all" else ([args.selectors] if args.selectors else None),
        base=base,
    )
    text = tabulate(spec, args.csv)
    if not args.csv:
        print(text, end="")
    return EXIT_OK


def history_command(args) -> int:
    from database.init_db import get_session
    from database.queries import get_failed_runs, get_run_summary

    session = get_session()
    try:
        summary = get_run_summary(session)
        print("📊 Run archive")
        print("=" * 40)
        print(f"Total runs: {summary['total_runs']}")
        print(f"✅ ok: {summary['ok']}  ⚠️  threshold: {summary['threshold']}  ❌ failed: {summary['failed']}")
        print(f"Success rate: {summary['success_rate']:.1f}%")
        if summary["worst_full_word"] is not None:
            print(f"Worst full-word residual: {summary['worst_full_word']:.3g}")
        for run_row in get_failed_runs(session, limit=args.limit):
            print(f"   - {run_row!r} [{run_row.error_stage}] {run_row.error_message}")
    finally:
        session.close()
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.log_level:
        setup_logger(args.log_level)

    try:
        get_config()
    except QHIError as e:
        print(json.dumps(e.to_dict(), sort_keys=True), file=sys.stderr)
        return EXIT_ERROR

    if args.verify_only:
        return verify_command(args)
    if args.command == "tabulate":
        return tabulate_command(args, parser)
    if args.command == "history":
        return history_command(args)
    return run_command(args, parser)


if __name__ == "__main__":
    sys.exit(main())
