"""
Command line entry point.

    hktkit <command> [--instance ID | --file PATH] [--t P/Q] [--json PATH] [--sweep "P1/Q1,P2/Q2,..."]

Exit codes: 0 success, 2 input error, 3 internal consistency violation.
"""

import argparse
import asyncio
import logging
import sys
from typing import List, Optional, Sequence

from . import __version__
from .catalog import BUILTIN_IDS
from .client import COMMANDS, HktkitClient, sweep
from .core.codec import dumps
from .core.exceptions import HktkitException, InputException
from .models import InstanceDescriptor, SweepResult

logger = logging.getLogger(__name__)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hktkit",
        description="Exact cohomology and HKT verdicts for hypercomplex nilmanifolds.",
    )
    ap.add_argument("command", choices=COMMANDS)
    source = ap.add_mutually_exclusive_group()
    source.add_argument("--instance", choices=BUILTIN_IDS, default=None,
                        help="Builtin instance (default: torus8, or rxh7 with --t/--sweep).")
    source.add_argument("--file", default=None, help="Instance file (JSON).")
    ap.add_argument("--t", default=None, help="Parameter P/Q of the rxh7 family.")
    ap.add_argument("--sweep", default=None, help="Comma-separated rxh7 parameters, run concurrently.")
    ap.add_argument("--json", default=None, metavar="PATH", help="Write the JSON report here instead of stdout.")
    ap.add_argument("--search-denominator", type=int, default=8,
                    help="Largest denominator of cone-search coefficients (default: 8).")
    ap.add_argument("--max-candidates", type=int, default=4096,
                    help="Lattice candidates per cone search (default: 4096).")
    ap.add_argument("--refine-rounds", type=int, default=64,
                    help="Hill-climbing rounds after the lattice sweep (default: 64).")
    ap.add_argument("--skip-nilpotency-warning", action="store_true",
                    help="Accept invariant forms of a non-nilpotent algebra as computing its cohomology.")
    ap.add_argument("--unchecked-jacobi", action="store_true", help="Skip the d^2 = 0 check.")
    ap.add_argument("--timings", action="store_true", help="Include section timings in the JSON report.")
    ap.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(name)s:%(levelname)s:%(message)s")


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    except OSError as e:
        raise InputException(f"cannot write report to {path}", str(e))
    logger.info("report written to %s", path)


def _split_sweep(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _summary(results: Sequence[SweepResult]) -> str:
    lines = [f"{'t':>8}  {'h01':>4}  verdict"]
    for r in results:
        h01 = "-" if r.h01 is None else str(r.h01)
        verdict = r.verdict if r.error is None else f"error: {r.error.splitlines()[0]}"
        lines.append(f"{r.t:>8}  {h01:>4}  {verdict}")
    return "\n".join(lines)


def _run_sweep(args: argparse.Namespace, options: dict) -> int:
    if args.instance not in (None, "rxh7") or args.file or args.t:
        raise InputException("--sweep runs the rxh7 family and excludes --instance, --file and --t")
    results = asyncio.run(sweep(_split_sweep(args.sweep), args.command, **options))
    print(_summary(results))
    if args.json:
        payload = [
            {"t": r.t, "error": r.error, "exit_code": r.exit_code,
             "report": r.report.to_dict(args.timings) if r.report else None}
            for r in results
        ]
        _emit(dumps(payload), args.json)
    for r in results:
        if r.error:
            print(f"t={r.t}: {r.error}", file=sys.stderr)
    return max((r.exit_code for r in results), default=0)


def _run_single(args: argparse.Namespace, options: dict) -> int:
    instance = args.instance or ("rxh7" if args.t is not None else "torus8")
    if args.t is not None and instance != "rxh7":
        raise InputException(f"--t applies to rxh7, not {instance}")
    descriptor = InstanceDescriptor(instance, args.t, args.file,
                                    args.skip_nilpotency_warning, args.unchecked_jacobi)
    client = HktkitClient(descriptor=descriptor, **options)
    report = client.run(args.command)
    _emit(dumps(report.to_dict(args.timings)), args.json)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    _configure_logging(args.verbose)
    options = {
        "search_denominator": args.search_denominator,
        "max_candidates": args.max_candidates,
        "refine_rounds": args.refine_rounds,
    }
    try:
        if args.sweep is not None:
            return _run_sweep(args, dict(options, skip_nilpotency_warning=args.skip_nilpotency_warning,
                                         unchecked_jacobi=args.unchecked_jacobi))
        return _run_single(args, options)
    except HktkitException as e:
        print(str(e), file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
