"""Command-line entry point: ``solitonkit run|validate|demo``.

Exit codes: 0 success, 1 failed checks, 2 configuration error, 3 numerical failure.
"""
import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .exceptions import ConfigurationError, NumericalInstabilityError, SolitonKitError
from .scenarios import KINDS, demo_config, emit_report, load_scenario, run_scenario

EXIT_OK, EXIT_CHECKS, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _build_parser():
    ap = argparse.ArgumentParser(prog="solitonkit", description="Soliton scenario runner.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one or more scenario configs")
    run.add_argument("configs", nargs="+", metavar="config")
    run.add_argument("--out", metavar="DIR", help="override the output directory")
    run.add_argument("--format", choices=("text", "csv"), default="text")
    run.add_argument("--jobs", type=int, default=1, metavar="N")
    val = sub.add_parser("validate", help="check configs without running them")
    val.add_argument("configs", nargs="+", metavar="config")
    demo = sub.add_parser("demo", help="print (or write) a reference config")
    demo.add_argument("kind", choices=KINDS)
    demo.add_argument("--out", metavar="DIR", help="write <kind>.ini into DIR instead of stdout")
    return ap


def _run_one(job):
    path, out = job
    try:
        return EXIT_OK, run_scenario(path, out), None
    except ConfigurationError as exc:
        return EXIT_CONFIG, None, f"configuration error: {exc}"
    except (NumericalInstabilityError, FloatingPointError, ArithmeticError) as exc:
        return EXIT_NUMERIC, None, f"numerical failure: {exc}"
    except (SolitonKitError, ValueError) as exc:
        return EXIT_CONFIG, None, f"configuration error: {exc}"


def _plan(configs, out):
    """Resolve each config's output directory; refuse shared directories."""
    scenarios = [load_scenario(c) for c in configs]
    dirs = []
    for sc in scenarios:
        if out is None:
            dirs.append(sc.outputs)
        elif len(scenarios) == 1:
            dirs.append(out)
        else:
            dirs.append(os.path.join(out, sc.name))
    resolved = [os.path.realpath(d) for d in dirs]
    if len(set(resolved)) != len(resolved):
        raise ConfigurationError("two scenarios would write to the same output directory")
    return list(zip(configs, dirs))


def cmd_run(args):
    if args.jobs < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        jobs = _plan(args.configs, args.out)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    code = EXIT_OK
    for status, report, msg in results:
        if report is not None:
            sys.stdout.write(emit_report(report, args.format))
            status = report.exit_code
        else:
            print(msg, file=sys.stderr)
        code = max(code, status)
    return code


def cmd_validate(args):
    code = EXIT_OK
    for c in args.configs:
        try:
            sc = load_scenario(c)
            print(f"{c}: ok ({sc.kind}, name={sc.name})")
        except ConfigurationError as exc:
            print(f"configuration error: {exc}", file=sys.stderr)
            code = EXIT_CONFIG
    return code


def cmd_demo(args):
    text = demo_config(args.kind)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    d = Path(args.out)
    d.mkdir(parents=True, exist_ok=True)
    path = d / f"{args.kind}.ini"
    path.write_text(text)
    print(path)
    return EXIT_OK


def main(argv=None):
    args = _build_parser().parse_args(argv)
    handler = {"run": cmd_run, "validate": cmd_validate, "demo": cmd_demo}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
