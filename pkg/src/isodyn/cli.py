"""Command-line entry point: ``isodyn verify``, ``isodyn orbit`` and ``isodyn picard``.

Exit codes: 0 success, 1 a check failed (or an orbit hit a base point),
2 invalid configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dpmodels import ParamsA1, ParamsA2, dpa1_step, dpa2_step, orbit
from .errors import BasePoint, IsodynError
from .picard import dumps_report, picard_report
from .serialization import dumps, orbit_record, params_from_json, parse_fg
from .suites import SUITES, ConfigError, SuiteConfig, run_suite

EXIT_OK, EXIT_FAILURE, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="isodyn", description="Exact checks of discrete Schlesinger reductions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run a seeded verification suite")
    verify.add_argument("--suite", required=True, help=f"one of: {', '.join(SUITES)}")
    verify.add_argument("--trials", type=int, default=10)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--out", help="write the JSON report here (default: stdout)")
    verify.add_argument(
        "--timing",
        action="store_true",
        help="include elapsed_ms in the report (breaks byte-identity)",
    )

    orb = sub.add_parser("orbit", help="iterate a model map and write JSON lines")
    orb.add_argument("--model", required=True, choices=("a2", "a1"))
    orb.add_argument("--params", required=True, help="JSON file with the model parameters")
    orb.add_argument("--start", required=True, help='start point "f,g" (rationals or inf)')
    orb.add_argument("--steps", type=int, required=True)
    orb.add_argument("--out", help="output file (default: stdout)")

    pic = sub.add_parser("picard", help="write the Picard-lattice report")
    pic.add_argument("--report", help="output file (default: stdout)")
    return parser


def _emit(text: str, path: str | None):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config_error(message: str) -> int:
    print(f"isodyn: configuration error: {message}", file=sys.stderr)
    return EXIT_CONFIG


def cmd_verify(args) -> int:
    try:
        config = SuiteConfig(args.suite, args.trials, args.seed, args.out)
    except ConfigError as exc:
        return _config_error(str(exc))
    report = run_suite(config)
    _emit(dumps(report.to_json(include_timing=args.timing)), config.output_path)
    status = "ok" if report.ok else f"{len(report.failures)} failure(s)"
    print(
        f"{config.suite}: {report.trials_run} trials, {report.checks} checks, "
        f"{report.rejections} rejections, {status}, {report.elapsed_ms} ms",
        file=sys.stderr,
    )
    return EXIT_OK if report.ok else EXIT_FAILURE


def _load_params(path: str, model: str):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        params = params_from_json(doc, model)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read parameters from {path}: {exc}") from None
    expected = ParamsA2 if model == "a2" else ParamsA1
    if not isinstance(params, expected):
        raise ConfigError(f"parameters in {path} are not for model {model}")
    return params


def cmd_orbit(args) -> int:
    if args.steps < 0:
        return _config_error("steps must be non-negative")
    try:
        params = _load_params(args.params, args.model)
        start = parse_fg(args.start)
    except (ConfigError, ValueError, ZeroDivisionError) as exc:
        return _config_error(str(exc))
    step = dpa2_step if args.model == "a2" else dpa1_step
    lines = []
    status = EXIT_OK
    n = 0
    try:
        for n, p, pt in orbit(step, params, start, args.steps):
            lines.append(json.dumps(orbit_record(n, p, pt), sort_keys=True))
    except BasePoint as exc:
        print(f"isodyn: step {n + 1} starts at base point {exc.label}", file=sys.stderr)
        lines.append(
            json.dumps({"error": "BasePoint", "step": n + 1, "label": exc.label}, sort_keys=True)
        )
        status = EXIT_FAILURE
    except IsodynError as exc:
        print(f"isodyn: step {n + 1} failed: {exc}", file=sys.stderr)
        lines.append(
            json.dumps(
                {"error": type(exc).__name__, "step": n + 1, "message": str(exc)}, sort_keys=True
            )
        )
        status = EXIT_FAILURE
    _emit("".join(line + "\n" for line in lines), args.out)
    return status


def cmd_picard(args) -> int:
    report = picard_report()
    _emit(dumps_report(report), args.report)
    ok = all(m["isometry"] and m["translation"] is not None for m in report["maps"])
    return EXIT_OK if ok else EXIT_FAILURE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"verify": cmd_verify, "orbit": cmd_orbit, "picard": cmd_picard}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
