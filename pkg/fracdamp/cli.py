"""fracdamp command line.

Usage:
    fracdamp poles --lambda 1 --omega 1 --nu 0.5
    fracdamp solve --lambda 1 --omega 1 --nu 0.5 --t-max 20 --dt 0.05 [--with-oracle]
    fracdamp sweep --lambda 1 --omega 1 [--nu-min 0.01 --nu-max 0.99 --nu-steps 99]
    fracdamp sweep --preset fig4
    fracdamp classify --lambda 15/16 --omega 1/4
    fracdamp validate --suite quick

Exit codes: 0 success, 1 failed acceptance check, 2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Sequence

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from fracdamp import __version__, acceptance, config, csvio, freqanalysis, oracle
from fracdamp.analytic import AnalyticSolver, DecayQuadratureConfig, time_grid
from fracdamp.errors import DomainError, NumericalError, ParameterError
from fracdamp.literals import parse_number
from fracdamp.logs import configure_logging
from fracdamp.model import CSV_HEADER, OscillatorParams, validate
from fracdamp.polefinder import endpoint_pole, find_pole, residual

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

PRESETS = {"fig3": 3, "fig4": 4, "fig5": 5}


def _number(field: str) -> Callable[[str], float]:
    def parse(raw: str) -> float:
        try:
            return parse_number(raw, field)
        except ParameterError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    parse.__name__ = field
    return parse


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{raw!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{raw!r} must be >= 1")
    return value


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, default=None, metavar="PATH",
                        help="write CSV here instead of stdout")
    common.add_argument("--log-level", default=None, metavar="LEVEL",
                        help="overrides FRACDAMP_LOG_LEVEL")

    parser = argparse.ArgumentParser(
        prog="fracdamp",
        description="Linear oscillator with Caputo fractional damping of order 0 <= nu <= 1.",
    )
    parser.add_argument("--version", action="version", version=f"fracdamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    poles = sub.add_parser("poles", parents=[common], help="Pole pair and its residual.")
    _add_physics(poles, nu=True)
    poles.add_argument("--format", choices=("table", "csv"), default="table")
    poles.set_defaults(handler=_cmd_poles)

    solve = sub.add_parser("solve", parents=[common], help="x(t) on a uniform grid as CSV.")
    _add_physics(solve, nu=True)
    solve.add_argument("--x0", type=_number("x0"), default=1.0)
    solve.add_argument("--x1", type=_number("x1"), default=0.0)
    solve.add_argument("--t-max", type=_number("t_max"), default=20.0)
    solve.add_argument("--dt", type=_number("dt"), default=0.05)
    solve.add_argument("--with-oracle", action="store_true",
                       help="add an x_oracle column from the L1 time stepper")
    solve.add_argument("--oracle-h", type=_number("oracle_h"), default=1e-3)
    solve.set_defaults(handler=_cmd_solve)

    sweep = sub.add_parser("sweep", parents=[common], help="sigma(nu) as CSV.")
    sweep.add_argument("--lambda", dest="lam", type=_number("lambda"), default=None)
    sweep.add_argument("--omega", type=_number("omega"), default=None)
    sweep.add_argument("--preset", choices=sorted(PRESETS), default=None,
                       help="the three parameter sets of one figure")
    sweep.add_argument("--nu-min", type=_number("nu_min"), default=0.01)
    sweep.add_argument("--nu-max", type=_number("nu_max"), default=0.99)
    sweep.add_argument("--nu-steps", type=_positive_int, default=99)
    sweep.add_argument("--workers", type=_positive_int, default=None,
                       help="thread pool size (default FRACDAMP_WORKERS)")
    sweep.add_argument("--no-endpoints", action="store_true",
                       help="omit the nu=0 and nu=1 anchor rows")
    sweep.set_defaults(handler=_cmd_sweep)

    classify = sub.add_parser("classify", parents=[common], help="Nine-case label.")
    _add_physics(classify, nu=False)
    classify.add_argument("--format", choices=("table", "csv"), default="table")
    classify.set_defaults(handler=_cmd_classify)

    check = sub.add_parser("validate", parents=[common], help="Run the acceptance checks.")
    check.add_argument("--suite", choices=[s.value for s in acceptance.Suite], default="quick")
    check.add_argument("--only", type=_positive_int, action="append", default=None,
                       metavar="N", help="run only check N (repeatable)")
    check.set_defaults(handler=_cmd_validate)

    return parser


def _add_physics(parser: argparse.ArgumentParser, *, nu: bool) -> None:
    parser.add_argument("--lambda", dest="lam", type=_number("lambda"), required=True)
    parser.add_argument("--omega", type=_number("omega"), required=True)
    if nu:
        parser.add_argument("--nu", type=_number("nu"), required=True)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def _pole_columns(params: OscillatorParams) -> dict[str, float]:
    if params.is_interior:
        pole = find_pole(params)
        beta, sigma, r, theta = pole.beta, pole.sigma, pole.r, pole.theta
    else:
        beta, sigma, r, theta = endpoint_pole(params)
    res = abs(residual(complex(beta, sigma), params))
    return {"r": r, "theta": theta, "beta": beta, "sigma": sigma, "residual": res}


def _cmd_poles(args: argparse.Namespace, console: Console) -> int:
    params = validate(args.lam, args.omega, args.nu)
    values = _pole_columns(params)
    if args.format == "table":
        table = Table(title=f"Pole (lambda={args.lam:g}, omega={args.omega:g}, nu={args.nu:g})")
        table.add_column("Quantity", style="bold")
        table.add_column("Value", justify="right")
        for key, value in values.items():
            table.add_row(key, csvio.fmt(value))
        console.print(table)
        return EXIT_OK
    comment = csvio.comment_header(
        "poles", {"lambda": args.lam, "omega": args.omega, "nu": args.nu}
    )
    header = ["lambda", "omega", "nu", *values]
    row = [csvio.fmt(v) for v in (args.lam, args.omega, args.nu, *values.values())]
    csvio.write_text(csvio.render(header, [row], comment), args.output)
    return EXIT_OK


def _cmd_solve(args: argparse.Namespace, console: Console) -> int:
    params = validate(args.lam, args.omega, args.nu, args.x0, args.x1)
    if args.with_oracle and not params.is_interior:
        raise DomainError(f"--with-oracle needs 0 < nu < 1, got {args.nu!r}")
    cfg = DecayQuadratureConfig.from_env()
    t = time_grid(args.t_max, args.dt)
    total, osc, decay = AnalyticSolver(params, cfg).columns(t)

    header = ["t", "x_analytic", "x_oscillatory", "x_decay"]
    columns = [t, total, osc, decay]
    options: dict[str, object] = dict(zip(CSV_HEADER, params.as_tuple()))
    options.update({"t_max": args.t_max, "dt": args.dt, "rel_tol": cfg.rel_tol})
    if args.with_oracle:
        # the stepper must reach the last grid point
        horizon = max(args.t_max, float(t[-1]))
        traj = oracle.integrate(params, oracle.StepperConfig(args.oracle_h, horizon))
        header.append("x_oracle")
        columns.append(traj.sample_at(t))
        options["oracle_h"] = args.oracle_h
    comment = csvio.comment_header("solve", options)
    csvio.write_text(csvio.render(header, csvio.float_rows(columns), comment), args.output)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace, console: Console) -> int:
    if args.preset is None and (args.lam is None or args.omega is None):
        raise ParameterError("lambda/omega", None, "required unless --preset is given")
    grid = freqanalysis.nu_grid(args.nu_min, args.nu_max, args.nu_steps)
    workers = args.workers or config.get_workers()
    endpoints = not args.no_endpoints
    options: dict[str, object] = {
        "nu_min": args.nu_min,
        "nu_max": args.nu_max,
        "nu_steps": args.nu_steps,
        "endpoints": endpoints,
    }

    if args.preset is None:
        rows = freqanalysis.sigma_sweep(
            args.lam, args.omega, grid, workers, include_endpoints=endpoints
        )
        comment = csvio.comment_header(
            "sweep", {"lambda": args.lam, "omega": args.omega, **options}
        )
        body = [row.to_csv_row() for row in rows]
        csvio.write_text(csvio.render(freqanalysis.SWEEP_HEADER, body, comment), args.output)
        return EXIT_OK

    header = ["case", "curve", "lambda", "omega", *freqanalysis.SWEEP_HEADER]
    body = []
    for curve in freqanalysis.figure_sweeps(PRESETS[args.preset], grid, workers):
        rows = curve.rows if endpoints else curve.rows[1:-1]
        prefix = [curve.case.label, curve.name, csvio.fmt(curve.lam), csvio.fmt(curve.omega)]
        body.extend(prefix + row.to_csv_row() for row in rows)
    comment = csvio.comment_header("sweep", {"preset": args.preset, **options})
    csvio.write_text(csvio.render(header, body, comment), args.output)
    return EXIT_OK


def _cmd_classify(args: argparse.Namespace, console: Console) -> int:
    case = freqanalysis.classify(args.lam, args.omega)
    slope = freqanalysis.initial_slope(args.lam, args.omega)
    if args.format == "csv":
        comment = csvio.comment_header("classify", {"lambda": args.lam, "omega": args.omega})
        header = ["lambda", "omega", "initial_slope", "terminal", "case", "index", "slope"]
        row = [
            csvio.fmt(args.lam),
            csvio.fmt(args.omega),
            case.initial_slope.value,
            case.terminal.value,
            case.label,
            str(case.index),
            csvio.fmt(slope),
        ]
        csvio.write_text(csvio.render(header, [row], comment), args.output)
        return EXIT_OK
    table = Table(title=f"Classification (lambda={args.lam:g}, omega={args.omega:g})")
    table.add_column("Field", style="bold")
    table.add_column("Value")
    table.add_row("case", f"{case.index}: {case.label}")
    table.add_row("initial slope", f"{case.initial_slope.value} ({slope:.6g})")
    table.add_row("terminal", case.terminal.value)
    console.print(table)
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace, console: Console) -> int:
    only = set(args.only) if args.only else None
    results = acceptance.run_suite(args.suite, only)
    _print_report(results, args.suite, console)
    if args.output is not None:
        header = ["check", "name", "measured", "threshold", "passed", "elapsed_ms", "detail"]
        body = [
            [str(r.number), r.name, csvio.fmt(r.measured), csvio.fmt(r.threshold),
             str(r.passed).lower(), str(r.elapsed_ms), r.error or r.detail]
            for r in results
        ]
        comment = csvio.comment_header("validate", {"suite": args.suite})
        csvio.write_text(csvio.render(header, body, comment), args.output)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _print_report(
    results: Sequence[acceptance.CheckResult], suite: str, console: Console
) -> None:
    table = Table(title=f"Acceptance ({suite})", show_lines=False)
    table.add_column("#", justify="right")
    table.add_column("Check", style="bold")
    table.add_column("Measured", justify="right")
    table.add_column("Threshold", justify="right")
    table.add_column("Status")
    table.add_column("ms", justify="right")
    table.add_column("Detail")
    for r in results:
        status = "[green]OK[/]" if r.passed else "[red]Failed[/]"
        table.add_row(
            str(r.number),
            r.name,
            f"{r.measured:.3g}",
            f"{r.threshold:.3g}",
            status,
            str(r.elapsed_ms),
            r.error or r.detail,
        )
    console.print(table)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level or config.get_log_level())
    console = Console()
    err_console = Console(stderr=True)
    try:
        return args.handler(args, console)
    except (ParameterError, DomainError) as exc:
        err_console.print(f"[red]Error:[/] {escape(str(exc))}")
        return EXIT_INVALID
    except NumericalError as exc:
        logger.error("numerical failure code=%s: %s", exc.code, exc)
        err_console.print(f"[red]Numerical failure ({exc.code}):[/] {escape(str(exc))}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
