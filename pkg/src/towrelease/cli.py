"""Command line front end.

Subcommands:

    tension          towline tension at a given speed
    release-speed    minimum tow speed for assured release in a wave
    bench            bench-rig angle consistency report
    simulate         run a scenario, emit telemetry CSV
    mission          run a scenario, emit the mission summary
    validate-config  check a scenario file and exit

Data goes to stdout or the declared output path; diagnostics go to
stderr.  Exit codes: 0 success, 1 configuration or parse error,
2 failure while a simulation is running.  Numbers print with
--precision significant digits (default 4).  --figures DIR renders PNG
figures next to the delimited output.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import NoReturn

from .benchlab import (
    REFERENCE_REAL,
    consistency_report,
    format_report,
    report_csv,
    scale_to_bench,
)
from .errors import ConfigError, InfeasibleGeometryError, SimulationError, TowReleaseError
from .physics import (
    KNOT,
    TowConfig,
    WaveField,
    min_release_speed,
    mps_to_knots,
    tow_tension,
)
from .scenario import load_scenario
from .simulator import SimResult, run

log = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """argparse maps its own errors to exit 2; this CLI reserves 2 for
    simulation-time failures, so bad arguments exit 1 instead."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value: float, precision: int) -> str:
    return f"{value:.{precision}g}"


def _write_output(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="towrelease",
        description="Deterministic tow-and-release mission tools.",
    )
    parser.add_argument(
        "--precision", type=int, default=4, metavar="N",
        help="significant digits for printed numbers (default 4)",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="more diagnostics on stderr (-v info, -vv debug)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tension", help="towline tension at a tow speed")
    speed = p.add_mutually_exclusive_group(required=True)
    speed.add_argument("--speed", type=float, help="tow speed [m/s]")
    speed.add_argument("--speed-kn", type=float, help="tow speed [kn]")
    p.add_argument("--rho", type=float, default=1020.0, help="fluid density [kg/m^3]")
    p.add_argument("--cd", type=float, default=0.42, help="drag coefficient")
    p.add_argument("--sigma", type=float, default=0.057, help="cross-section [m^2]")
    p.add_argument("--theta-deg", type=float, default=45.0, help="towline angle [deg]")
    p.add_argument("--rated-load", type=float, default=2000.0, help="rated load [N]")

    p = sub.add_parser("release-speed", help="minimum assured-release tow speed")
    p.add_argument("--amplitude", type=float, required=True, help="wave amplitude [m]")
    p.add_argument("--period", type=float, required=True, help="wave period [s]")
    p.add_argument("--gravity", type=float, default=9.81, help="gravity [m/s^2]")

    p = sub.add_parser("bench", help="bench-rig angle consistency report")
    p.add_argument("--csv", metavar="PATH", help="also write the report as CSV")
    p.add_argument("--figures", metavar="DIR", help="render figures into DIR")
    p.add_argument(
        "--scale-height", type=float, metavar="H",
        help="also scale the full-size rig onto a bench of height H [m]",
    )
    p.add_argument(
        "--scale-tether", type=float, metavar="L",
        help="tether length for --scale-height instead of the automatic one [m]",
    )

    for name, blurb in (
        ("simulate", "run a scenario and emit telemetry CSV"),
        ("mission", "run a scenario and emit the mission summary"),
    ):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--config", required=True, metavar="PATH", help="scenario file")
        p.add_argument(
            "--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
            help="override a scenario value (repeatable)",
        )
        p.add_argument(
            "--output", metavar="PATH",
            help="telemetry CSV destination ('-' = stdout)",
        )
        p.add_argument("--figures", metavar="DIR", help="render figures into DIR")
        if name == "simulate":
            p.add_argument(
                "--summary", action="store_true",
                help="also print the mission summary on stderr",
            )

    p = sub.add_parser("validate-config", help="check a scenario file")
    p.add_argument("--config", required=True, metavar="PATH", help="scenario file")
    p.add_argument(
        "--override", action="append", default=[], metavar="SECTION.KEY=VALUE",
        help="override a scenario value (repeatable)",
    )
    return parser


def _cmd_tension(args) -> int:
    cfg = TowConfig(
        rho=args.rho, c_d=args.cd, sigma=args.sigma,
        theta=math.radians(args.theta_deg), rated_load=args.rated_load,
    )
    speed = args.speed if args.speed is not None else args.speed_kn * KNOT
    tension = tow_tension(cfg, speed)
    print(f"{_fmt(tension, args.precision)} N")
    if tension > cfg.rated_load:
        print(
            f"warning: tension exceeds the rated load "
            f"{_fmt(cfg.rated_load, args.precision)} N",
            file=sys.stderr,
        )
    return 0


def _cmd_release_speed(args) -> int:
    wave = WaveField(args.amplitude, args.period, args.gravity)
    v = min_release_speed(wave)
    print(f"{_fmt(v, args.precision)} m/s ({_fmt(mps_to_knots(v), args.precision)} kn)")
    return 0


def _cmd_bench(args) -> int:
    rows = consistency_report()
    print(format_report(rows))
    if args.scale_height is not None:
        rig = scale_to_bench(REFERENCE_REAL, args.scale_height, args.scale_tether)
        p = args.precision
        print(
            f"scaled rig: l={_fmt(rig.tether_length, p)} m "
            f"H={_fmt(rig.anchor_height, p)} m "
            f"h'_trough={_fmt(rig.trough_excursion, p)} m "
            f"h'_crest={_fmt(rig.crest_excursion, p)} m"
        )
    if args.csv:
        Path(args.csv).write_text(report_csv(rows), encoding="utf-8")
        print(f"report csv written to {args.csv}", file=sys.stderr)
    if args.figures:
        from .plotting import save_bench_figure

        for path in save_bench_figure(rows, args.figures):
            print(f"figure written to {path}", file=sys.stderr)
    return 0


def _run_scenario(args) -> SimResult:
    config = load_scenario(args.config, args.override)
    return run(config)


def _maybe_figures(result: SimResult, figures_dir: str | None) -> None:
    if figures_dir:
        from .plotting import save_mission_figures

        for path in save_mission_figures(result, figures_dir):
            print(f"figure written to {path}", file=sys.stderr)


def _cmd_simulate(args) -> int:
    result = _run_scenario(args)
    _write_output(result.telemetry_csv(), args.output)
    if args.summary:
        for line in result.summary.lines():
            print(line, file=sys.stderr)
    _maybe_figures(result, args.figures)
    return 0


def _cmd_mission(args) -> int:
    result = _run_scenario(args)
    for line in result.summary.lines():
        print(line)
    if args.output:
        _write_output(result.telemetry_csv(), args.output)
        print(f"telemetry written to {args.output}", file=sys.stderr)
    _maybe_figures(result, args.figures)
    return 0


def _cmd_validate_config(args) -> int:
    load_scenario(args.config, args.override)
    print("ok")
    return 0


_COMMANDS = {
    "tension": _cmd_tension,
    "release-speed": _cmd_release_speed,
    "bench": _cmd_bench,
    "simulate": _cmd_simulate,
    "mission": _cmd_mission,
    "validate-config": _cmd_validate_config,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except SimulationError as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, InfeasibleGeometryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TowReleaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
