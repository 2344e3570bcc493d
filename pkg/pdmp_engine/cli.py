"""
Command-line driver for PDMP experiments.

Sub-commands:
    simulate        run one experiment
    sweep-epsilon   run one experiment per epsilon value
    sweep-k         run one experiment per penalty exponent
    preset          print the JSON config of a named preset
    plot-data       merge summary files into long-format plot data
    plot            render plot data to HTML

Exit codes: 0 success, 1 config or input error, 2 failed acceptance check.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from .config.experiment_loader import OUTPUT_FORMATS, PROCESS_KINDS, load_experiment, preset_document
from .config.simulation_config import SIMULATION_CONFIG
from .errors import ConfigError, PDMPError, ValidationFailureError
from .experiments.plot_data import emit_plot_data, render_plot
from .experiments.runner import run_sweep

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2


def _parse_values(raw: str, parameter: str) -> list:
    try:
        if parameter == "k":
            return [int(v) for v in raw.split(",") if v.strip()]
        return [float(v) for v in raw.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--values {raw!r} is not a comma-separated list of numbers for {parameter}") from exc


def _add_run_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="experiment JSON file")
    parser.add_argument("--preset", help="named preset, e.g. quadratic-if")
    parser.add_argument("--process", choices=PROCESS_KINDS)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--k", type=int)
    parser.add_argument("--replicas", type=int)
    parser.add_argument("--seed", type=int, help="root seed (PDMP_SEED overrides it)")
    parser.add_argument("--workers", type=int)
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--format", choices=OUTPUT_FORMATS)
    parser.add_argument("--require-pass", action="store_true", default=None,
                        help="exit 2 when an acceptance check fails")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pdmp", description="Fast-switching PDMP simulations and averaging checks")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    _add_run_arguments(commands.add_parser("simulate", help="run one experiment"))
    for name in ("sweep-epsilon", "sweep-k"):
        sweep = commands.add_parser(name, help=f"one experiment per {name.split('-')[1]} value")
        _add_run_arguments(sweep)
        sweep.add_argument("--values", required=True, help="comma-separated values")

    preset = commands.add_parser("preset", help="print the JSON config of a preset")
    preset.add_argument("name")
    preset.add_argument("--out", help="write to this file instead of stdout")

    plot_data = commands.add_parser("plot-data", help="merge summary.json files into plot data")
    plot_data.add_argument("summaries", nargs="*")
    plot_data.add_argument("--parameter", default="epsilon", help="resolved-config key of the sweep value")
    plot_data.add_argument("--out", default=SIMULATION_CONFIG["output"]["plot_file"])

    plot = commands.add_parser("plot", help="render plot data to HTML")
    plot.add_argument("plot_csv")
    plot.add_argument("--out", default="plot.html")
    plot.add_argument("--linear-x", action="store_true", help="linear instead of log x axis")
    return parser


def _overrides(args: argparse.Namespace) -> dict:
    overrides = {
        "process": args.process,
        "epsilon": args.epsilon,
        "k": args.k,
        "replicas": args.replicas,
        "seed": args.seed,
        "workers": args.workers,
        "out": args.out,
        "format": args.format,
        "require_pass": args.require_pass,
    }
    if args.command in ("sweep-epsilon", "sweep-k"):
        parameter = args.command.split("-")[1]
        overrides["sweep"] = {"parameter": parameter, "values": _parse_values(args.values, parameter)}
    return overrides


def _run(args: argparse.Namespace) -> int:
    if args.command in ("simulate", "sweep-epsilon", "sweep-k"):
        experiment = load_experiment(args.config, preset=args.preset, overrides=_overrides(args))
        run_sweep(experiment)
        logger.info("artifacts in %s", experiment.out)
    elif args.command == "preset":
        text = json.dumps(preset_document(args.name), indent=2, sort_keys=True) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        else:
            sys.stdout.write(text)
    elif args.command == "plot-data":
        emit_plot_data(args.summaries, args.parameter, args.out)
    elif args.command == "plot":
        render_plot(args.plot_csv, args.out, log_x=not args.linear_x)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and return its exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s - %(levelname)s - %(message)s",
    )
    try:
        return _run(args)
    except ValidationFailureError as exc:
        logger.error("validation failed: %s", exc)
        return EXIT_VALIDATION
    except (PDMPError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
