"""
Command-line entry point.

    dude-sim run --config scenario.json --out results/
    dude-sim compare --preset pico-bias0 --out results/
    dude-sim sweep --param small_bias_db --values 0,2,4,6,8 --out results/

Exit codes: 0 on success, 2 for configuration errors, 3 for simulation and
other failures.
"""

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

from src.config import apply_overrides, load_config, settings
from src.repositories import ReportRepository
from src.schemas.network import NetworkConfig
from src.services.presets import PRESETS, get_preset
from src.services.runner import ScenarioRunner, sweep_summary_rows
from src.utils.exceptions import ConfigError, DudeSimError
from src.utils.logging import configure_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_FAILURE = 3


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_scenario_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="JSON or YAML scenario config")
    parser.add_argument("--seed", type=int, default=None, help="Override master_seed")
    parser.add_argument("--drops", type=_positive_int, default=None, help="Override num_drops")
    parser.add_argument("--slots", type=_positive_int, default=None, help="Override slots_per_drop")
    parser.add_argument(
        "--workers",
        type=_positive_int,
        default=None,
        help=f"Worker processes (default: {settings.DEFAULT_WORKERS})",
    )
    parser.add_argument("--out", type=Path, required=True, help="Output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=settings.APP_NAME,
        description="Downlink/uplink decoupling simulator for two-tier cellular networks",
    )
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default=None,
        help=f"Log level (default: {settings.LOG_LEVEL})",
    )
    parser.add_argument(
        "--log-format", choices=["console", "json"], default=None, help="Log renderer"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.VERSION}")

    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run one scenario (coupled baseline + configured policy)")
    _add_scenario_arguments(run)

    compare = commands.add_parser("compare", help="Run a preset baseline-vs-test comparison")
    compare.add_argument("--preset", required=True, choices=list(PRESETS))
    _add_scenario_arguments(compare)

    sweep = commands.add_parser("sweep", help="Repeat a scenario over values of one config field")
    sweep.add_argument("--param", required=True, help="NetworkConfig field to vary")
    sweep.add_argument("--values", required=True, help="Comma-separated values, e.g. 0,2,4,6,8")
    sweep.add_argument("--preset", choices=list(PRESETS), default=None, help="Preset to re-run per value")
    _add_scenario_arguments(sweep)

    return parser


def _scenario_config(args: argparse.Namespace) -> NetworkConfig:
    config = load_config(args.config) if args.config else NetworkConfig()
    return apply_overrides(
        config,
        master_seed=args.seed,
        num_drops=args.drops,
        slots_per_drop=args.slots,
    )


def _split_values(text: str) -> list[str]:
    values = [value.strip() for value in text.split(",") if value.strip()]
    if not values:
        raise argparse.ArgumentTypeError("--values needs at least one value")
    return values


def _run(args: argparse.Namespace, runner: ScenarioRunner) -> None:
    report = runner.run_scenario(_scenario_config(args))
    ReportRepository(args.out).save_all(report)


def _compare(args: argparse.Namespace, runner: ScenarioRunner) -> None:
    report = runner.compare_policies(_scenario_config(args), get_preset(args.preset))
    ReportRepository(args.out).save_all(report)


def _sweep(args: argparse.Namespace, runner: ScenarioRunner) -> None:
    preset = get_preset(args.preset) if args.preset else None
    results = runner.sweep(_scenario_config(args), args.param, _split_values(args.values), preset)
    for value, report in results:
        ReportRepository(args.out / f"{args.param}={value}").save_all(report)
    ReportRepository(args.out).save_sweep(sweep_summary_rows(args.param, results))


COMMANDS = {"run": _run, "compare": _compare, "sweep": _sweep}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, run the command and map failures to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_format)

    runner = ScenarioRunner(args.workers)
    try:
        COMMANDS[args.command](args, runner)
    except argparse.ArgumentTypeError as e:
        parser.print_usage(sys.stderr)
        logger.error("Invalid arguments", error=str(e))
        return EXIT_CONFIG_ERROR
    except ConfigError as e:
        logger.error("Configuration error", error=str(e), field=getattr(e, "field", None))
        return EXIT_CONFIG_ERROR
    except DudeSimError as e:
        logger.error("Simulation failed", error=str(e), error_type=type(e).__name__)
        return EXIT_FAILURE
    except Exception:
        logger.exception("Unexpected error")
        return EXIT_FAILURE

    logger.info("Done", command=args.command, out=str(args.out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
