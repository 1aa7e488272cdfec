"""Command-line entry point."""
import argparse
import logging
import logging.config
import sys
from collections.abc import Sequence
from pathlib import Path

from .cli.config_loader import apply_overrides, parse_config
from .cli.runner import run as run_config
from .core.config import settings
from .core.exceptions import TavisError

logger = logging.getLogger("app")


def setup_logging(level: str | None = None) -> None:
    """Load logging.ini when present, otherwise log to stderr only."""
    ini_path = Path(settings.LOG_CONFIG)
    if settings.LOG_CONFIG.lower() != "none" and ini_path.is_file():
        Path(settings.LOG_DIR).mkdir(parents=True, exist_ok=True)
        logging.config.fileConfig(ini_path, disable_existing_loggers=False)
    else:
        logging.basicConfig(
            level=logging.INFO,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            handlers=[logging.StreamHandler()],
        )
    if level:
        logging.getLogger().setLevel(level.upper())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tavis-cummings",
        description="Batch runs of the Tavis-Cummings ensemble driven by few-photon pulses",
    )
    parser.add_argument("--config", required=True, help="Path of the JSON run configuration")
    parser.add_argument("--out", default=None, help="Output directory, overrides output_dir")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads for grid evaluations")
    parser.add_argument("--dt", type=float, default=None, help="Integrator step, overrides grid.dt")
    parser.add_argument("--tmax", type=float, default=None, help="Final time, overrides grid.t_max")
    parser.add_argument(
        "--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Root log level"
    )
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        config = parse_config(args.config)
        config = apply_overrides(config, dt=args.dt, t_max=args.tmax, output_dir=args.out)
        manifest = run_config(config, threads=args.threads)
    except TavisError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        print(f"error: {e.detail}", file=sys.stderr)
        return e.exit_code
    logger.info(f"Finished, manifest at {manifest}")
    return 0


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
