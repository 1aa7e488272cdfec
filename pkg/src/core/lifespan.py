"""
Run Lifespan Events

This module wraps a single batch run: it logs start and shutdown,
times the run and reports failures before they propagate.
"""

import logging
import time
from collections.abc import Generator
from contextlib import contextmanager
from pathlib import Path

from .exceptions import TavisError

logger = logging.getLogger(__name__)


@contextmanager
def run_lifespan(command: str, output_dir: Path) -> Generator[None, None, None]:
    """
    Manages the lifespan of one CLI run.

    Startup:
    - Creates the output directory
    - Logs the command

    Shutdown:
    - Logs the elapsed time, or the failure and its exit code
    """
    started = time.perf_counter()
    try:
        logger.info(f"Starting {command} run into {output_dir}")
        output_dir.mkdir(parents=True, exist_ok=True)
        yield
        logger.info(f"Run {command} complete")
    except TavisError as e:
        logger.error(f"Run {command} failed with exit code {e.exit_code}: {e.detail}")
        raise
    except Exception as e:
        logger.error(f"Unexpected error during {command}: {str(e)}")
        raise
    finally:
        logger.info(f"Shutting down after {time.perf_counter() - started:.2f} s")
