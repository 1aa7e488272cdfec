import logging
from pathlib import Path

from ..core.exceptions import ConfigValidationError
from ..core.lifespan import run_lifespan
from ..core.providers.executor import get_executor
from ..shared.repository import CsvResultRepository, IResultRepository
from .commands import COMMANDS
from .config_loader import serialize_config
from .schemas import RunConfig

logger = logging.getLogger(__name__)


def run(
    config: RunConfig,
    threads: int | None = None,
    repository: IResultRepository | None = None,
) -> Path:
    """Execute one configured command and return the path of its manifest.

    Library errors propagate unchanged; the caller maps them to exit codes.
    A ValueError (pydantic ValidationError included) from grid or rule
    construction is reported as a ConfigValidationError.
    """
    output_dir = Path(config.output_dir)
    handler = COMMANDS[config.command]
    with run_lifespan(config.command, output_dir):
        repository = repository or CsvResultRepository(output_dir)
        executor = get_executor(threads)
        try:
            handler(config, repository, executor)
        except ValueError as e:
            message = f"{config.command} cannot run with this configuration: {e}"
            raise ConfigValidationError(message, [str(e)]) from e
        return repository.write_manifest(config.command, serialize_config(config))
