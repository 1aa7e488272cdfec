"""Reading and overriding run configuration files."""
import logging
from pathlib import Path

from pydantic import ValidationError

from ..core.exceptions import ConfigValidationError, ParseError
from .schemas import RunConfig

logger = logging.getLogger(__name__)


def _location(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "config"


def _validate(payload: str | dict, source: str) -> RunConfig:
    try:
        if isinstance(payload, str):
            return RunConfig.model_validate_json(payload)
        return RunConfig.model_validate(payload)
    except ValidationError as e:
        errors = e.errors(include_url=False)
        malformed = [error for error in errors if error["type"] == "json_invalid"]
        if malformed:
            raise ParseError(f"{source}: {malformed[0]['msg']}") from e
        messages = [f"{_location(error['loc'])}: {error['msg']}" for error in errors]
        raise ConfigValidationError(f"{source} is invalid: " + "; ".join(messages), messages) from e


def parse_config(path: Path | str) -> RunConfig:
    """Load and validate a JSON run configuration, filling defaults from the settings."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"config file {path} does not exist")
    config = _validate(path.read_text(encoding="utf-8"), str(path))
    logger.info(f"Loaded {config.command} config from {path}")
    try:
        return config.with_defaults()
    except ValueError as e:
        raise ConfigValidationError(f"{path}: defaults do not fit the configuration: {e}", [str(e)]) from e


def apply_overrides(
    config: RunConfig,
    dt: float | None = None,
    t_max: float | None = None,
    output_dir: Path | str | None = None,
) -> RunConfig:
    """Command-line overrides, validated like the file contents."""
    data = config.model_dump(mode="json")
    if dt is not None:
        data["grid"]["dt"] = dt
    if t_max is not None:
        data["grid"]["t_max"] = t_max
    if output_dir is not None:
        data["output_dir"] = str(output_dir)
    return _validate(data, "command-line overrides")


def serialize_config(config: RunConfig) -> str:
    return config.model_dump_json(indent=2)
