from typing import Any, Union

from pathlib import Path

from dkp_spectra.exceptions import ConfigFileError
from dkp_spectra.utils.telemetry import setup_logger

logger = setup_logger(__name__)


def normalize_key(key: str) -> str:
    """
    Config keys accept flag spelling with dashes or underscores.

    >>> normalize_key("--n-max")
    'n_max'
    """
    return key.strip().lstrip("-").replace("-", "_").lower()


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """
    Flat key = value lines; blank lines and everything after # are ignored.

    >>> parse_config_text("lambda = 0.1  # AdS\\nomega=2")
    {'lambda': '0.1', 'omega': '2'}
    """
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigFileError(source, number, raw)
        key, value = line.split("=", 1)
        key = normalize_key(key)
        if not key:
            raise ConfigFileError(source, number, raw)
        values[key] = value.strip()
    return values


def load_config_file(path: Union[str, Path]) -> dict[str, str]:
    path = Path(path)
    values = parse_config_text(path.read_text(encoding="utf-8"), str(path))
    logger.debug(f"Loaded {len(values)} keys from {path}")
    return values


def build_default_map(values: dict[str, Any], commands: dict[str, list[str]]) -> dict[str, Any]:
    """
    click default_map for the group: group level keys at the top, and for each subcommand the
    keys that name one of its parameters.
    """
    default_map: dict[str, Any] = dict(values)
    for command, parameters in commands.items():
        default_map[command] = {key: value for key, value in values.items() if key in parameters}
    return default_map
