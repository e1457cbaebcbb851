"""
key=value configuration files.

One setting per line, `#` starts a comment, values may be quoted:

    seed=2024
    runs=30
    budget_per_dim=1000
    algos=fcpo,pso,shade
    cases=F1-10,F10-20
    no_zoom=false
    parallel=4
    out=results

The process environment is never read.
"""
from pathlib import Path
from typing import Dict, Iterable, List

from dotenv import dotenv_values

from ..errors import ConfigurationError
from .matrix_io import PathLike

TRUE_VALUES = ("1", "true", "yes", "on")
FALSE_VALUES = ("0", "false", "no", "off")


def load_config_file(path: PathLike, allowed_keys: Iterable[str]) -> Dict[str, str]:
    """
    Parse a key=value file.

    Args:
        path: Config file
        allowed_keys: Keys the caller understands

    Returns:
        Mapping of the keys present in the file

    Raises:
        ConfigurationError: missing file, unknown key or key without a value
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    values = dotenv_values(dotenv_path=path, interpolate=False)
    allowed = set(allowed_keys)
    unknown = sorted(set(values) - allowed)
    if unknown:
        raise ConfigurationError(
            f"{path}: unknown key(s) {', '.join(unknown)}; expected {', '.join(sorted(allowed))}"
        )
    missing = sorted(k for k, v in values.items() if v is None)
    if missing:
        raise ConfigurationError(f"{path}: no value for {', '.join(missing)}")
    return dict(values)


def parse_bool(key: str, text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in TRUE_VALUES:
        return True
    if lowered in FALSE_VALUES:
        return False
    raise ConfigurationError(f"{key}: expected a boolean, got '{text}'")


def parse_int(key: str, text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ConfigurationError(f"{key}: expected an integer, got '{text}'") from None


def parse_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]
