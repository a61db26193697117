"""
Configuration for mimo-dof runs.

Defaults come from the environment (optionally a `.env` file loaded with
python-dotenv); scenario files are line-oriented `key = value` text.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, TypeVar, Union

from dotenv import load_dotenv

from .errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")

SCENARIO_KEYS = (
    "config",
    "scheme",
    "trials",
    "snr-lo",
    "snr-hi",
    "snr-step",
    "seed",
    "gamma",
    "out",
    "d-tt",
    "d-tr",
    "workers",
    "m",
    "n",
)


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return cast(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"Environment variable {name}={raw!r} is not a valid {cast.__name__}") from exc


@dataclass(frozen=True)
class Defaults:
    """Knob values used when neither the command line nor a scenario file sets them"""
    trials: int = 20
    snr_lo: float = 40.0
    snr_hi: float = 60.0
    snr_step: float = 5.0
    seed: int = 0
    gamma: float = 2.0
    tolerance: float = 0.15
    workers: int = 1
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls, dotenv_path: Optional[Union[str, Path]] = None) -> "Defaults":
        """Read MIMO_DOF_* variables, loading a .env file first if one exists"""
        load_dotenv(dotenv_path=dotenv_path, override=False)
        base = cls()
        return cls(
            trials=_env("MIMO_DOF_TRIALS", base.trials, int),
            snr_lo=_env("MIMO_DOF_SNR_LO", base.snr_lo, float),
            snr_hi=_env("MIMO_DOF_SNR_HI", base.snr_hi, float),
            snr_step=_env("MIMO_DOF_SNR_STEP", base.snr_step, float),
            seed=_env("MIMO_DOF_SEED", base.seed, int),
            gamma=_env("MIMO_DOF_GAMMA", base.gamma, float),
            tolerance=_env("MIMO_DOF_TOLERANCE", base.tolerance, float),
            workers=_env("MIMO_DOF_WORKERS", base.workers, int),
            log_level=_env("MIMO_DOF_LOG_LEVEL", base.log_level, str).upper(),
        )


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("_", "-")


def parse_scenario_text(text: str, source: str = "<scenario>") -> Dict[str, str]:
    """Parse `key = value` lines; `#` starts a comment"""
    values: Dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = content.split("=", 1)
        key = normalize_key(key)
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"{source}:{lineno}: empty key or value")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key '{key}'")
        if key not in SCENARIO_KEYS:
            logger.warning("%s:%d: ignoring unknown key '%s'", source, lineno, key)
            continue
        values[key] = value
    return values


def read_scenario_file(path: Union[str, Path]) -> Dict[str, str]:
    """Load a scenario file from disk"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"Cannot read scenario file {path}: {exc}") from exc
    return parse_scenario_text(text, source=str(path))
