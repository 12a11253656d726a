"""
Configuration for the Ramanujan digraph toolkit.

Values are resolved in three layers: built-in defaults, the JSON file
spectral_config.json (or the file named by RAMANUJAN_CONFIG), and finally
environment variables, which may also come from a .env file.
"""

import os
import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Optional

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

CONFIG_FILE = Path(__file__).resolve().parent / "spectral_config.json"


class Config:
    """Numerical thresholds and tolerances shared by every module."""

    LOG_LEVEL = "INFO"
    DENSE_THRESHOLD = 4096
    TOLERANCE = 1e-8
    TRIVIAL_MATCH_TOL = 1e-6
    ZERO_SNAP_MAX_N = 1024
    ARNOLDI_TOL = 1e-10
    ARNOLDI_CERT_TOL = 1e-6
    ARNOLDI_MAXITER = 20000
    POWER_NORM_DENSE_MAX = 2048
    POWER_NORM_TOL = 1e-8
    CLOSURE_CAP = 1_000_000
    WALK_MAX_N = 100_000
    DIAMETER_MAX_N = 20_000
    RH_TOLERANCE = 1e-6
    SEED = 0

    # attribute -> (environment variable, parser)
    _ENV: Dict[str, tuple] = {
        "LOG_LEVEL": ("LOG_LEVEL", str),
        "DENSE_THRESHOLD": ("RAMANUJAN_DENSE_THRESHOLD", int),
        "TOLERANCE": ("RAMANUJAN_TOLERANCE", float),
        "TRIVIAL_MATCH_TOL": ("RAMANUJAN_TRIVIAL_MATCH_TOL", float),
        "ZERO_SNAP_MAX_N": ("RAMANUJAN_ZERO_SNAP_MAX_N", int),
        "ARNOLDI_TOL": ("RAMANUJAN_ARNOLDI_TOL", float),
        "ARNOLDI_CERT_TOL": ("RAMANUJAN_ARNOLDI_CERT_TOL", float),
        "ARNOLDI_MAXITER": ("RAMANUJAN_ARNOLDI_MAXITER", int),
        "POWER_NORM_DENSE_MAX": ("RAMANUJAN_POWER_NORM_DENSE_MAX", int),
        "POWER_NORM_TOL": ("RAMANUJAN_POWER_NORM_TOL", float),
        "CLOSURE_CAP": ("RAMANUJAN_CLOSURE_CAP", int),
        "WALK_MAX_N": ("RAMANUJAN_WALK_MAX_N", int),
        "DIAMETER_MAX_N": ("RAMANUJAN_DIAMETER_MAX_N", int),
        "RH_TOLERANCE": ("RAMANUJAN_RH_TOLERANCE", float),
        "SEED": ("RAMANUJAN_SEED", int),
    }

    def __init__(self, overrides: Optional[Dict[str, Any]] = None):
        """
        Initialize configuration.

        Args:
            overrides: Values applied after the file and environment layers
        """
        for key, value in (overrides or {}).items():
            self.set(key, value)

    def set(self, key: str, value: Any) -> None:
        """
        Set a configuration value, coercing it to the type of the default.

        Raises:
            KeyError: If the key is not a known setting
        """
        key = key.upper()
        if key not in self._ENV:
            raise KeyError(f"Unknown configuration key: {key}")
        parser: Callable = self._ENV[key][1]
        setattr(self, key, parser(value))

    def as_dict(self) -> Dict[str, Any]:
        """Return the effective settings."""
        return {key: getattr(self, key) for key in self._ENV}


def load_config(config_file: Optional[Path] = None) -> Config:
    """
    Load configuration from file and environment variables.

    Args:
        config_file: JSON file to read; defaults to RAMANUJAN_CONFIG or
            spectral_config.json next to this module

    Returns:
        Populated Config instance
    """
    cfg = Config()

    path = config_file or Path(os.getenv("RAMANUJAN_CONFIG", str(CONFIG_FILE)))
    if path.exists():
        try:
            with open(path, "r") as f:
                file_config = json.load(f)
            for key, value in file_config.items():
                cfg.set(key, value)
        except (OSError, ValueError, KeyError) as e:
            logger.warning(f"Could not load config file {path}: {e}")

    for key, (env_name, _) in Config._ENV.items():
        if env_name in os.environ:
            try:
                cfg.set(key, os.environ[env_name])
            except ValueError as e:
                logger.warning(f"Ignoring invalid {env_name}: {e}")

    return cfg


config = load_config()
