"""
Configuration management for socodes

Values are read from a dotenv-format file (``socodes.env`` in the working
directory, or the file passed with ``--config``). The process environment is
never consulted.
"""
import logging
from pathlib import Path
from typing import Dict, Optional

from dotenv import dotenv_values

from src.helper.exceptions import ConfigurationError

DEFAULT_CONFIG_FILE = "socodes.env"

# Hard limits for exhaustive enumeration; a config file may only lower them
MAX_BINARY_ENUM_CAP = 28
MAX_FIELD_ENUM_CAP = 24


class Config:
    """Centralized configuration management"""

    def __init__(self, path: Optional[str] = None):
        self._values: Dict[str, Optional[str]] = {}
        self._source: Optional[str] = None
        self.load(path)

    def load(self, path: Optional[str] = None) -> None:
        """
        (Re)load values from a dotenv file

        Args:
            path: explicit file; when omitted, ``socodes.env`` is used if it exists
        """
        if path is None:
            candidate = Path(DEFAULT_CONFIG_FILE)
            if not candidate.is_file():
                self._values = {}
                self._source = None
                return
            path = str(candidate)
        if not Path(path).is_file():
            raise ConfigurationError(f"Config file not found: {path}")
        self._values = dict(dotenv_values(path))
        self._source = path

    def override(self, **values: str) -> None:
        """Set keys programmatically (tests, CLI flags)"""
        for key, value in values.items():
            self._values[key] = value

    @property
    def source(self) -> Optional[str]:
        return self._source

    def _int(self, key: str, default: int, minimum: int = 0, maximum: Optional[int] = None) -> int:
        raw = self._values.get(key)
        if raw is None or raw == "":
            return default
        try:
            value = int(raw)
        except ValueError:
            raise ConfigurationError(f"{key} must be an integer, got {raw!r}")
        if value < minimum or (maximum is not None and value > maximum):
            raise ConfigurationError(f"{key}={value} outside [{minimum}, {maximum}]")
        return value

    @property
    def log_level(self) -> int:
        """Get logging level"""
        name = (self._values.get("SOCODES_LOG_LEVEL") or "WARNING").upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ConfigurationError(f"SOCODES_LOG_LEVEL: unknown level {name!r}")
        return level

    @property
    def binary_enum_cap(self) -> int:
        """Largest binary dimension enumerated exhaustively"""
        return self._int("SOCODES_BINARY_ENUM_CAP", MAX_BINARY_ENUM_CAP, 1, MAX_BINARY_ENUM_CAP)

    @property
    def field_enum_cap(self) -> int:
        """Largest k*m enumerated exhaustively over GF(2^m)"""
        return self._int("SOCODES_FIELD_ENUM_CAP", MAX_FIELD_ENUM_CAP, 1, MAX_FIELD_ENUM_CAP)

    @property
    def jobs(self) -> int:
        """Default number of enumeration shards"""
        return self._int("SOCODES_JOBS", 1, 1, 256)

    @property
    def search_budget(self) -> int:
        """Random trials for witness and outer-code searches"""
        return self._int("SOCODES_SEARCH_BUDGET", 20000, 1)

    @property
    def envelope_t_max(self) -> int:
        """Largest t of the expansion-bound family in the figure data"""
        return self._int("SOCODES_ENVELOPE_T_MAX", 8, 2, 64)

    @property
    def code_dir(self) -> Optional[Path]:
        """Directory holding bundled inner code files"""
        raw = self._values.get("SOCODES_CODE_DIR")
        if not raw:
            return None
        return Path(raw)


# Global config instance
config = Config()
