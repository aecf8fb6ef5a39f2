"""Reads the run configuration from a YAML file."""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import yaml
from voluptuous import All, Coerce, In, Invalid, Optional, Range, Schema

from renyirange.const import DEFAULT_CONFIG
from renyirange.core.entropy import LogBase
from renyirange.errors import InputError

if TYPE_CHECKING:
    from pathlib import Path

_LOGGER = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _defaults(section: str) -> dict[str, Any]:
    return copy.deepcopy(DEFAULT_CONFIG[section])


@dataclass
class ConfigReader:
    """Reads the run configuration from a YAML file.

    Missing sections and keys are filled in from the built-in defaults. Without
    a file the reader holds the defaults only.
    """

    _config: dict[str, Any] = field(init=False, repr=False)
    config_file_path: Path | None = field(repr=True, default=None)

    def __post_init__(self) -> None:
        """Initialize the class."""
        config: Any = {}
        if self.config_file_path is not None:
            if not self.config_file_path.exists():
                msg = f"Configuration file {self.config_file_path} not found."
                raise InputError(msg)

            with self.config_file_path.open(encoding="utf-8") as config_file:
                try:
                    config = yaml.safe_load(config_file) or {}
                except yaml.YAMLError as exc:
                    msg = f"Error parsing configuration file {self.config_file_path}."
                    _LOGGER.exception(msg)
                    raise InputError(msg) from exc
        else:
            _LOGGER.debug("No configuration file, using defaults")

        # validate the configuration
        try:
            self._config = self._config_schema(config)
        except Invalid as exc:
            msg = f"Invalid configuration at '{'.'.join(str(p) for p in exc.path)}': {exc.msg}"
            raise InputError(msg) from exc

    @property
    def config(self) -> dict[str, Any]:
        """Return the validated configuration as a dictionary.

        :return: The configuration as a dictionary.
        """
        return self._config

    def get(self, section: str, key: str) -> Any:
        """Return a single configuration value."""
        return self._config[section][key]

    @property
    def _config_schema(self) -> Schema:
        """Get the configuration schema as a Schema object.

        :return: Config schema.
        """
        general = _defaults("general")
        verify = _defaults("verify")
        export = _defaults("export")
        return Schema(
            {
                Optional("general", default=general): {
                    Optional("base", default=general["base"]): All(
                        Coerce(str), In([b.value for b in LogBase])
                    ),
                    Optional("log_level", default=general["log_level"]): All(
                        str, lambda v: v.upper(), In(LOG_LEVELS)
                    ),
                },
                Optional("verify", default=verify): {
                    Optional("seed", default=verify["seed"]): All(int, Range(min=0, max=2**64 - 1)),
                    Optional("tolerance", default=verify["tolerance"]): All(
                        Coerce(float), Range(min=0.0)
                    ),
                    Optional("envelope_slack", default=verify["envelope_slack"]): All(
                        Coerce(float), Range(min=0.0)
                    ),
                    Optional("bin_width", default=verify["bin_width"]): All(
                        Coerce(float), Range(min=0.0, min_included=False)
                    ),
                    Optional("batch_size", default=verify["batch_size"]): All(int, Range(min=1)),
                },
                Optional("export", default=export): {
                    Optional("samples_per_segment", default=export["samples_per_segment"]): All(
                        int, Range(min=2)
                    ),
                    Optional("resolution", default=export["resolution"]): All(int, Range(min=2)),
                },
            }
        )
