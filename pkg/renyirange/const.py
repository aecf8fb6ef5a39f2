"""Program global constants."""
from __future__ import annotations

from types import MappingProxyType
from typing import Any

LOG_FORMAT = "%(asctime)s [%(levelname)8s] %(message)s (%(name)s:%(lineno)s)"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# CLI exit codes
EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT_ERROR = 2
EXIT_RANGE_ERROR = 3

# defaults applied when no configuration file or flag overrides them
DEFAULT_CONFIG: MappingProxyType[str, Any] = MappingProxyType(
    {
        "general": {"base": "e", "log_level": "INFO"},
        "verify": {
            "seed": 7,
            "tolerance": 1e-9,
            "envelope_slack": 5e-3,
            "bin_width": 0.01,
            "batch_size": 65536,
        },
        "export": {"samples_per_segment": 200, "resolution": 25},
    }
)
