"""Module that contains the command line application."""

from __future__ import annotations

import logging
import sys
from typing import TYPE_CHECKING, Any

from renyirange.commandline.commandline import get_args, merge_config
from renyirange.commandline.commands import COMMANDS
from renyirange.config.configreader import ConfigReader
from renyirange.const import DATE_FORMAT, LOG_FORMAT
from renyirange.errors import OutOfRangeError, RenyiRangeError

if TYPE_CHECKING:
    from collections.abc import Sequence

_LOGGER = logging.getLogger(__name__)


def init_logger(log_level: int = logging.INFO) -> None:
    """Initialize python logger."""
    fmt = LOG_FORMAT
    datefmt = DATE_FORMAT

    # set the application logger, logs go to stderr
    logging.basicConfig(level=log_level, format=fmt, datefmt=datefmt, force=True, stream=sys.stderr)

    # set log level of imported modules
    logging.getLogger("matplotlib").setLevel(logging.WARNING)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command and return its exit code."""
    args: dict[str, Any] = get_args(argv)
    try:
        args = merge_config(args, ConfigReader(args.get("config")))
        init_logger(args["log_level"])
        _LOGGER.debug("Running %s with log level %s", args["command"], logging.getLevelName(args["log_level"]))
        return COMMANDS[args["command"]](args)
    except OutOfRangeError as exc:
        if exc.interval is not None:
            _LOGGER.error("%s Valid interval (nats): [%.17g, %.17g]", exc, *exc.interval)  # noqa: TRY400
        else:
            _LOGGER.error("%s", exc)  # noqa: TRY400
        return exc.exit_code
    except RenyiRangeError as exc:
        _LOGGER.error("%s", exc)  # noqa: TRY400
        return exc.exit_code


def main() -> None:
    """Entry point for the application script."""
    sys.exit(run())


if __name__ == "__main__":
    main()
