"""Commandline interface for renyirange."""
from __future__ import annotations

import argparse
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Any

from renyirange.core.entropy import LogBase, Order
from renyirange.errors import RenyiRangeError

from .models import OutputFormat, Side

if TYPE_CHECKING:
    from collections.abc import Sequence

    from renyirange.config.configreader import ConfigReader

# command line flag -> (config section, config key)
CONFIG_FLAGS = {
    "base": ("general", "base"),
    "log_level": ("general", "log_level"),
    "seed": ("verify", "seed"),
    "tolerance": ("verify", "tolerance"),
    "slack": ("verify", "envelope_slack"),
    "bin_width": ("verify", "bin_width"),
    "batch_size": ("verify", "batch_size"),
    "samples": ("export", "samples_per_segment"),
    "resolution": ("export", "resolution"),
}


def _check_file_exists(path: Path) -> Path:
    """Check if file exists."""
    if not isinstance(path, Path):
        msg = f"{path} is not a valid path."
        raise argparse.ArgumentTypeError(msg)
    if not path.exists():
        msg = f"{path} does not exist."
        raise argparse.ArgumentTypeError(msg)
    if not path.is_file():
        msg = f"{path} is not a file."
        raise argparse.ArgumentTypeError(msg)
    return path


def parse_orders(text: str) -> list[Order]:
    """Parse a comma separated list of orders: decimals, ``0``, ``1`` or ``inf``."""
    try:
        return [Order.parse(token) for token in text.split(",")]
    except RenyiRangeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def parse_floats(text: str) -> list[float]:
    """Parse a comma separated list of reals."""
    try:
        return [float(token) for token in text.split(",")]
    except ValueError as exc:
        msg = f"Cannot parse '{text}' as a comma separated list of numbers."
        raise argparse.ArgumentTypeError(msg) from exc


def _common_parser() -> argparse.ArgumentParser:
    """Options shared by every subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "-l",
        "--log-level",
        help="Set application-wide log level.",
        default=None,
        type=str,
    )
    common.add_argument("-c", "--config", help="Configuration file path.", type=Path)
    common.add_argument(
        "--base",
        help="Logarithm base of entropies read and written.",
        choices=[b.value for b in LogBase],
        default=None,
    )
    common.add_argument(
        "--format",
        help="Report format.",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.CSV.value,
    )
    common.add_argument("-o", "--output", help="Output file, standard output if omitted.", type=Path)
    return common


def _build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="renyirange",
        description="Rényi entropies and the joint ranges of two or three of them.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    entropy = commands.add_parser("entropy", parents=[common], help="Entropies of a distribution.")
    entropy.add_argument(
        "--dist",
        help="Comma separated probabilities, or a CSV file with one column of probabilities.",
        required=True,
        type=str,
    )
    entropy.add_argument("--orders", help="Comma separated orders.", type=parse_orders, required=True)

    bound = commands.add_parser("bound", parents=[common], help="Tight bound on the last entropy.")
    bound.add_argument("--orders", help="Two or three increasing orders.", type=parse_orders, required=True)
    bound.add_argument("--h", help="Values of all but the last entropy.", type=parse_floats, required=True)
    bound.add_argument("--n", help="Alphabet size.", type=int, default=None)
    bound.add_argument("--side", choices=[s.value for s in Side], required=True)

    curve = commands.add_parser("curve", parents=[common], help="Boundary of the range of two entropies.")
    curve.add_argument("--orders", help="Two increasing orders.", type=parse_orders, required=True)
    curve.add_argument("--n", help="Alphabet size.", type=int, required=True)
    curve.add_argument("--samples", help="Points per boundary segment.", type=int, default=None)

    surface = commands.add_parser("surface", parents=[common], help="Boundary sheets of the range of three entropies.")
    surface.add_argument("--orders", help="Three increasing orders.", type=parse_orders, required=True)
    surface.add_argument("--n", help="Alphabet size.", type=int, required=True)
    surface.add_argument("--resolution", help="Mesh points per simplex edge.", type=int, default=None)

    verify = commands.add_parser("verify", parents=[common], help="Check the bounds against sampled distributions.")
    verify.add_argument("--orders", help="Two or three increasing orders.", type=parse_orders, required=True)
    verify.add_argument("--n", help="Alphabet size.", type=int, required=True)
    verify.add_argument("--mode", choices=["mc", "lattice"], default="mc")
    verify.add_argument("--count", help="Monte Carlo sample count.", type=int, default=10000)
    verify.add_argument(
        "--resolution", dest="lattice_resolution", help="Lattice resolution R.", type=int, default=100
    )
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--tolerance", type=float, default=None)
    verify.add_argument("--slack", help="Envelope agreement slack.", type=float, default=None)
    verify.add_argument("--bin-width", type=float, default=None)
    verify.add_argument("--batch-size", type=int, default=None)
    return parser


def get_args(argv: Sequence[str] | None = None) -> dict[str, Any]:
    """Retrieve arguments from commandline."""
    parser = _build_parser()

    # parse arguments
    args = vars(parser.parse_args(argv))

    # check if config file exists
    if config := args.get("config"):
        try:
            args["config"] = _check_file_exists(Path(config))
        except argparse.ArgumentTypeError as exc:
            parser.error(str(exc))

    # a dist naming an existing file is read from that file
    if dist := args.get("dist"):
        path = Path(dist)
        args["dist"] = path if path.is_file() else dist
    return args


def merge_config(args: dict[str, Any], config: ConfigReader) -> dict[str, Any]:
    """Fill flags that were not given from the run configuration.

    :param args: Arguments from ``get_args``.
    :param config: The run configuration, with defaults filled in.
    :return: Arguments with every configurable flag set.
    """
    merged = dict(args)
    for flag, (section, key) in CONFIG_FLAGS.items():
        if merged.get(flag) is None:
            merged[flag] = config.get(section, key)

    # pre-processing of arguments
    merged["log_level"] = getattr(logging, str(merged["log_level"]).upper(), logging.INFO)
    merged["base"] = LogBase(merged["base"])
    merged["format"] = OutputFormat(merged.get("format") or OutputFormat.CSV.value)
    return merged
