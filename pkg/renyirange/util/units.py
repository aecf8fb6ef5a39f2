"""Logarithm base conversion for presenting entropies."""
from __future__ import annotations

import math
from typing import TypeVar

import numpy as np
import polars as pl

from renyirange.core.entropy import LogBase
from renyirange.errors import InputError

T = TypeVar("T", float, np.ndarray, pl.Series, pl.Expr)  # type: ignore[type-arg]

# multiply by the factor to go from the outer base to the inner one
CONV_DICT: dict[LogBase, dict[LogBase, float]] = {
    LogBase.E: {LogBase.E: 1.0, LogBase.TWO: 1.0 / math.log(2.0), LogBase.TEN: 1.0 / math.log(10.0)},
    LogBase.TWO: {LogBase.E: math.log(2.0), LogBase.TWO: 1.0, LogBase.TEN: math.log10(2.0)},
    LogBase.TEN: {LogBase.E: math.log(10.0), LogBase.TWO: math.log2(10.0), LogBase.TEN: 1.0},
}


def _as_base(base: LogBase | str) -> LogBase:
    try:
        return LogBase(base)
    except ValueError as exc:
        msg = f"Logarithm base [{base}] not supported, use one of {[b.value for b in LogBase]}."
        raise InputError(msg) from exc


def base_factor(from_base: LogBase | str, to_base: LogBase | str) -> float:
    """Factor that converts entropies from one logarithm base to another."""
    return CONV_DICT[_as_base(from_base)][_as_base(to_base)]


def convert_base(data: T, from_base: LogBase | str, to_base: LogBase | str) -> T:
    """Convert entropy values between logarithm bases.

    :param data: Entropy values.
    :param from_base: The base the data is expressed in.
    :param to_base: The base to convert to.
    :return: Data in the new base, of the same type.
    """
    if not isinstance(data, float | int | np.ndarray | pl.Series | pl.Expr):
        msg = "Data must be a float, a numpy array, a pl.Series or a pl.Expr."
        raise TypeError(msg)
    factor = base_factor(from_base, to_base)
    if factor == 1.0:
        return data
    return data * factor  # type: ignore[return-value]
