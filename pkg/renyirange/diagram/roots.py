"""Vectorized bisection for monotone functions of one parameter in [lo, hi]."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from renyirange.errors import ConsistencyError

from .const import BISECTION_ITERATIONS, MONOTONE_SLACK

if TYPE_CHECKING:
    from collections.abc import Callable

    import numpy.typing as npt

    ArrayFunc = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]


def bisect_monotone(
    func: ArrayFunc,
    target: npt.ArrayLike,
    lo: npt.ArrayLike = 0.0,
    hi: npt.ArrayLike = 1.0,
    *,
    increasing: bool = True,
    iterations: int = BISECTION_ITERATIONS,
) -> npt.NDArray[np.float64]:
    """Solve func(x) = target elementwise for a monotone func on [lo, hi].

    The bracket values are tracked during the search; a midpoint value falling
    outside them by more than the monotonicity slack raises ConsistencyError.
    Targets outside [func(lo), func(hi)] converge to the nearer end.

    :param func: Elementwise function of an array of parameters.
    :param target: Target values.
    :param lo: Lower ends of the parameter intervals.
    :param hi: Upper ends of the parameter intervals.
    :param increasing: Direction of monotonicity.
    :param iterations: Number of halvings.
    :return: Parameters, shape of the broadcast inputs.
    """
    sign = 1.0 if increasing else -1.0
    goal, x_lo, x_hi = np.broadcast_arrays(
        sign * np.asarray(target, dtype=np.float64),
        np.asarray(lo, dtype=np.float64),
        np.asarray(hi, dtype=np.float64),
    )
    x_lo, x_hi = x_lo.copy(), x_hi.copy()
    f_lo = sign * func(x_lo)
    f_hi = sign * func(x_hi)

    for _ in range(iterations):
        mid = 0.5 * (x_lo + x_hi)
        f_mid = sign * func(mid)
        if np.any((f_mid < f_lo - MONOTONE_SLACK) | (f_mid > f_hi + MONOTONE_SLACK)):
            msg = "Function is not monotone on the bisection bracket."
            raise ConsistencyError(msg)
        below = f_mid < goal
        x_lo = np.where(below, mid, x_lo)
        f_lo = np.where(below, f_mid, f_lo)
        x_hi = np.where(below, x_hi, mid)
        f_hi = np.where(below, f_hi, f_mid)

    return np.where(np.abs(f_lo - goal) <= np.abs(f_hi - goal), x_lo, x_hi)


def level_crossing(
    func: ArrayFunc,
    level: npt.ArrayLike,
    shape: tuple[int, ...],
    *,
    increasing: bool,
) -> npt.NDArray[np.float64]:
    """Parameter in [0, 1] where a monotone func reaches ``level``, clipped to the ends.

    :param func: Elementwise function of parameters in [0, 1].
    :param level: Level to reach.
    :param shape: Shape of the parameter array.
    :param increasing: Direction of monotonicity.
    :return: Parameters in [0, 1].
    """
    start = func(np.zeros(shape))
    end = func(np.ones(shape))
    low, high = (start, end) if increasing else (end, start)
    goal = np.clip(np.asarray(level, dtype=np.float64), low, high)
    return bisect_monotone(func, goal, 0.0, 1.0, increasing=increasing)
