"""Joint range of two Rényi entropies of orders 0 < a1 < a2.

For fixed H_a1 the maximum of H_a2 lies on a mixture of U_{k+1} and U_k with
log k <= H_a1 < log(k+1), the minimum on a mixture of U_n and U_1. Without an
alphabet cap the minimum becomes an infimum that is linear in H_a1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
import polars as pl

from renyirange.core.entropy import (
    EntropyValue,
    Order,
    OrderKind,
    UniformMixture,
    as_nats,
    as_order,
    level_entropy,
    mixture_levels,
    realize_mixture,
)
from renyirange.errors import DomainError, OutOfRangeError

from .const import MAX_ENTROPY, RANGE_TOLERANCE, SNAP_TOLERANCE
from .roots import level_crossing

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

    from renyirange.core.entropy import ProbVector

_LOGGER = logging.getLogger(__name__)


def check_orders(*orders: Order | float) -> tuple[Order, ...]:
    """Validate positive, strictly increasing orders."""
    parsed = tuple(as_order(a) for a in orders)
    if parsed[0].kind is OrderKind.ZERO:
        msg = "Bound queries need positive orders."
        raise DomainError(msg)
    for lo, hi in zip(parsed, parsed[1:], strict=False):
        if not lo < hi:
            msg = f"Orders must be strictly increasing, got {lo} and {hi}."
            raise DomainError(msg)
    return parsed


def check_alphabet(n: int | None, minimum: int = 1) -> int | None:
    """Validate an optional alphabet size."""
    if n is None:
        return None
    if int(n) != n or n < minimum:
        msg = f"Alphabet size must be an integer >= {minimum}, got {n}."
        raise DomainError(msg)
    return int(n)


def entropy_interval(n: int | None) -> tuple[float, float]:
    """Attainable entropy interval on n letters (unbounded when n is None)."""
    return (0.0, MAX_ENTROPY if n is None else math.log(n))


def check_entropy(h: EntropyValue | float, n: int | None) -> float:
    """Validate an entropy against [0, log n] and clamp rounding noise.

    :return: The entropy in nats.
    """
    value = as_nats(h)
    low, high = entropy_interval(n)
    if not low - RANGE_TOLERANCE <= value <= high + RANGE_TOLERANCE:
        msg = f"Entropy {value} outside the attainable interval [{low}, {high}]."
        raise OutOfRangeError(msg, interval=(low, high))
    return min(max(value, low), high)


def snap_to_uniform(h: float) -> int | None:
    """Support k when h is log k up to rounding, else None."""
    k = max(round(math.exp(h)), 1)
    return k if abs(h - math.log(k)) <= SNAP_TOLERANCE else None


@dataclass(frozen=True)
class BoundQuery2:
    """Bound H_a2 given H_a1 = h1, optionally on at most n letters."""

    alpha1: Order
    alpha2: Order
    h1: EntropyValue
    n: int | None = None
    h: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Validate the query."""
        alpha1, alpha2 = check_orders(self.alpha1, self.alpha2)
        h1 = self.h1 if isinstance(self.h1, EntropyValue) else EntropyValue(self.h1)
        n = check_alphabet(self.n)
        object.__setattr__(self, "alpha1", alpha1)
        object.__setattr__(self, "alpha2", alpha2)
        object.__setattr__(self, "h1", h1)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", check_entropy(h1, n))


@dataclass(frozen=True)
class BoundResult:
    """A tight bound with the mixture attaining it.

    :param bound: The bound value.
    :param witness: Mixture attaining the bound, absent for infima.
    :param attained: False when the bound is an infimum only.
    """

    bound: EntropyValue
    witness: UniformMixture | None = None
    attained: bool = True


@dataclass(frozen=True)
class DiagramCurve:
    """Closed boundary of the (H_a1, H_a2) range on n letters."""

    vertices: tuple[tuple[float, float], ...]
    segment_labels: tuple[str, ...]
    closed: bool = True

    def to_frame(self) -> pl.DataFrame:
        """Vertices as a frame with columns h1, h2, segment_label."""
        h1, h2 = zip(*self.vertices, strict=True) if self.vertices else ((), ())
        return pl.DataFrame(
            {"h1": list(h1), "h2": list(h2), "segment_label": list(self.segment_labels)},
            schema={"h1": pl.Float64, "h2": pl.Float64, "segment_label": pl.Utf8},
        )


def segment_label(*supports: int) -> str:
    """Label of the simplex spanned by U_k for the given supports."""
    return "delta_" + "_".join(str(k) for k in supports)


def segment_entropy(
    k_hi: npt.ArrayLike, k_lo: npt.ArrayLike, s: npt.ArrayLike, a: Order | float
) -> npt.NDArray[np.float64]:
    """H_a of s * U_{k_hi} + (1 - s) * U_{k_lo}, elementwise."""
    values, counts = mixture_levels(
        (np.asarray(k_hi, dtype=np.float64), np.asarray(k_lo, dtype=np.float64)),
        (np.asarray(s, dtype=np.float64), 1.0 - np.asarray(s, dtype=np.float64)),
    )
    return level_entropy(values, counts, a)


def segment_parameter(
    k_hi: npt.ArrayLike, k_lo: npt.ArrayLike, a: Order | float, h: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Weight s on U_{k_hi} with H_a of the segment point equal to h, elementwise.

    Targets outside the segment's range give the nearer endpoint.
    """
    hi, lo, target = np.broadcast_arrays(
        np.asarray(k_hi, dtype=np.float64),
        np.asarray(k_lo, dtype=np.float64),
        np.asarray(h, dtype=np.float64),
    )
    return level_crossing(
        lambda s: segment_entropy(hi, lo, s, a), target, target.shape, increasing=True
    )


def _check_segment(k_hi: int, k_lo: int) -> None:
    if k_lo < 1 or k_hi <= k_lo:
        msg = f"Segment needs k_hi > k_lo >= 1, got ({k_hi}, {k_lo})."
        raise DomainError(msg)


def segment_point(k_hi: int, k_lo: int, s: float) -> ProbVector:
    """The distribution s * U_{k_hi} + (1 - s) * U_{k_lo}."""
    _check_segment(k_hi, k_lo)
    if not 0.0 <= s <= 1.0:
        msg = f"Segment parameter must lie in [0, 1], got {s}."
        raise DomainError(msg)
    return realize_mixture(UniformMixture.of((k_hi, s), (k_lo, 1.0 - s)))


def invert_on_segment(k_hi: int, k_lo: int, a: Order | float, h: EntropyValue | float) -> float:
    """Weight s on U_{k_hi} such that H_a(segment_point(k_hi, k_lo, s)) = h.

    :raises OutOfRangeError: If h is outside [log k_lo, log k_hi].
    :raises ConsistencyError: If H_a is found not to be monotone along the segment.
    """
    _check_segment(k_hi, k_lo)
    order = as_order(a)
    if order.kind is OrderKind.ZERO:
        msg = "H_0 is constant along a segment and cannot be inverted."
        raise DomainError(msg)
    value = as_nats(h)
    low, high = math.log(k_lo), math.log(k_hi)
    if not low - RANGE_TOLERANCE <= value <= high + RANGE_TOLERANCE:
        msg = f"Entropy {value} outside the segment range [{low}, {high}]."
        raise OutOfRangeError(msg, interval=(low, high))
    if value <= low:
        return 0.0
    if value >= high:
        return 1.0
    return float(segment_parameter(k_hi, k_lo, order, value))


def support_bucket(h: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Largest k with log k <= h, elementwise."""
    value = np.asarray(h, dtype=np.float64)
    k = np.maximum(np.floor(np.exp(value)), 1.0)
    k = np.where(np.log(k + 1.0) <= value, k + 1.0, k)
    return np.maximum(np.where(np.log(k) > value, k - 1.0, k), 1.0)


def upper_bound_batch(
    alpha1: Order | float, alpha2: Order | float, h1: npt.ArrayLike
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Maximum of H_a2 given H_a1 = h1, elementwise.

    :return: (bound, k, s) where the maximizer is s * U_{k+1} + (1 - s) * U_k.
    """
    h = np.maximum(np.asarray(h1, dtype=np.float64), 0.0)
    k = support_bucket(h)
    s = np.where(h <= np.log(k), 0.0, segment_parameter(k + 1.0, k, alpha1, h))
    return segment_entropy(k + 1.0, k, s, alpha2), k, s


def lower_bound_fixed_n_batch(
    alpha1: Order | float, alpha2: Order | float, h1: npt.ArrayLike, n: int
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Minimum of H_a2 given H_a1 = h1 on n letters, elementwise.

    :return: (bound, s) where the minimizer is s * U_n + (1 - s) * U_1.
    """
    h = np.clip(np.asarray(h1, dtype=np.float64), 0.0, math.log(n))
    if n == 1:
        return np.zeros_like(h), np.zeros_like(h)
    s = segment_parameter(n, 1, alpha1, h)
    return segment_entropy(n, 1, s, alpha2), s


def unbounded_slope(alpha1: Order | float, alpha2: Order | float) -> float:
    """Slope of the infimum of H_a2 over H_a1 when the alphabet is unbounded."""
    a1, a2 = as_order(alpha1), as_order(alpha2)
    if a1.value <= 1.0:
        return 0.0
    outer = 1.0 if a2.kind is OrderKind.INFINITY else a2.value / (a2.value - 1.0)
    return outer * (a1.value - 1.0) / a1.value


def lower_bound_unbounded_batch(
    alpha1: Order | float, alpha2: Order | float, h1: npt.ArrayLike
) -> npt.NDArray[np.float64]:
    """Infimum of H_a2 given H_a1 = h1 over all finite alphabets, elementwise."""
    return unbounded_slope(alpha1, alpha2) * np.maximum(np.asarray(h1, dtype=np.float64), 0.0)


def upper_bound(q: BoundQuery2) -> BoundResult:
    """Tight upper bound on H_a2, attained on a U_{k+1}/U_k mixture.

    The bound does not depend on n; n only restricts h1 to [0, log n].
    """
    k_diag = snap_to_uniform(q.h)
    if k_diag is not None:
        return BoundResult(EntropyValue(math.log(k_diag)), UniformMixture.of((k_diag, 1.0)))

    bound, k, s = upper_bound_batch(q.alpha1, q.alpha2, np.array([q.h]))
    support = int(k[0])
    _LOGGER.debug("Upper bound for h1=%.12g on segment (%d, %d) at s=%.17g", q.h, support + 1, support, s[0])
    witness = UniformMixture.of((support + 1, float(s[0])), (support, 1.0 - float(s[0])))
    return BoundResult(EntropyValue(float(bound[0])), witness.pruned())


def lower_bound_fixed_n(q: BoundQuery2) -> BoundResult:
    """Tight lower bound on H_a2 on n letters, attained on a U_n/U_1 mixture."""
    if q.n is None:
        msg = "The fixed-alphabet lower bound needs n."
        raise DomainError(msg)
    if q.n == 1 or abs(q.h - math.log(q.n)) <= SNAP_TOLERANCE:
        return BoundResult(EntropyValue(math.log(q.n)), UniformMixture.of((q.n, 1.0)))

    bound, s = lower_bound_fixed_n_batch(q.alpha1, q.alpha2, np.array([q.h]), q.n)
    witness = UniformMixture.of((q.n, float(s[0])), (1, 1.0 - float(s[0])))
    return BoundResult(EntropyValue(float(bound[0])), witness.pruned())


def lower_bound_unbounded(q: BoundQuery2) -> BoundResult:
    """Infimum of H_a2 over all finite alphabets; never attained for h1 > 0."""
    bound = lower_bound_unbounded_batch(q.alpha1, q.alpha2, np.array([q.h]))
    return BoundResult(EntropyValue(float(bound[0])), None, attained=False)


def lower_bound(q: BoundQuery2) -> BoundResult:
    """Fixed-alphabet lower bound when n is given, the unbounded infimum otherwise."""
    return lower_bound_fixed_n(q) if q.n is not None else lower_bound_unbounded(q)


def boundary_curve(
    alpha1: Order | float, alpha2: Order | float, n: int, samples_per_segment: int
) -> DiagramCurve:
    """Closed boundary of the range on n letters.

    Runs from U_n down the segments (k+1, k) to U_1 and back to U_n along the
    U_1/U_n segment. Shared endpoints appear once and U_n is not repeated at
    the end. Sampling is uniform in the mixture weight.
    """
    if n < 2 or samples_per_segment < 2:
        msg = f"Boundary curve needs n >= 2 and at least 2 samples per segment, got {n} and {samples_per_segment}."
        raise DomainError(msg)
    a1, a2 = as_order(alpha1), as_order(alpha2)
    descending = np.linspace(1.0, 0.0, samples_per_segment)

    h1_parts: list[npt.NDArray[np.float64]] = []
    h2_parts: list[npt.NDArray[np.float64]] = []
    labels: list[str] = []

    def add(k_hi: int, k_lo: int, s: npt.NDArray[np.float64]) -> None:
        h1_parts.append(segment_entropy(k_hi, k_lo, s, a1))
        h2_parts.append(segment_entropy(k_hi, k_lo, s, a2))
        labels.extend([segment_label(k_hi, k_lo)] * s.size)

    for k in range(n - 1, 0, -1):
        add(k + 1, k, descending if k == n - 1 else descending[1:])
    add(n, 1, descending[::-1][1:-1])

    h1 = np.concatenate(h1_parts)
    h2 = np.concatenate(h2_parts)
    vertices = tuple(zip(h1.tolist(), h2.tolist(), strict=True))
    return DiagramCurve(vertices, tuple(labels))


def tail_witness(n: int, alpha: Order | float) -> UniformMixture:
    """Mixture t * U_n + (1 - t) * U_1 with t = n ** (1 - 1/alpha), for 0 < alpha < 1.

    As n grows, H_alpha of this mixture tends to log 2 / (1 - alpha) while the
    entropy of every smaller order diverges, so H_alpha is not bounded away
    from a constant by any fixed value of a smaller-order entropy.
    """
    order = as_order(alpha)
    if not 0.0 < order.value < 1.0:
        msg = f"The tail construction needs an order in (0, 1), got {order}."
        raise DomainError(msg)
    if n < 2:
        msg = f"The tail construction needs n >= 2, got {n}."
        raise DomainError(msg)
    t = float(n) ** (1.0 - 1.0 / order.value)
    return UniformMixture.of((n, t), (1, 1.0 - t))


def lower_bound_approach(
    alpha1: Order | float, alpha2: Order | float, h1: EntropyValue | float, ns: Sequence[int]
) -> npt.NDArray[np.float64]:
    """Fixed-alphabet lower bounds at h1 along a sequence of alphabet sizes.

    The values decrease toward the unbounded infimum as n grows.
    """
    check_orders(alpha1, alpha2)
    sizes = np.asarray(ns, dtype=np.float64)
    h = as_nats(h1)
    if np.any(np.log(sizes) < h):
        msg = f"Every alphabet size must allow entropy {h}."
        raise OutOfRangeError(msg, interval=(0.0, float(np.log(sizes.min()))))
    s = segment_parameter(sizes, 1.0, alpha1, np.full(sizes.shape, h))
    return segment_entropy(sizes, 1.0, s, alpha2)
