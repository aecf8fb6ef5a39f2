"""Rényi entropies of finite distributions and of mixtures of uniform distributions.

All entropies are computed in nats. Distributions that are mixtures of uniform
distributions are evaluated from their point-probability levels (distinct values
and multiplicities) so that alphabets with millions of letters cost O(1).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import pairwise
from typing import TYPE_CHECKING

import numpy as np
from scipy.special import entr, logsumexp

from renyirange.errors import DomainError, InputError, OutOfRangeError

from .const import (
    INFINITY_TOKENS,
    NORMALIZATION_SLACK,
    NORMALIZATION_TOLERANCE,
    SHANNON_SWITCH,
)

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    import numpy.typing as npt

_LOGGER = logging.getLogger(__name__)


class OrderKind(str, Enum):
    """The four cases of the Rényi entropy definition."""

    ZERO = "zero"
    ONE = "one"
    INFINITY = "infinity"
    GENERIC = "generic"


@dataclass(frozen=True, order=True)
class Order:
    """Order alpha of a Rényi entropy, an extended real in [0, inf].

    :param value: The order. ``math.inf`` selects the min-entropy.
    """

    value: float
    kind: OrderKind = field(init=False, compare=False)

    def __post_init__(self) -> None:
        """Validate the order and tag its kind."""
        value = float(self.value)
        if math.isnan(value) or value < 0.0:
            msg = f"Rényi order must be in [0, inf], got {self.value}."
            raise DomainError(msg)
        if value == 0.0:
            kind = OrderKind.ZERO
        elif value == 1.0:
            kind = OrderKind.ONE
        elif math.isinf(value):
            kind = OrderKind.INFINITY
        else:
            kind = OrderKind.GENERIC
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def parse(cls, token: str) -> Order:
        """Parse a command line token: a decimal literal or ``inf``.

        :param token: The token to parse.
        :return: The parsed order.
        """
        token = token.strip().lower()
        if token in INFINITY_TOKENS:
            return cls(math.inf)
        try:
            value = float(token)
        except ValueError as exc:
            msg = f"Cannot parse Rényi order from '{token}'."
            raise InputError(msg) from exc
        return cls(value)

    @property
    def is_shannon(self) -> bool:
        """Whether the Shannon formula is used to evaluate this order."""
        if self.kind is OrderKind.ONE:
            return True
        return self.kind is OrderKind.GENERIC and abs(self.value - 1.0) < SHANNON_SWITCH

    def __str__(self) -> str:
        """Return the command line representation of the order."""
        return "inf" if self.kind is OrderKind.INFINITY else f"{self.value:g}"


def as_order(a: Order | float) -> Order:
    """Return ``a`` as an Order."""
    return a if isinstance(a, Order) else Order(a)


class LogBase(str, Enum):
    """Logarithm base used when presenting entropies."""

    E = "e"
    TWO = "2"
    TEN = "10"

    @property
    def nats_per_unit(self) -> float:
        """Number of nats in one unit of this base."""
        return _NATS_PER_UNIT[self]


_NATS_PER_UNIT = {LogBase.E: 1.0, LogBase.TWO: math.log(2.0), LogBase.TEN: math.log(10.0)}


@dataclass(frozen=True)
class EntropyValue:
    """An entropy value together with the logarithm base it is expressed in."""

    value: float
    base: LogBase = LogBase.E

    def __post_init__(self) -> None:
        """Validate the value."""
        value = float(self.value)
        if not value >= 0.0:
            msg = f"Entropy value must be non-negative, got {self.value}."
            raise OutOfRangeError(msg, interval=(0.0, math.inf))
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "base", LogBase(self.base))

    @property
    def nats(self) -> float:
        """The value in nats."""
        return self.value * self.base.nats_per_unit

    def to(self, base: LogBase | str) -> EntropyValue:
        """Express the value in another base."""
        base = LogBase(base)
        return EntropyValue(self.nats / base.nats_per_unit, base)

    def __float__(self) -> float:
        """Return the numeric value in its own base."""
        return self.value


def as_nats(h: EntropyValue | float) -> float:
    """Return an entropy given as EntropyValue or plain float (nats) in nats."""
    return h.nats if isinstance(h, EntropyValue) else float(h)


@dataclass(frozen=True, eq=False)
class ProbVector:
    """A finite discrete probability distribution.

    Inputs whose sum deviates from one by at most 1e-9 are rescaled, larger
    deviations are rejected. The deviation before rescaling is kept in ``deviation``.
    """

    probs: npt.NDArray[np.float64]
    deviation: float = field(init=False, default=0.0)

    def __post_init__(self) -> None:
        """Validate and normalize the probabilities."""
        probs = np.array(self.probs, dtype=np.float64).ravel()
        if probs.size == 0:
            msg = "A probability vector needs at least one entry."
            raise InputError(msg)
        if not np.all(np.isfinite(probs)):
            msg = "Probabilities must be finite numbers."
            raise InputError(msg)
        if np.any(probs < 0.0):
            msg = f"Probabilities must be non-negative, got {probs.min()}."
            raise InputError(msg)

        deviation = math.fsum(probs) - 1.0
        if abs(deviation) > NORMALIZATION_SLACK:
            msg = f"Probabilities sum to {1.0 + deviation}, which is not 1 within {NORMALIZATION_SLACK}."
            raise InputError(msg)
        if abs(deviation) > NORMALIZATION_TOLERANCE:
            _LOGGER.warning("Rescaling probability vector with sum deviation %.3e", deviation)
            probs /= 1.0 + deviation

        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "deviation", deviation)

    @property
    def n(self) -> int:
        """Alphabet size."""
        return int(self.probs.size)

    def __len__(self) -> int:
        """Return the alphabet size."""
        return self.n

    def isclose(self, other: ProbVector, atol: float = 1e-12) -> bool:
        """Compare entries up to an absolute tolerance."""
        return self.n == other.n and bool(np.allclose(self.probs, other.probs, rtol=0.0, atol=atol))


@dataclass(frozen=True)
class UniformMixture:
    """A point of the simplex spanned by uniform distributions U_k.

    :param components: (support, weight) pairs with strictly decreasing supports.
    """

    components: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        """Validate supports and weights."""
        components = tuple((int(k), float(w)) for k, w in self.components)
        if not components:
            msg = "A uniform mixture needs at least one component."
            raise InputError(msg)
        supports = [k for k, _ in components]
        if supports[-1] < 1:
            msg = f"Supports must be positive integers, got {supports}."
            raise DomainError(msg)
        if any(hi <= lo for hi, lo in pairwise(supports)):
            msg = f"Supports must be strictly decreasing, got {supports}."
            raise InputError(msg)
        weights = [w for _, w in components]
        if any(not -NORMALIZATION_TOLERANCE <= w <= 1.0 + NORMALIZATION_TOLERANCE for w in weights):
            msg = f"Mixture weights must lie in [0, 1], got {weights}."
            raise InputError(msg)
        if abs(math.fsum(weights) - 1.0) > NORMALIZATION_TOLERANCE:
            msg = f"Mixture weights must sum to 1, got {math.fsum(weights)}."
            raise InputError(msg)
        components = tuple((k, min(max(w, 0.0), 1.0)) for k, w in components)
        object.__setattr__(self, "components", components)

    @classmethod
    def of(cls, *pairs: tuple[int, float]) -> UniformMixture:
        """Build a mixture from (support, weight) pairs."""
        return cls(tuple(pairs))

    @property
    def supports(self) -> tuple[int, ...]:
        """Support sizes, descending."""
        return tuple(k for k, _ in self.components)

    @property
    def weights(self) -> tuple[float, ...]:
        """Weights matching ``supports``."""
        return tuple(w for _, w in self.components)

    def pruned(self) -> UniformMixture:
        """Drop components with zero weight."""
        kept = tuple((k, w) for k, w in self.components if w > 0.0)
        return UniformMixture(kept) if kept else self

    def levels(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Distinct point probabilities and their multiplicities."""
        return mixture_levels(self.supports, self.weights)


def mixture_levels(
    supports: Sequence[float | npt.NDArray[np.float64]],
    weights: Sequence[float | npt.NDArray[np.float64]],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """Point-probability levels of right-aligned uniform mixtures.

    Supports must be sorted descending. Level i holds the probability
    sum_{j<=i} w_j / k_j, shared by k_i - k_{i+1} letters. Array arguments
    broadcast, giving one mixture per element.

    :param supports: Support sizes k_1 > k_2 > ... (scalars or arrays).
    :param weights: Weights w_1, w_2, ... (scalars or arrays).
    :return: (values, counts), both of shape (levels, *broadcast shape).
    """
    values: list[npt.NDArray[np.float64]] = []
    counts: list[npt.NDArray[np.float64]] = []
    level = np.asarray(0.0)
    following = [*supports[1:], 0.0]
    for k, w, k_next in zip(supports, weights, following, strict=True):
        level = level + np.asarray(w, dtype=np.float64) / np.asarray(k, dtype=np.float64)
        values.append(level)
        counts.append(np.asarray(k, dtype=np.float64) - np.asarray(k_next, dtype=np.float64))
    arrays = np.broadcast_arrays(*values, *counts)
    return np.stack(arrays[: len(values)]), np.stack(arrays[len(values) :])


def level_entropy(
    values: npt.ArrayLike, counts: npt.ArrayLike, a: Order | float
) -> npt.NDArray[np.float64]:
    """Rényi entropy of distributions given by point-probability levels.

    Axis 0 runs over levels, remaining axes over distributions. Levels are
    sorted ascending before summation so the result does not depend on the
    order in which they are given.

    :param values: Point probabilities.
    :param counts: Multiplicity of each point probability.
    :param a: The order.
    :return: Entropies in nats, shape ``values.shape[1:]``.
    """
    order = as_order(a)
    vals, cnts = np.broadcast_arrays(
        np.asarray(values, dtype=np.float64), np.asarray(counts, dtype=np.float64)
    )
    index = np.argsort(vals, axis=0, kind="stable")
    vals = np.take_along_axis(vals, index, axis=0)
    cnts = np.take_along_axis(cnts, index, axis=0)
    mass = np.where(vals > 0.0, cnts, 0.0)

    if order.kind is OrderKind.ZERO:
        result = np.log(np.sum(mass, axis=0))
    elif order.kind is OrderKind.INFINITY:
        result = -np.log(np.max(np.where(mass > 0.0, vals, 0.0), axis=0))
    elif order.is_shannon:
        result = np.sum(mass * entr(vals), axis=0)
    else:
        with np.errstate(divide="ignore"):
            terms = np.where(mass > 0.0, order.value * np.log(vals), -np.inf)
        result = logsumexp(terms, axis=0, b=mass) / (1.0 - order.value)
    return np.maximum(np.asarray(result, dtype=np.float64), 0.0)


def renyi_entropy(p: ProbVector, a: Order | float) -> EntropyValue:
    """Rényi entropy of order ``a`` in nats.

    Orders 0, 1 and inf use the Hartley, Shannon and min-entropy formulas;
    generic orders are summed in the log domain.
    """
    return EntropyValue(float(level_entropy(p.probs, 1.0, a)))


def renyi_entropy_rows(matrix: npt.ArrayLike, a: Order | float) -> npt.NDArray[np.float64]:
    """Rényi entropies of the rows of a (samples, n) matrix."""
    return level_entropy(np.asarray(matrix, dtype=np.float64).T, 1.0, a)


def uniform(k: int) -> ProbVector:
    """Uniform distribution U_k on k letters."""
    if int(k) != k or k < 1:
        msg = f"Uniform distribution needs k >= 1, got {k}."
        raise DomainError(msg)
    return ProbVector(np.full(int(k), 1.0 / k))


def realize_mixture(m: UniformMixture) -> ProbVector:
    """Materialize a mixture on max(k_i) letters, each U_k right-aligned.

    The resulting entries are non-decreasing.
    """
    n = m.supports[0]
    probs = np.zeros(n)
    for k, w in m.components:
        probs[n - k :] += w / k
    return ProbVector(probs)


def product_distribution(p: ProbVector, q: ProbVector) -> ProbVector:
    """Joint distribution of two independent variables, flattened."""
    return ProbVector(np.outer(p.probs, q.probs).ravel())


def entropies(p: ProbVector, orders: Iterable[Order | float]) -> list[EntropyValue]:
    """Evaluate several orders on one distribution."""
    return [renyi_entropy(p, a) for a in orders]
