"""Generalized Vandermonde determinants and the orientation of the entropy map.

The Jacobian of P -> (H_a1(P), ..., H_am(P), sum(P)) restricted to m+1 letters
factors into a product of scalar prefactors and a generalized Vandermonde
determinant. ``orientation_sign`` evaluates both forms and checks that they agree.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from itertools import combinations, pairwise
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor

from renyirange.errors import ConsistencyError, DomainError, InputError

from .const import DENOMINATOR_RTOL, DETERMINANT_RTOL, DETERMINANT_ZERO_RTOL, NORMALIZATION_SLACK
from .entropy import Order, OrderKind, as_order

if TYPE_CHECKING:
    from collections.abc import Sequence

    import numpy.typing as npt

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class VandermondeInstance:
    """Nodes 0 < x_1 <= ... <= x_l and exponents beta_1 < ... < beta_l."""

    xs: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate nodes and exponents."""
        xs = tuple(float(x) for x in self.xs)
        betas = tuple(float(b) for b in self.betas)
        if not xs or len(xs) != len(betas):
            msg = f"Need equally many nodes and exponents, got {len(xs)} and {len(betas)}."
            raise InputError(msg)
        if xs[0] <= 0.0 or any(lo > hi for lo, hi in pairwise(xs)):
            msg = f"Nodes must be positive and non-decreasing, got {xs}."
            raise InputError(msg)
        if any(lo >= hi for lo, hi in pairwise(betas)):
            msg = f"Exponents must be strictly increasing, got {betas}."
            raise InputError(msg)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "betas", betas)

    @property
    def size(self) -> int:
        """Matrix dimension l."""
        return len(self.xs)

    @property
    def matrix(self) -> npt.NDArray[np.float64]:
        """The matrix (x_i ** beta_j)."""
        return np.power.outer(np.asarray(self.xs), np.asarray(self.betas))


def _lu_determinant(matrix: npt.NDArray[np.float64]) -> float:
    """Determinant by LU with partial pivoting on the row-equilibrated matrix."""
    scales = np.max(np.abs(matrix), axis=1)
    scales[scales == 0.0] = 1.0
    with warnings.catch_warnings():
        # exactly singular input is a legitimate case here
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix / scales[:, None])
    swaps = int(np.count_nonzero(piv != np.arange(piv.size)))
    det = float(np.prod(np.diag(lu))) * float(np.prod(scales))
    return -det if swaps % 2 else det


def _zero_tolerance(matrix: npt.NDArray[np.float64]) -> float:
    """Scale-relative tolerance 1e-12 * (max entry)^l * l! for determinant zero tests."""
    size = matrix.shape[0]
    return DETERMINANT_ZERO_RTOL * float(np.max(np.abs(matrix))) ** size * math.factorial(size)


def determinant_scale(v: VandermondeInstance) -> float:
    """Tolerance below which a generalized Vandermonde determinant counts as zero."""
    return _zero_tolerance(v.matrix)


def gen_vandermonde_det(v: VandermondeInstance) -> float:
    """Generalized Vandermonde determinant det(x_i ** beta_j).

    Non-negative for valid instances, zero exactly when two nodes coincide.
    """
    return _lu_determinant(v.matrix)


def _permutation_sign(values: Sequence[float]) -> int:
    """Sign of the permutation that sorts distinct values ascending."""
    inversions = sum(1 for i, j in combinations(range(len(values)), 2) if values[i] > values[j])
    return -1 if inversions % 2 else 1


def _check_orders(orders: Sequence[Order | float]) -> list[float]:
    """Validate orders in (0, inf) without 1, strictly increasing."""
    parsed = [as_order(a) for a in orders]
    if any(a.kind is not OrderKind.GENERIC for a in parsed):
        msg = f"Orientation needs finite orders in (0, inf) other than 1, got {[str(a) for a in parsed]}."
        raise DomainError(msg)
    if any(lo >= hi for lo, hi in pairwise(parsed)):
        msg = "Orders must be strictly increasing."
        raise DomainError(msg)
    return [a.value for a in parsed]


def _power_sums(
    probs: npt.NDArray[np.float64],
    alphas: Sequence[float],
    denominators: Sequence[float] | None,
) -> npt.NDArray[np.float64]:
    """Power sums sum_j p_j ** alpha_i, recomputed when the given ones are inconsistent."""
    computed = np.array([np.sum(probs**a) for a in alphas])
    if denominators is None:
        return computed
    given = np.asarray(denominators, dtype=np.float64)
    if given.shape != computed.shape or np.any(given <= 0.0):
        msg = f"Need {len(alphas)} positive power sums, got {denominators}."
        raise InputError(msg)
    # the check is only possible when probs is the whole distribution
    if abs(math.fsum(probs) - 1.0) <= NORMALIZATION_SLACK and not np.allclose(
        given, computed, rtol=DENOMINATOR_RTOL, atol=0.0
    ):
        _LOGGER.warning("Power sums %s inconsistent with probabilities, using %s", given, computed)
        return computed
    return given


def jacobian_block(
    probs: Sequence[float],
    orders: Sequence[Order | float],
    denominators: Sequence[float] | None = None,
) -> npt.NDArray[np.float64]:
    """Jacobian of (H_a1, ..., H_am, sum) with respect to m+1 point probabilities.

    Row i holds (a_i / (1 - a_i)) * p_j ** (a_i - 1) / sum_k p_k ** a_i, the
    last row is all ones.
    """
    p = np.asarray(probs, dtype=np.float64)
    alphas = _check_orders(orders)
    sums = _power_sums(p, alphas, denominators)
    rows = [(a / (1.0 - a)) * p ** (a - 1.0) / d for a, d in zip(alphas, sums, strict=True)]
    return np.vstack([*rows, np.ones_like(p)])


def orientation_determinants(
    probs: Sequence[float],
    orders: Sequence[Order | float],
    denominators: Sequence[float] | None = None,
) -> tuple[float, float]:
    """Jacobian-block determinant computed directly and through its factorization.

    :param probs: m+1 positive, non-decreasing point probabilities.
    :param orders: m strictly increasing orders in (0, inf) other than 1.
    :param denominators: Power sums of the full distribution. Computed from
        ``probs`` when omitted.
    :return: (direct, factored) determinant values.
    """
    p = np.asarray(probs, dtype=np.float64)
    alphas = _check_orders(orders)
    if p.size != len(alphas) + 1:
        msg = f"Need {len(alphas) + 1} probabilities for {len(alphas)} orders, got {p.size}."
        raise InputError(msg)
    if np.any(p <= 0.0) or np.any(np.diff(p) < 0.0):
        msg = "Probabilities must be positive and sorted ascending."
        raise InputError(msg)

    sums = _power_sums(p, alphas, denominators)
    direct = _lu_determinant(jacobian_block(p, alphas, sums))

    prefactor = math.prod(a / (1.0 - a) for a in alphas) / math.prod(sums)
    exponents = [a - 1.0 for a in alphas] + [0.0]
    instance = VandermondeInstance(tuple(p), tuple(sorted(exponents)))
    factored = prefactor * _permutation_sign(exponents) * gen_vandermonde_det(instance)
    return direct, factored


def orientation_sign(
    probs: Sequence[float],
    orders: Sequence[Order | float],
    denominators: Sequence[float] | None = None,
) -> int:
    """Sign of the Jacobian-block determinant, cross-checked against its factorization.

    :return: -1, 0 or +1.
    """
    direct, factored = orientation_determinants(probs, orders, denominators)
    block = jacobian_block(probs, orders, denominators)
    if abs(direct) <= _zero_tolerance(block):
        return 0
    if np.sign(direct) != np.sign(factored):
        msg = f"Direct determinant {direct} and factored form {factored} disagree in sign."
        raise ConsistencyError(msg)
    if not math.isclose(direct, factored, rel_tol=DETERMINANT_RTOL):
        _LOGGER.warning("Direct determinant %.6e and factored form %.6e differ beyond %g", direct, factored, DETERMINANT_RTOL)
    _LOGGER.debug("Orientation determinant %.6e (factored %.6e)", direct, factored)
    return int(np.sign(direct))
