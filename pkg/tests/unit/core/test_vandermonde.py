"""Test the generalized Vandermonde determinant and the orientation check."""
from __future__ import annotations

import logging
import math
import typing

import numpy as np
import pytest

from renyirange.core.vandermonde import (
    VandermondeInstance,
    determinant_scale,
    gen_vandermonde_det,
    jacobian_block,
    orientation_determinants,
    orientation_sign,
)
from renyirange.errors import DomainError, InputError

ORDER_SETS = [(0.5, 2.0), (0.3, 0.7), (1.5, 4.0), (0.5, 2.0, 3.0), (0.2, 0.6, 1.5, 2.5)]


def _random_instance(rng: np.random.Generator, size: int) -> VandermondeInstance:
    """Nodes and exponents with gaps of at least 0.2."""
    xs = 0.2 + np.cumsum(0.2 + rng.uniform(0.0, 0.5, size))
    betas = -1.0 + np.cumsum(0.2 + rng.uniform(0.0, 1.0, size))
    return VandermondeInstance(tuple(xs), tuple(betas))


def _sorted_probs(rng: np.random.Generator, size: int) -> list[float]:
    """Distinct positive probabilities in ascending order."""
    raw = np.sort(rng.uniform(0.05, 1.0, size))
    raw = raw + 0.2 * np.arange(size)
    return (raw / raw.sum()).tolist()


class TestVandermonde:
    """Test the determinant itself."""

    invalid_cases: typing.ClassVar[list[tuple[tuple[float, ...], tuple[float, ...]]]] = [
        ((), ()),
        ((1.0, 2.0), (0.0,)),
        ((0.0, 1.0), (0.0, 1.0)),
        ((2.0, 1.0), (0.0, 1.0)),
        ((1.0, 2.0), (1.0, 1.0)),
    ]

    @pytest.mark.parametrize(("xs", "betas"), invalid_cases)
    def test_invalid(self, xs: tuple[float, ...], betas: tuple[float, ...]) -> None:
        """Test validation of nodes and exponents."""
        with pytest.raises(InputError):
            VandermondeInstance(xs, betas)

    def test_classic(self) -> None:
        """Test the ordinary Vandermonde determinant."""
        v = VandermondeInstance((1.0, 2.0, 3.0), (0.0, 1.0, 2.0))
        assert v.size == 3
        assert gen_vandermonde_det(v) == pytest.approx(2.0, rel=1e-12)

    @pytest.mark.parametrize("size", [1, 2, 3, 4])
    def test_positive(self, rng: np.random.Generator, size: int) -> None:
        """Test that distinct nodes give a positive determinant."""
        for _ in range(50):
            v = _random_instance(rng, size)
            assert gen_vandermonde_det(v) > 0.0

    @pytest.mark.parametrize("size", [2, 3, 4])
    def test_planted_duplicate(self, rng: np.random.Generator, size: int) -> None:
        """Test that a repeated node gives a zero determinant."""
        for _ in range(20):
            v = _random_instance(rng, size)
            xs = list(v.xs)
            xs[1] = xs[0]
            planted = VandermondeInstance(tuple(xs), v.betas)
            assert abs(gen_vandermonde_det(planted)) <= determinant_scale(planted)

    def test_grows_with_last_node(self, rng: np.random.Generator) -> None:
        """Test that moving the largest node up never shrinks the determinant when beta_1 = 0."""
        for _ in range(100):
            v = _random_instance(rng, int(rng.integers(2, 5)))
            v = VandermondeInstance(v.xs, tuple(b - v.betas[0] for b in v.betas))
            step = float(rng.uniform(1e-3, 0.1))
            bumped = VandermondeInstance((*v.xs[:-1], v.xs[-1] + step), v.betas)
            assert gen_vandermonde_det(bumped) - gen_vandermonde_det(v) >= -determinant_scale(bumped)


class TestOrientation:
    """Test the sign of the entropy map Jacobian."""

    @pytest.mark.parametrize("orders", ORDER_SETS)
    def test_direct_matches_factored(self, rng: np.random.Generator, orders: tuple[float, ...]) -> None:
        """Test that both determinant forms agree."""
        for _ in range(20):
            probs = _sorted_probs(rng, len(orders) + 1)
            direct, factored = orientation_determinants(probs, orders)
            assert math.isclose(direct, factored, rel_tol=1e-8)

    @pytest.mark.parametrize("orders", ORDER_SETS)
    def test_sign_constant(self, rng: np.random.Generator, orders: tuple[float, ...]) -> None:
        """Test that the sign depends on the orders only."""
        signs = {orientation_sign(_sorted_probs(rng, len(orders) + 1), orders) for _ in range(20)}
        assert len(signs) == 1
        assert signs <= {-1, 1}

    def test_sign_matches_direct(self) -> None:
        """Test that the reported sign is the sign of the determinant."""
        probs = [0.2, 0.3, 0.5]
        direct, _ = orientation_determinants(probs, (0.5, 2.0))
        assert orientation_sign(probs, (0.5, 2.0)) == int(np.sign(direct))

    def test_repeated_probability(self) -> None:
        """Test that equal probabilities give sign zero."""
        assert orientation_sign([0.2, 0.4, 0.4], (0.5, 2.0)) == 0

    def test_jacobian_shape(self) -> None:
        """Test the block layout."""
        block = jacobian_block([0.2, 0.3, 0.5], (0.5, 2.0))
        assert block.shape == (3, 3)
        assert block[-1].tolist() == [1.0, 1.0, 1.0]

    order_errors: typing.ClassVar[list[tuple[float, ...]]] = [
        (1.0, 2.0),
        (2.0, 0.5),
        (0.0, 2.0),
        (0.5, math.inf),
        (0.5, 0.5),
    ]

    @pytest.mark.parametrize("orders", order_errors)
    def test_order_errors(self, orders: tuple[float, ...]) -> None:
        """Test that orders outside (0, inf) \\ {1} or unsorted are domain errors."""
        with pytest.raises(DomainError):
            orientation_sign([0.2, 0.3, 0.5], orders)

    @pytest.mark.parametrize("probs", [[0.5, 0.5], [0.5, 0.3, 0.2], [0.0, 0.5, 0.5]])
    def test_probability_errors(self, probs: list[float]) -> None:
        """Test wrong counts, order and zero entries."""
        with pytest.raises(InputError):
            orientation_determinants(probs, (0.5, 2.0))

    def test_inconsistent_power_sums(self, caplog: pytest.LogCaptureFixture) -> None:
        """Test that wrong power sums are replaced with a warning."""
        probs = [0.2, 0.3, 0.5]
        with caplog.at_level(logging.WARNING):
            given = orientation_determinants(probs, (0.5, 2.0), [1.0, 1.0])
        assert "inconsistent" in caplog.text
        assert given == orientation_determinants(probs, (0.5, 2.0))

    def test_partial_probabilities_keep_power_sums(self) -> None:
        """Test that power sums of a larger distribution are used as given."""
        full = np.array([0.1, 0.15, 0.25, 0.5])
        sums = [float(np.sum(full**a)) for a in (0.5, 2.0)]
        direct, factored = orientation_determinants(full[1:].tolist(), (0.5, 2.0), sums)
        assert math.isclose(direct, factored, rel_tol=1e-8)
        own, _ = orientation_determinants(full[1:].tolist(), (0.5, 2.0))
        assert not math.isclose(direct, own, rel_tol=1e-3)

    def test_non_positive_power_sums(self) -> None:
        """Test that power sums must be positive."""
        with pytest.raises(InputError):
            orientation_determinants([0.2, 0.3, 0.5], (0.5, 2.0), [1.0, 0.0])
