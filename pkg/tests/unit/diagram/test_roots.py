"""Test the monotone bisection helpers."""
from __future__ import annotations

import numpy as np
import pytest

from renyirange.diagram.roots import bisect_monotone, level_crossing
from renyirange.errors import ConsistencyError


class TestBisection:
    """Test bisect_monotone and level_crossing."""

    def test_increasing(self) -> None:
        """Test an increasing function with several targets at once."""
        targets = np.array([0.0, 0.04, 0.25, 0.81])
        roots = bisect_monotone(np.square, targets)
        assert roots.tolist() == pytest.approx([0.0, 0.2, 0.5, 0.9], abs=1e-15)

    def test_decreasing(self) -> None:
        """Test a decreasing function on a custom bracket."""
        root = bisect_monotone(lambda x: 3.0 - x, 1.5, 0.0, 2.0, increasing=False)
        assert float(root) == pytest.approx(1.5, abs=1e-15)

    def test_target_outside(self) -> None:
        """Test that unreachable targets converge to the nearer end."""
        roots = bisect_monotone(np.square, np.array([-1.0, 2.0]))
        assert roots.tolist() == pytest.approx([0.0, 1.0], abs=1e-15)

    def test_not_monotone(self) -> None:
        """Test that a non-monotone function is detected."""
        with pytest.raises(ConsistencyError):
            bisect_monotone(lambda x: np.sin(6.0 * x), -0.1)

    def test_level_crossing_clips(self) -> None:
        """Test that levels beyond the range clip to the ends."""
        low = level_crossing(np.square, -1.0, (2,), increasing=True)
        high = level_crossing(lambda x: 1.0 - x, 4.0, (2,), increasing=False)
        assert low.tolist() == pytest.approx([0.0, 0.0], abs=1e-15)
        assert high.tolist() == pytest.approx([0.0, 0.0], abs=1e-15)

    def test_level_crossing_interior(self) -> None:
        """Test a crossing inside [0, 1]."""
        root = level_crossing(lambda x: 1.0 - x, 0.3, (), increasing=False)
        assert float(root) == pytest.approx(0.7, abs=1e-15)
