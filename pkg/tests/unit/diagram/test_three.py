"""Test the joint range of three entropies."""
from __future__ import annotations

import math
import typing

import numpy as np
import pytest

from renyirange.core.entropy import ProbVector, realize_mixture, renyi_entropy, renyi_entropy_rows
from renyirange.diagram.three import (
    BoundQuery3,
    SurfaceCell,
    SurfaceKind,
    invert_on_lower_surface,
    invert_on_upper_surface,
    lower_bound3,
    lower_bound3_batch,
    lower_facet,
    simplex_point,
    surface_facets,
    surface_mesh,
    upper_bound3,
    upper_bound3_batch,
)
from renyirange.diagram.two import BoundQuery2, upper_bound
from renyirange.errors import DomainError, InputError, OutOfRangeError
from tests.const import LOG2, LOG4, ORDER_TRIPLES

if typing.TYPE_CHECKING:
    from collections.abc import Sequence

# distributions on four letters away from the sheet edges
INTERIOR = (
    (0.1, 0.2, 0.3, 0.4),
    (0.05, 0.15, 0.3, 0.5),
    (0.2, 0.2, 0.25, 0.35),
    (0.02, 0.08, 0.2, 0.7),
)


def _coordinates(probs: Sequence[float], orders: Sequence[float]) -> list[float]:
    p = ProbVector(np.array(probs))
    return [renyi_entropy(p, a).value for a in orders]


class TestSurfaceCell:
    """Test cells and the points they describe."""

    point_cases: typing.ClassVar[list[tuple[tuple[int, int, int], tuple[float, float, float], list[float]]]] = [
        ((3, 2, 1), (1.0, 0.0, 0.0), [1 / 3, 1 / 3, 1 / 3]),
        ((3, 2, 1), (0.0, 0.0, 1.0), [0.0, 0.0, 1.0]),
        ((4, 3, 1), (0.5, 0.25, 0.25), [0.125, 0.125 + 1 / 12, 0.125 + 1 / 12, 0.125 + 1 / 12 + 0.25]),
    ]

    @pytest.mark.parametrize(("supports", "weights", "expected"), point_cases)
    def test_simplex_point(
        self, supports: tuple[int, int, int], weights: tuple[float, float, float], expected: list[float]
    ) -> None:
        """Test the realized distribution of a cell."""
        cell = SurfaceCell(supports, weights)
        assert simplex_point(cell).probs.tolist() == pytest.approx(expected, abs=1e-15)

    @pytest.mark.parametrize(
        ("supports", "weights"),
        [((1, 2, 3), (0.2, 0.3, 0.5)), ((3, 2, 1), (0.5, 0.5, 0.5)), ((3, 2), (0.5, 0.5))],
    )
    def test_invalid(self, supports: tuple[int, ...], weights: tuple[float, ...]) -> None:
        """Test support order, weight sum and arity."""
        with pytest.raises(InputError):
            SurfaceCell(supports, weights)  # type: ignore[arg-type]

    def test_label(self) -> None:
        """Test the simplex label."""
        assert SurfaceCell((4, 3, 1), (0.2, 0.3, 0.5)).label == "delta_4_3_1"


class TestSheets:
    """Test the simplices making up each sheet and their meshes."""

    def test_facets(self) -> None:
        """Test the sheet layout on four letters."""
        assert [f.label for f in surface_facets(SurfaceKind.LOWER, 4)] == ["delta_3_2_1", "delta_4_3_1"]
        assert [f.label for f in surface_facets("upper", 4)] == ["delta_4_2_1", "delta_4_3_2"]

    @pytest.mark.parametrize("kind", list(SurfaceKind))
    def test_vertices_only(self, kind: SurfaceKind) -> None:
        """Test that resolution 2 gives the uniform distributions on the diagonal."""
        surface = surface_mesh(1.0, 2.0, 3.0, 4, kind, 2)
        assert surface.kind is kind
        assert len(surface.vertices) == 4
        assert len(surface.triangles) == 2
        expected = [math.log(k) for k in range(1, 5)]
        for vertex in surface.vertices:
            assert vertex[0] == pytest.approx(vertex[1], abs=1e-12)
            assert vertex[1] == pytest.approx(vertex[2], abs=1e-12)
        assert sorted(v[0] for v in surface.vertices) == pytest.approx(expected, abs=1e-12)

    def test_mesh_frame(self) -> None:
        """Test the vertex frame and triangle indices."""
        surface = surface_mesh(1.0, 2.0, 3.0, 5, SurfaceKind.LOWER, 4)
        frame = surface.to_frame()
        assert frame.columns == ["h1", "h2", "h3", "segment_label"]
        assert frame.height == len(surface.vertices) == len(surface.cells)
        assert set(frame["segment_label"].to_list()) <= {"delta_3_2_1", "delta_4_3_1", "delta_5_4_1"}
        assert all(0 <= i < frame.height for triangle in surface.triangles for i in triangle)
        assert len(surface.triangles) == 3 * 9

    def test_mesh_cells_reproduce_vertices(self) -> None:
        """Test that each vertex is the image of its cell."""
        surface = surface_mesh(1.0, 2.0, 3.0, 5, SurfaceKind.UPPER, 4)
        for vertex, cell in zip(surface.vertices, surface.cells, strict=True):
            assert list(vertex) == pytest.approx(_coordinates(simplex_point(cell).probs, (1.0, 2.0, 3.0)), abs=1e-12)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_seam(self, m: int) -> None:
        """Test that neighbouring lower simplices agree on their shared edge."""
        w = np.linspace(0.0, 1.0, 11)
        inner, outer = lower_facet(m), lower_facet(m + 1)
        for a in (1.0, 2.0, 3.0):
            shared_in = inner.entropy(w, np.ones_like(w), a)
            shared_out = outer.entropy(w, np.zeros_like(w), a)
            assert shared_in.tolist() == pytest.approx(shared_out.tolist(), abs=1e-12)

    @pytest.mark.parametrize(("n", "resolution"), [(2, 3), (4, 1)])
    def test_mesh_invalid(self, n: int, resolution: int) -> None:
        """Test the mesh preconditions."""
        with pytest.raises(DomainError):
            surface_mesh(1.0, 2.0, 3.0, n, SurfaceKind.LOWER, resolution)


class TestBoundQuery3:
    """Test query validation."""

    invalid_cases: typing.ClassVar[list[tuple[tuple[float, float, float], float, float, int | None, type[Exception]]]] = [
        ((1.0, 2.0, 2.0), 0.5, 0.4, None, DomainError),
        ((1.0, 2.0, 3.0), 0.5, 0.4, 2, DomainError),
        ((1.0, 2.0, 3.0), 0.5, 0.9, None, OutOfRangeError),
        ((1.0, 2.0, 3.0), 1.5, 1.0, 4, OutOfRangeError),
    ]

    @pytest.mark.parametrize(("orders", "h1", "h2", "n", "error"), invalid_cases)
    def test_invalid(
        self, orders: tuple[float, float, float], h1: float, h2: float, n: int | None, error: type[Exception]
    ) -> None:
        """Test orders, alphabet sizes and the two-order range."""
        with pytest.raises(error):
            BoundQuery3(*orders, h1, h2, n)  # type: ignore[arg-type]


class TestLowerSheet:
    """Test inversion on the sheet carrying the lower bound."""

    @pytest.mark.parametrize("k", [3, 4, 6])
    def test_diagonal(self, k: int) -> None:
        """Test that (log k, log k) maps to the vertex U_k."""
        cell = invert_on_lower_surface(1.0, 2.0, math.log(k), math.log(k))
        assert cell.supports == (k, k - 1, 1)
        assert cell.barycentric == (1.0, 0.0, 0.0)

    def test_diagonal_small(self) -> None:
        """Test U_2 and U_1 on the first simplex."""
        assert invert_on_lower_surface(1.0, 2.0, LOG2, LOG2).barycentric == (0.0, 1.0, 0.0)
        assert invert_on_lower_surface(1.0, 2.0, 0.0, 0.0).barycentric == (0.0, 0.0, 1.0)

    @pytest.mark.parametrize("orders", ORDER_TRIPLES)
    def test_round_trip(self, orders: tuple[float, float, float]) -> None:
        """Test that the preimage reproduces (h1, h2)."""
        for probs in INTERIOR:
            h1, h2 = _coordinates(probs, orders[:2])
            cell = invert_on_lower_surface(orders[0], orders[1], h1, h2)
            assert _coordinates(simplex_point(cell).probs, orders[:2]) == pytest.approx([h1, h2], abs=1e-9)

    def test_upper_curve_has_no_u1_weight(self) -> None:
        """Test that points on the two-order maximum need no weight on U_1."""
        h1 = 1.2
        h2 = upper_bound(BoundQuery2(1.0, 2.0, h1)).bound.value  # type: ignore[arg-type]
        cell = invert_on_lower_surface(1.0, 2.0, h1, h2)
        assert cell.supports == (4, 3, 1)
        assert cell.barycentric[2] <= 1e-9

    def test_outside(self) -> None:
        """Test that points outside the two-order range are rejected."""
        with pytest.raises(OutOfRangeError):
            invert_on_lower_surface(1.0, 2.0, 0.5, 0.6)


class TestUpperSheet:
    """Test inversion on the sheet carrying the upper bound."""

    def test_top_vertex(self) -> None:
        """Test that (log n, log n) maps to U_n."""
        cells = invert_on_upper_surface(1.0, 2.0, LOG4, LOG4, 4)
        assert len(cells) == 1
        assert simplex_point(cells[0]).probs.tolist() == pytest.approx([0.25] * 4, abs=1e-15)

    @pytest.mark.parametrize("orders", ORDER_TRIPLES)
    def test_round_trip(self, orders: tuple[float, float, float]) -> None:
        """Test that every preimage reproduces (h1, h2)."""
        for probs in INTERIOR:
            h1, h2 = _coordinates(probs, orders[:2])
            cells = invert_on_upper_surface(orders[0], orders[1], h1, h2, 4)
            assert cells
            for cell in cells:
                assert cell.supports[0] == 4
                assert _coordinates(simplex_point(cell).probs, orders[:2]) == pytest.approx([h1, h2], abs=1e-9)

    def test_needs_n(self) -> None:
        """Test that the upper sheet refuses a missing alphabet size."""
        with pytest.raises(DomainError):
            invert_on_upper_surface(1.0, 2.0, 1.0, 0.8, None)  # type: ignore[arg-type]


class TestBounds3:
    """Test the three-order bound queries."""

    @pytest.mark.parametrize("orders", ORDER_TRIPLES)
    def test_sandwich_interior(self, orders: tuple[float, float, float]) -> None:
        """Test lower_bound3 <= H_a3 <= upper_bound3 on fixed distributions."""
        for probs in INTERIOR:
            h1, h2, h3 = _coordinates(probs, orders)
            q = BoundQuery3(*orders, h1, h2, 4)  # type: ignore[arg-type]
            lower, upper = lower_bound3(q), upper_bound3(q)
            assert lower.bound.value - 1e-9 <= h3 <= upper.bound.value + 1e-9
            assert lower.attained
            assert upper.attained

    @pytest.mark.parametrize("n", [4, 6])
    def test_sandwich_batch(self, rng: np.random.Generator, n: int) -> None:
        """Test the batch bounds on sampled distributions."""
        samples = rng.dirichlet(np.ones(n), 200)
        h1, h2, h3 = (renyi_entropy_rows(samples, a) for a in (1.0, 2.0, 3.0))
        lower = lower_bound3_batch(1.0, 2.0, 3.0, h1, h2, n)
        upper = upper_bound3_batch(1.0, 2.0, 3.0, h1, h2, n)
        assert np.count_nonzero(np.isnan(lower)) <= 2
        assert np.count_nonzero(np.isnan(upper)) <= 2
        resolved = ~np.isnan(lower) & ~np.isnan(upper)
        assert np.all(lower[resolved] - 1e-9 <= h3[resolved])
        assert np.all(h3[resolved] <= upper[resolved] + 1e-9)

    def test_witness_reproduces(self) -> None:
        """Test that the witnesses reproduce all three coordinates."""
        orders = (1.0, 2.0, 3.0)
        h1, h2, _ = _coordinates(INTERIOR[0], orders)
        q = BoundQuery3(*orders, h1, h2, 4)  # type: ignore[arg-type]
        for result in (lower_bound3(q), upper_bound3(q)):
            assert result.witness is not None
            probs = realize_mixture(result.witness).probs
            assert _coordinates(probs, orders) == pytest.approx([h1, h2, result.bound.value], abs=1e-9)

    def test_lower_independent_of_n(self) -> None:
        """Test that the lower bound is the same for every admissible alphabet."""
        h1, h2, _ = _coordinates(INTERIOR[1], (1.0, 2.0, 3.0))
        values = [lower_bound3(BoundQuery3(1.0, 2.0, 3.0, h1, h2, n)).bound.value for n in (4, 7, None)]  # type: ignore[arg-type]
        assert values[1] == pytest.approx(values[0], abs=1e-12)
        assert values[2] == pytest.approx(values[0], abs=1e-12)

    def test_upper_needs_n(self) -> None:
        """Test that the upper bound depends on n and refuses a query without it."""
        with pytest.raises(DomainError):
            upper_bound3(BoundQuery3(1.0, 2.0, 3.0, 1.0, 0.8))  # type: ignore[arg-type]

    @pytest.mark.parametrize("k", [3, 4])
    def test_diagonal(self, k: int) -> None:
        """Test that the lower bound at (log k, log k) is log k."""
        q = BoundQuery3(1.0, 2.0, 3.0, math.log(k), math.log(k), 4)  # type: ignore[arg-type]
        assert lower_bound3(q).bound.value == pytest.approx(math.log(k), abs=1e-12)

    def test_upper_diagonal(self) -> None:
        """Test that the upper bound at (log n, log n) is log n."""
        q = BoundQuery3(1.0, 2.0, 3.0, LOG4, LOG4, 4)  # type: ignore[arg-type]
        result = upper_bound3(q)
        assert result.bound.value == pytest.approx(LOG4, abs=1e-12)
        assert result.witness is not None
        assert result.witness.supports == (4,)
