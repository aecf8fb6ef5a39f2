"""Joint range of three Rényi entropies of orders 0 < a1 < a2 < a3.

Given (H_a1, H_a2), the minimum of H_a3 lies on the sheet of simplices
spanned by U_m, U_{m-1}, U_1 (m = 3, 4, ...). Every admissible pair has a
unique preimage there, so the minimum does not depend on the alphabet size.
The maximum on n letters lies on the sheet spanned by U_n, U_m, U_{m-1}
(m = 2 .. n-1) and grows with n.

Preimages are found by nested bisection inside one simplex. A point of the
simplex is written w * U_apex + (1 - w) * (s * U_hi + (1 - s) * U_lo). The
inner solve matches H_a2 along s, and the outer solve follows the sign of
H_a1 - h1 along w.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import numpy as np
import polars as pl

from renyirange.core.entropy import (
    EntropyValue,
    Order,
    UniformMixture,
    level_entropy,
    mixture_levels,
    realize_mixture,
)
from renyirange.errors import DomainError, InputError, OutOfRangeError

from .const import (
    BISECTION_ITERATIONS,
    INVERSION_TOLERANCE,
    JOINT_RANGE_TOLERANCE,
    MAX_SUPPORT_DOUBLINGS,
    MONOTONE_SLACK,
    OUTER_SCAN_POINTS,
    RANGE_TOLERANCE,
)
from .roots import level_crossing
from .two import (
    BoundResult,
    check_alphabet,
    check_entropy,
    check_orders,
    lower_bound_fixed_n_batch,
    lower_bound_unbounded_batch,
    segment_label,
    snap_to_uniform,
    upper_bound_batch,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from renyirange.core.entropy import ProbVector

_LOGGER = logging.getLogger(__name__)


class SurfaceKind(str, Enum):
    """Which bound on the third entropy a boundary sheet carries."""

    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class SurfaceCell:
    """Point x * U_k1 + y * U_k2 + z * U_k3 of a simplex with k1 > k2 > k3."""

    supports: tuple[int, int, int]
    barycentric: tuple[float, float, float]

    def __post_init__(self) -> None:
        """Validate supports and barycentric weights."""
        supports = tuple(int(k) for k in self.supports)
        weights = tuple(float(x) for x in self.barycentric)
        if len(supports) != 3 or len(weights) != 3:
            msg = "A surface cell needs three supports and three weights."
            raise InputError(msg)
        mixture = UniformMixture(tuple(zip(supports, weights, strict=True)))
        object.__setattr__(self, "supports", mixture.supports)
        object.__setattr__(self, "barycentric", mixture.weights)

    @property
    def mixture(self) -> UniformMixture:
        """The cell as a uniform mixture."""
        return UniformMixture(tuple(zip(self.supports, self.barycentric, strict=True)))

    @property
    def label(self) -> str:
        """Label of the simplex the cell lies on."""
        return segment_label(*self.supports)


@dataclass(frozen=True)
class Facet:
    """Simplex spanned by U_k for three supports, one of which is the apex.

    :param supports: Supports in descending order.
    :param apex: Index in ``supports`` of the vertex carrying weight w.
    """

    supports: tuple[int, int, int]
    apex: int

    @property
    def label(self) -> str:
        """Label of the simplex."""
        return segment_label(*self.supports)

    @property
    def increasing_in_w(self) -> bool:
        """Entropies grow with the apex weight when the apex has the largest support."""
        return self.apex == 0

    def weights(
        self, w: npt.NDArray[np.float64], s: npt.NDArray[np.float64]
    ) -> tuple[npt.NDArray[np.float64], ...]:
        """Barycentric weights in support order for apex weight w and edge weight s."""
        edge_hi, edge_lo = (1.0 - w) * s, (1.0 - w) * (1.0 - s)
        return (w, edge_hi, edge_lo) if self.apex == 0 else (edge_hi, edge_lo, w)

    def entropy(
        self, w: npt.NDArray[np.float64], s: npt.NDArray[np.float64], a: Order | float
    ) -> npt.NDArray[np.float64]:
        """H_a at the points (w, s), elementwise."""
        values, counts = mixture_levels(self.supports, self.weights(w, s))
        return level_entropy(values, counts, a)

    def cell(self, w: float, s: float) -> SurfaceCell:
        """The point (w, s) as a SurfaceCell."""
        weights = self.weights(np.asarray(w), np.asarray(s))
        return SurfaceCell(self.supports, tuple(float(x) for x in weights))  # type: ignore[arg-type]


def surface_facets(kind: SurfaceKind | str, n: int) -> list[Facet]:
    """Simplices of a boundary sheet on n letters, in index order.

    The lower sheet is spanned by U_m, U_{m-1}, U_1 for m = 3..n, the upper
    sheet by U_n, U_m, U_{m-1} for m = 2..n-1.
    """
    if SurfaceKind(kind) is SurfaceKind.LOWER:
        return [lower_facet(m) for m in range(3, n + 1)]
    return [Facet((n, m, m - 1), apex=0) for m in range(2, n)]


def lower_facet(m: int) -> Facet:
    """Simplex spanned by U_m, U_{m-1} and U_1."""
    return Facet((m, m - 1, 1), apex=2)


def simplex_point(c: SurfaceCell) -> ProbVector:
    """The distribution of a surface cell."""
    return realize_mixture(c.mixture)


def joint_point(
    alpha1: Order | float,
    alpha2: Order | float,
    h1: EntropyValue | float,
    h2: EntropyValue | float,
    n: int | None,
) -> tuple[float, float]:
    """Validate that (h1, h2) lies in the two-order range and clamp rounding noise.

    :return: (h1, h2) in nats.
    """
    v1, v2 = check_entropy(h1, n), check_entropy(h2, n)
    upper = float(upper_bound_batch(alpha1, alpha2, np.array([v1]))[0][0])
    if n is not None:
        lower = float(lower_bound_fixed_n_batch(alpha1, alpha2, np.array([v1]), n)[0][0])
    else:
        lower = float(lower_bound_unbounded_batch(alpha1, alpha2, np.array([v1]))[0])
    if not lower - JOINT_RANGE_TOLERANCE <= v2 <= upper + JOINT_RANGE_TOLERANCE:
        msg = f"H_a2 = {v2} outside the attainable interval [{lower}, {upper}] for H_a1 = {v1}."
        raise OutOfRangeError(msg, interval=(lower, upper))
    return v1, min(max(v2, lower), upper)


@dataclass(frozen=True)
class BoundQuery3:
    """Bound H_a3 given H_a1 = h1 and H_a2 = h2, optionally on at most n letters."""

    alpha1: Order
    alpha2: Order
    alpha3: Order
    h1: EntropyValue
    h2: EntropyValue
    n: int | None = None
    h: tuple[float, float] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        """Validate the query."""
        orders = check_orders(self.alpha1, self.alpha2, self.alpha3)
        n = check_alphabet(self.n, minimum=3)
        for name, order in zip(("alpha1", "alpha2", "alpha3"), orders, strict=True):
            object.__setattr__(self, name, order)
        for name in ("h1", "h2"):
            value = getattr(self, name)
            object.__setattr__(self, name, value if isinstance(value, EntropyValue) else EntropyValue(value))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "h", joint_point(orders[0], orders[1], self.h1, self.h2, n))


def _invert_in_facet(
    facet: Facet,
    alpha1: Order | float,
    alpha2: Order | float,
    h1: npt.NDArray[np.float64],
    h2: npt.NDArray[np.float64],
) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64], npt.NDArray[np.bool_]]:
    """Preimages of (h1, h2) inside one simplex, elementwise.

    :return: (w, s, found); entries with found = False hold no preimage.
    """
    shape = h1.shape
    zeros, ones = np.zeros(shape), np.ones(shape)
    increasing = facet.increasing_in_w

    # feasible apex weights: H_a2 at s = 0 stays below h2, at s = 1 above it
    w_zero = level_crossing(lambda w: facet.entropy(w, zeros, alpha2), h2, shape, increasing=increasing)
    w_one = level_crossing(lambda w: facet.entropy(w, ones, alpha2), h2, shape, increasing=increasing)
    w_start, w_end = (w_one, w_zero) if increasing else (w_zero, w_one)
    w_lo, w_hi = np.minimum(w_start, w_end), np.maximum(w_start, w_end)

    def edge_weight(w: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return level_crossing(lambda s: facet.entropy(w, s, alpha2), h2, shape, increasing=True)

    def gap(w: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        return facet.entropy(w, edge_weight(w), alpha1) - h1

    # narrow to the first sub-interval with a sign change, or a knot on the root
    knots = [w_lo + (w_hi - w_lo) * j / (OUTER_SCAN_POINTS - 1) for j in range(OUTER_SCAN_POINTS)]
    gaps = [gap(knot) for knot in knots]
    lo, hi = knots[-2].copy(), knots[-1].copy()
    g_lo, g_hi = gaps[-2].copy(), gaps[-1].copy()
    for j in range(OUTER_SCAN_POINTS - 1, -1, -1):
        if j < OUTER_SCAN_POINTS - 1:
            change = np.sign(gaps[j]) != np.sign(gaps[j + 1])
            lo = np.where(change, knots[j], lo)
            hi = np.where(change, knots[j + 1], hi)
            g_lo = np.where(change, gaps[j], g_lo)
            g_hi = np.where(change, gaps[j + 1], g_hi)
        hit = np.abs(gaps[j]) <= MONOTONE_SLACK
        lo, hi = np.where(hit, knots[j], lo), np.where(hit, knots[j], hi)
        g_lo, g_hi = np.where(hit, gaps[j], g_lo), np.where(hit, gaps[j], g_hi)

    for _ in range(BISECTION_ITERATIONS):
        mid = 0.5 * (lo + hi)
        g_mid = gap(mid)
        same = np.sign(g_mid) == np.sign(g_lo)
        lo, g_lo = np.where(same, mid, lo), np.where(same, g_mid, g_lo)
        hi, g_hi = np.where(same, hi, mid), np.where(same, g_hi, g_mid)

    w = np.where(np.abs(g_lo) <= np.abs(g_hi), lo, hi)
    s = edge_weight(w)
    found = (np.abs(facet.entropy(w, s, alpha1) - h1) <= INVERSION_TOLERANCE) & (
        np.abs(facet.entropy(w, s, alpha2) - h2) <= INVERSION_TOLERANCE
    )
    return w, s, found


def _lower_fixed(alpha1: Order | float, alpha2: Order | float, h1: float, m: int) -> float:
    return float(lower_bound_fixed_n_batch(alpha1, alpha2, np.array([h1]), m)[0][0])


def _reaches(alpha1: Order | float, alpha2: Order | float, h1: float, h2: float, m: int) -> bool:
    """Whether (h1, h2) lies above the U_m/U_1 curve, i.e. in a lower cell of index <= m."""
    return h1 <= math.log(m) + RANGE_TOLERANCE and _lower_fixed(alpha1, alpha2, min(h1, math.log(m)), m) <= h2 + RANGE_TOLERANCE


def lower_cell_index(
    alpha1: Order | float, alpha2: Order | float, h1: float, h2: float, n: int | None = None
) -> int:
    """Index m of the lower-sheet simplex containing the preimage of (h1, h2).

    It is the smallest m >= 3 such that (h1, h2) lies on or above the curve of
    the U_m/U_1 segment. Without n, the search doubles m until it is found.
    """
    start = max(3, math.ceil(math.exp(h1) - RANGE_TOLERANCE))
    if n is not None and start > n:
        start = n
    if _reaches(alpha1, alpha2, h1, h2, start):
        return start

    low, high = start, start
    for _ in range(MAX_SUPPORT_DOUBLINGS):
        low, high = high, high * 2 if n is None else min(high * 2, n)
        if _reaches(alpha1, alpha2, h1, h2, high):
            break
        if high == n:
            msg = f"(h1, h2) = ({h1}, {h2}) lies below the range on {n} letters."
            raise OutOfRangeError(msg)
    else:
        msg = f"(h1, h2) = ({h1}, {h2}) needs an alphabet beyond 2**{MAX_SUPPORT_DOUBLINGS}."
        raise DomainError(msg)

    while high - low > 1:
        mid = (low + high) // 2
        if _reaches(alpha1, alpha2, h1, h2, mid):
            high = mid
        else:
            low = mid
    return high


def invert_on_lower_surface(
    alpha1: Order | float,
    alpha2: Order | float,
    h1: EntropyValue | float,
    h2: EntropyValue | float,
    n: int | None = None,
) -> SurfaceCell:
    """Unique (m, x, y, z) with (H_a1, H_a2)(x U_m + y U_{m-1} + z U_1) = (h1, h2).

    :raises OutOfRangeError: If (h1, h2) is outside the two-order range.
    """
    a1, a2 = check_orders(alpha1, alpha2)
    n = check_alphabet(n, minimum=3)
    v1, v2 = joint_point(a1, a2, h1, h2, n)

    k = snap_to_uniform(v1)
    if k is not None and snap_to_uniform(v2) == k:
        if k >= 3:
            return SurfaceCell((k, k - 1, 1), (1.0, 0.0, 0.0))
        return SurfaceCell((3, 2, 1), (0.0, 1.0, 0.0) if k == 2 else (0.0, 0.0, 1.0))

    m = lower_cell_index(a1, a2, v1, v2, n)
    candidates = [m, m + 1, m - 1] if n is None else [c for c in (m, m + 1, m - 1) if c <= n]
    for candidate in (c for c in candidates if c >= 3):
        facet = lower_facet(candidate)
        w, s, found = _invert_in_facet(facet, a1, a2, np.array([v1]), np.array([v2]))
        if found[0]:
            _LOGGER.debug("Lower-sheet preimage of (%.12g, %.12g) in %s", v1, v2, facet.label)
            return facet.cell(float(w[0]), float(s[0]))
    msg = f"No preimage of (h1, h2) = ({v1}, {v2}) on the lower sheet."
    raise OutOfRangeError(msg)


def invert_on_upper_surface(
    alpha1: Order | float,
    alpha2: Order | float,
    h1: EntropyValue | float,
    h2: EntropyValue | float,
    n: int,
) -> list[SurfaceCell]:
    """All preimages of (h1, h2) on the sheet spanned by U_n, U_m, U_{m-1}.

    :raises OutOfRangeError: If no simplex holds a preimage.
    """
    a1, a2 = check_orders(alpha1, alpha2)
    size = check_alphabet(n, minimum=3)
    if size is None:
        msg = "The upper sheet needs n."
        raise DomainError(msg)
    v1, v2 = joint_point(a1, a2, h1, h2, size)
    if snap_to_uniform(v1) == size and snap_to_uniform(v2) == size:
        return [SurfaceCell((size, size - 1, size - 2), (1.0, 0.0, 0.0))]

    cells: list[SurfaceCell] = []
    for facet in surface_facets(SurfaceKind.UPPER, size):
        if v2 < math.log(facet.supports[2]) - RANGE_TOLERANCE:
            continue
        w, s, found = _invert_in_facet(facet, a1, a2, np.array([v1]), np.array([v2]))
        if found[0]:
            cell = facet.cell(float(w[0]), float(s[0]))
            if not any(simplex_point(cell).isclose(simplex_point(c), 1e-9) for c in cells):
                cells.append(cell)
    if not cells:
        msg = f"No preimage of (h1, h2) = ({v1}, {v2}) on the upper sheet for n = {size}."
        raise OutOfRangeError(msg)
    if len(cells) > 1:
        _LOGGER.warning("(h1, h2) = (%.12g, %.12g) has %d preimages on the upper sheet", v1, v2, len(cells))
    return cells


def _cell_entropy(cell: SurfaceCell, a: Order | float) -> float:
    values, counts = cell.mixture.levels()
    return float(level_entropy(values, counts, a))


def lower_bound3(q: BoundQuery3) -> BoundResult:
    """Tight lower bound on H_a3; the same for every alphabet that admits (h1, h2)."""
    cell = invert_on_lower_surface(q.alpha1, q.alpha2, q.h[0], q.h[1], q.n)
    return BoundResult(EntropyValue(_cell_entropy(cell, q.alpha3)), cell.mixture.pruned())


def upper_bound3(q: BoundQuery3) -> BoundResult:
    """Tight upper bound on H_a3 on n letters; the largest value over all upper-sheet preimages.

    :raises DomainError: If the query has no alphabet size.
    """
    if q.n is None:
        msg = "The three-order upper bound depends on the alphabet size and needs n."
        raise DomainError(msg)
    cells = invert_on_upper_surface(q.alpha1, q.alpha2, q.h[0], q.h[1], q.n)
    values = [_cell_entropy(cell, q.alpha3) for cell in cells]
    best = int(np.argmax(values))
    return BoundResult(EntropyValue(values[best]), cells[best].mixture.pruned())


def lower_bound3_batch(
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    h1: npt.ArrayLike,
    h2: npt.ArrayLike,
    n: int,
) -> npt.NDArray[np.float64]:
    """Lower bounds on H_a3 for many (h1, h2) pairs on n letters; NaN where unresolved."""
    v1 = np.asarray(h1, dtype=np.float64)
    v2 = np.asarray(h2, dtype=np.float64)
    bound = np.full(v1.shape, np.nan)

    # index of the first lower cell whose U_m/U_1 curve lies below the point
    index = np.zeros(v1.shape, dtype=np.int64)
    for m in range(3, n + 1):
        curve = lower_bound_fixed_n_batch(alpha1, alpha2, np.minimum(v1, math.log(m)), m)[0]
        reached = (index == 0) & (v1 <= math.log(m) + RANGE_TOLERANCE) & (curve <= v2 + RANGE_TOLERANCE)
        index[reached] = m
    index[index == 0] = n

    def attempt(facet: Facet, todo: npt.NDArray[np.bool_]) -> None:
        if not np.any(todo):
            return
        w, s, found = _invert_in_facet(facet, alpha1, alpha2, v1[todo], v2[todo])
        values = facet.entropy(w, s, alpha3)
        positions = np.flatnonzero(todo)[found]
        bound[positions] = values[found]

    for m in range(3, n + 1):
        attempt(lower_facet(m), (index == m) & np.isnan(bound))
    for m in range(3, n + 1):
        attempt(lower_facet(m), (np.abs(index - m) == 1) & np.isnan(bound))
    return bound


def upper_bound3_batch(
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    h1: npt.ArrayLike,
    h2: npt.ArrayLike,
    n: int,
) -> npt.NDArray[np.float64]:
    """Upper bounds on H_a3 for many (h1, h2) pairs on n letters; NaN where unresolved."""
    v1 = np.asarray(h1, dtype=np.float64)
    v2 = np.asarray(h2, dtype=np.float64)
    bound = np.full(v1.shape, np.nan)
    for facet in surface_facets(SurfaceKind.UPPER, n):
        todo = v2 >= math.log(facet.supports[2]) - RANGE_TOLERANCE
        if not np.any(todo):
            continue
        w, s, found = _invert_in_facet(facet, alpha1, alpha2, v1[todo], v2[todo])
        values = facet.entropy(w, s, alpha3)
        positions = np.flatnonzero(todo)[found]
        bound[positions] = np.fmax(bound[positions], values[found])
    return bound


@dataclass(frozen=True)
class DiagramSurface:
    """Triangulated boundary sheet with per-vertex entropy triples.

    ``cells[i]`` is a preimage of ``vertices[i]``; vertices shared between
    simplices appear once.
    """

    kind: SurfaceKind
    facets: tuple[Facet, ...]
    vertices: tuple[tuple[float, float, float], ...]
    cells: tuple[SurfaceCell, ...]
    triangles: tuple[tuple[int, int, int], ...]

    def to_frame(self) -> pl.DataFrame:
        """Vertices as a frame with columns h1, h2, h3, segment_label."""
        columns = list(zip(*self.vertices, strict=True)) if self.vertices else [(), (), ()]
        return pl.DataFrame(
            {
                "h1": list(columns[0]),
                "h2": list(columns[1]),
                "h3": list(columns[2]),
                "segment_label": [cell.label for cell in self.cells],
            },
            schema={"h1": pl.Float64, "h2": pl.Float64, "h3": pl.Float64, "segment_label": pl.Utf8},
        )


def _barycentric_grid(steps: int) -> list[tuple[int, int, int]]:
    return [(i, j, steps - i - j) for i in range(steps + 1) for j in range(steps + 1 - i)]


def surface_mesh(
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    n: int,
    kind: SurfaceKind | str,
    resolution: int,
) -> DiagramSurface:
    """Sample a boundary sheet on a barycentric grid with ``resolution`` points per edge."""
    orders = check_orders(alpha1, alpha2, alpha3)
    if n < 3 or resolution < 2:
        msg = f"Surface mesh needs n >= 3 and resolution >= 2, got {n} and {resolution}."
        raise DomainError(msg)
    facets = tuple(surface_facets(kind, n))
    steps = resolution - 1
    grid = _barycentric_grid(steps)
    lattice = np.array(grid, dtype=np.float64)

    index: dict[tuple[tuple[int, int], ...], int] = {}
    vertices: list[tuple[float, float, float]] = []
    cells: list[SurfaceCell] = []
    triangles: list[tuple[int, int, int]] = []

    for facet in facets:
        weights = tuple(lattice[:, c] / steps for c in range(3))
        values, counts = mixture_levels(facet.supports, weights)
        coords = np.stack([level_entropy(values, counts, a) for a in orders], axis=1)
        local: dict[tuple[int, int], int] = {}
        for row, (i, j, l) in enumerate(grid):
            key = tuple(sorted((k, c) for k, c in zip(facet.supports, (i, j, l), strict=True) if c > 0))
            if key not in index:
                index[key] = len(vertices)
                vertices.append((float(coords[row, 0]), float(coords[row, 1]), float(coords[row, 2])))
                cells.append(SurfaceCell(facet.supports, (i / steps, j / steps, l / steps)))
            local[i, j] = index[key]
        for i in range(steps):
            for j in range(steps - i):
                triangles.append((local[i, j], local[i + 1, j], local[i, j + 1]))
                if i + j < steps - 1:
                    triangles.append((local[i + 1, j], local[i + 1, j + 1], local[i, j + 1]))

    _LOGGER.debug("Surface mesh %s on %d letters: %d vertices", SurfaceKind(kind).value, n, len(vertices))
    return DiagramSurface(SurfaceKind(kind), facets, tuple(vertices), tuple(cells), tuple(triangles))

