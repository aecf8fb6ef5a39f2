"""Brute-force ground truth for the information diagrams.

Samples the probability simplex (seeded Monte Carlo or an exhaustive lattice),
bins the sampled entropies into empirical envelopes and checks every sample
against the analytic bounds. The analytic bounds are only used as the target
of the comparison.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, islice
from typing import TYPE_CHECKING

import numpy as np
import polars as pl

from renyirange.core.entropy import Order, ProbVector, as_order, renyi_entropy_rows
from renyirange.diagram.three import lower_bound3_batch, upper_bound3_batch
from renyirange.diagram.two import (
    check_orders,
    lower_bound_fixed_n_batch,
    upper_bound_batch,
)
from renyirange.errors import InputError

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator

    import numpy.typing as npt

    BoundFunc = Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
    BoundFunc3 = Callable[[npt.NDArray[np.float64], npt.NDArray[np.float64]], npt.NDArray[np.float64]]
    Samples = npt.NDArray[np.float64] | Iterable[ProbVector]

_LOGGER = logging.getLogger(__name__)

MAX_SEED = 2**64


class SampleMode(str, Enum):
    """How the simplex is sampled."""

    MONTE_CARLO = "mc"
    LATTICE = "lattice"


@dataclass(frozen=True)
class SampleConfig:
    """Sampling plan for the n-letter simplex.

    Monte Carlo draws ``count`` flat-Dirichlet samples from a PCG64 generator
    seeded with ``seed``. Lattice mode ignores ``count`` and enumerates every
    vector c / R with non-negative integer c summing to R.
    """

    n: int
    count: int = 1
    seed: int = 7
    mode: SampleMode = SampleMode.MONTE_CARLO
    lattice_resolution: int = 1
    batch_size: int = 65536

    def __post_init__(self) -> None:
        """Validate the plan."""
        try:
            object.__setattr__(self, "mode", SampleMode(self.mode))
        except ValueError as exc:
            msg = f"Unknown sampling mode '{self.mode}'."
            raise InputError(msg) from exc
        for name in ("n", "count", "lattice_resolution", "batch_size"):
            if int(getattr(self, name)) < 1:
                msg = f"Sample config field '{name}' must be >= 1, got {getattr(self, name)}."
                raise InputError(msg)
        if not 0 <= self.seed < MAX_SEED:
            msg = f"Seed must be a 64-bit unsigned integer, got {self.seed}."
            raise InputError(msg)

    @property
    def total(self) -> int:
        """Number of samples the plan produces."""
        if self.mode is SampleMode.LATTICE:
            return math.comb(self.lattice_resolution + self.n - 1, self.n - 1)
        return self.count


def _monte_carlo_batches(cfg: SampleConfig) -> Iterator[npt.NDArray[np.float64]]:
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    remaining = cfg.count
    while remaining > 0:
        size = min(cfg.batch_size, remaining)
        draws = rng.standard_exponential((size, cfg.n))
        yield draws / draws.sum(axis=1, keepdims=True)
        remaining -= size


def _lattice_batches(cfg: SampleConfig) -> Iterator[npt.NDArray[np.float64]]:
    resolution, n = cfg.lattice_resolution, cfg.n
    # stars and bars: n - 1 bar positions among resolution + n - 1 slots
    bars = combinations(range(resolution + n - 1), n - 1)
    while chunk := list(islice(bars, cfg.batch_size)):
        positions = np.array(chunk, dtype=np.int64).reshape(len(chunk), n - 1)
        edges = np.hstack(
            [
                np.full((len(chunk), 1), -1),
                positions,
                np.full((len(chunk), 1), resolution + n - 1),
            ]
        )
        yield (np.diff(edges, axis=1) - 1) / resolution


def sample_batches(cfg: SampleConfig) -> Iterator[npt.NDArray[np.float64]]:
    """Samples as (batch, n) arrays; deterministic given the config."""
    if cfg.mode is SampleMode.LATTICE:
        return _lattice_batches(cfg)
    return _monte_carlo_batches(cfg)


def sample_simplex(cfg: SampleConfig) -> Iterator[ProbVector]:
    """Samples as a stream of probability vectors."""
    for batch in sample_batches(cfg):
        for row in batch:
            yield ProbVector(row)


def as_matrix(samples: Samples) -> npt.NDArray[np.float64]:
    """Stack samples given as an array or as probability vectors into rows."""
    if isinstance(samples, np.ndarray):
        return np.atleast_2d(samples).astype(np.float64, copy=False)
    rows = [p.probs for p in samples]
    if not rows:
        return np.zeros((0, 1))
    width = max(row.size for row in rows)
    return np.vstack([np.pad(row, (width - row.size, 0)) for row in rows])


@dataclass(frozen=True)
class EnvelopeReport:
    """Per-bin minimum and maximum of one entropy given the others.

    ``bins`` holds one row per populated bin: the bin center(s), min and max
    of the binned entropy, the sample count and the coordinates of the
    extremal samples.
    """

    bins: pl.DataFrame
    bin_width: float

    def rows(self) -> list[tuple[float, float, float, int]]:
        """(h1_bin_center, min, max, sample_count) per bin."""
        value = "h2" if "min_h2" in self.bins.columns else "h3"
        return list(
            self.bins.select("h1_bin_center", f"min_{value}", f"max_{value}", "sample_count").iter_rows()
        )


def _bin_index(column: str, bin_width: float) -> pl.Expr:
    return (pl.col(column) / bin_width).floor().cast(pl.Int64)


def envelope_from_entropies(
    h1: npt.NDArray[np.float64], h2: npt.NDArray[np.float64], bin_width: float
) -> EnvelopeReport:
    """Envelope of h2 over bins of h1."""
    if bin_width <= 0.0:
        msg = f"Bin width must be positive, got {bin_width}."
        raise InputError(msg)
    bins = (
        pl.DataFrame({"h1": h1, "h2": h2})
        .with_columns(_bin_index("h1", bin_width).alias("bin1"))
        .group_by("bin1")
        .agg(
            pl.col("h2").min().alias("min_h2"),
            pl.col("h2").max().alias("max_h2"),
            pl.len().alias("sample_count"),
            pl.col("h1").sort_by("h2").first().alias("h1_at_min"),
            pl.col("h1").sort_by("h2").last().alias("h1_at_max"),
        )
        .sort("bin1")
        .with_columns(((pl.col("bin1") + 0.5) * bin_width).alias("h1_bin_center"))
        .drop("bin1")
    )
    return EnvelopeReport(bins, bin_width)


def envelope3_from_entropies(
    h1: npt.NDArray[np.float64],
    h2: npt.NDArray[np.float64],
    h3: npt.NDArray[np.float64],
    bin_width: float,
) -> EnvelopeReport:
    """Envelope of h3 over square cells of (h1, h2)."""
    if bin_width <= 0.0:
        msg = f"Bin width must be positive, got {bin_width}."
        raise InputError(msg)
    bins = (
        pl.DataFrame({"h1": h1, "h2": h2, "h3": h3})
        .with_columns(_bin_index("h1", bin_width).alias("bin1"), _bin_index("h2", bin_width).alias("bin2"))
        .group_by("bin1", "bin2")
        .agg(
            pl.col("h3").min().alias("min_h3"),
            pl.col("h3").max().alias("max_h3"),
            pl.len().alias("sample_count"),
            pl.col("h1").sort_by("h3").first().alias("h1_at_min"),
            pl.col("h2").sort_by("h3").first().alias("h2_at_min"),
            pl.col("h1").sort_by("h3").last().alias("h1_at_max"),
            pl.col("h2").sort_by("h3").last().alias("h2_at_max"),
        )
        .sort("bin1", "bin2")
        .with_columns(
            ((pl.col("bin1") + 0.5) * bin_width).alias("h1_bin_center"),
            ((pl.col("bin2") + 0.5) * bin_width).alias("h2_bin_center"),
        )
        .drop("bin1", "bin2")
    )
    return EnvelopeReport(bins, bin_width)


def empirical_envelope(
    samples: Samples, alpha1: Order | float, alpha2: Order | float, bin_width: float
) -> EnvelopeReport:
    """Bin samples by H_a1 and record the min and max of H_a2 per bin."""
    matrix = as_matrix(samples)
    return envelope_from_entropies(
        renyi_entropy_rows(matrix, alpha1), renyi_entropy_rows(matrix, alpha2), bin_width
    )


def empirical_envelope3(
    samples: Samples,
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    bin_width: float,
) -> EnvelopeReport:
    """Bin samples by (H_a1, H_a2) and record the min and max of H_a3 per cell."""
    matrix = as_matrix(samples)
    return envelope3_from_entropies(
        renyi_entropy_rows(matrix, alpha1),
        renyi_entropy_rows(matrix, alpha2),
        renyi_entropy_rows(matrix, alpha3),
        bin_width,
    )


def _with_gaps(
    bins: pl.DataFrame, value: str, upper: npt.NDArray[np.float64], lower: npt.NDArray[np.float64], slack: float, tolerance: float
) -> pl.DataFrame:
    return bins.with_columns(
        pl.Series("upper", upper), pl.Series("lower", lower)
    ).with_columns(
        (pl.col("upper") - pl.col(f"max_{value}")).alias("upper_gap"),
        (pl.col(f"min_{value}") - pl.col("lower")).alias("lower_gap"),
    ).with_columns(
        (
            pl.col("upper_gap").is_between(-tolerance, slack)
            & pl.col("lower_gap").is_between(-tolerance, slack)
        ).alias("within_slack")
    )


def compare_envelope(
    report: EnvelopeReport,
    alpha1: Order | float,
    alpha2: Order | float,
    n: int,
    slack: float,
    tolerance: float = 1e-9,
) -> pl.DataFrame:
    """Attach the analytic bounds to every envelope bin.

    Bounds are evaluated at the H_a1 of each bin's extremal samples. A bin is
    within slack when both gaps lie in [-tolerance, slack].
    """
    upper = upper_bound_batch(alpha1, alpha2, report.bins["h1_at_max"].to_numpy())[0]
    lower = lower_bound_fixed_n_batch(alpha1, alpha2, report.bins["h1_at_min"].to_numpy(), n)[0]
    return _with_gaps(report.bins, "h2", upper, lower, slack, tolerance)


def compare_envelope3(
    report: EnvelopeReport,
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    n: int,
    slack: float,
    tolerance: float = 1e-9,
) -> pl.DataFrame:
    """Attach the analytic three-order bounds to every envelope cell."""
    bins = report.bins
    upper = upper_bound3_batch(alpha1, alpha2, alpha3, bins["h1_at_max"].to_numpy(), bins["h2_at_max"].to_numpy(), n)
    lower = lower_bound3_batch(alpha1, alpha2, alpha3, bins["h1_at_min"].to_numpy(), bins["h2_at_min"].to_numpy(), n)
    return _with_gaps(bins, "h3", upper, lower, slack, tolerance)


class BoundKind(str, Enum):
    """Which side of the range a violation crosses."""

    UPPER = "upper"
    LOWER = "lower"


@dataclass(frozen=True)
class Violation:
    """A sample outside the analytic range by more than the tolerance."""

    probs: ProbVector
    kind: BoundKind
    bound: float
    observed: float
    excess: float


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of a bound check.

    ``unresolved`` counts samples for which no bound could be evaluated.
    """

    total_checked: int = 0
    violations: tuple[Violation, ...] = field(default=())
    unresolved: int = 0

    @property
    def ok(self) -> bool:
        """Whether every sample was checked and none violated a bound."""
        return not self.violations and self.unresolved == 0

    def merge(self, other: ViolationReport) -> ViolationReport:
        """Combine the reports of two disjoint sample sets."""
        return ViolationReport(
            self.total_checked + other.total_checked,
            self.violations + other.violations,
            self.unresolved + other.unresolved,
        )


def _collect(
    matrix: npt.NDArray[np.float64],
    observed: npt.NDArray[np.float64],
    upper: npt.NDArray[np.float64],
    lower: npt.NDArray[np.float64],
    tolerance: float,
) -> ViolationReport:
    unresolved = np.isnan(upper) | np.isnan(lower)
    violations: list[Violation] = []
    for kind, excess, bound in (
        (BoundKind.UPPER, observed - upper, upper),
        (BoundKind.LOWER, lower - observed, lower),
    ):
        for row in np.flatnonzero(~unresolved & (excess > tolerance)):
            violations.append(
                Violation(ProbVector(matrix[row]), kind, float(bound[row]), float(observed[row]), float(excess[row]))
            )
    if violations:
        _LOGGER.warning("%d bound violations among %d samples", len(violations), matrix.shape[0])
    if np.any(unresolved):
        _LOGGER.warning("%d samples without an analytic bound", int(np.count_nonzero(unresolved)))
    return ViolationReport(matrix.shape[0], tuple(violations), int(np.count_nonzero(unresolved)))


def _check_width(matrix: npt.NDArray[np.float64], n: int) -> None:
    if matrix.shape[1] > n:
        msg = f"Samples have {matrix.shape[1]} letters, more than n = {n}."
        raise InputError(msg)


def check_bounds2(
    samples: Samples,
    alpha1: Order | float,
    alpha2: Order | float,
    n: int,
    tolerance: float = 1e-9,
    *,
    upper: BoundFunc | None = None,
    lower: BoundFunc | None = None,
) -> ViolationReport:
    """Check lower_bound_fixed_n(h1) <= H_a2 <= upper_bound(h1) for every sample.

    :param upper: Replacement for the analytic upper bound as a function of h1.
    :param lower: Replacement for the analytic lower bound as a function of h1.
    """
    a1, a2 = check_orders(alpha1, alpha2)
    matrix = as_matrix(samples)
    _check_width(matrix, n)
    h1 = renyi_entropy_rows(matrix, a1)
    h2 = renyi_entropy_rows(matrix, a2)
    top = upper(h1) if upper is not None else upper_bound_batch(a1, a2, h1)[0]
    bottom = lower(h1) if lower is not None else lower_bound_fixed_n_batch(a1, a2, h1, n)[0]
    return _collect(matrix, h2, top, bottom, tolerance)


def check_bounds3(
    samples: Samples,
    alpha1: Order | float,
    alpha2: Order | float,
    alpha3: Order | float,
    n: int,
    tolerance: float = 1e-9,
    *,
    upper: BoundFunc3 | None = None,
    lower: BoundFunc3 | None = None,
) -> ViolationReport:
    """Check lower_bound3 <= H_a3 <= upper_bound3 at each sample's own (h1, h2)."""
    a1, a2, a3 = check_orders(alpha1, alpha2, alpha3)
    if n < 3:
        msg = f"Three-order checks need n >= 3, got {n}."
        raise InputError(msg)
    matrix = as_matrix(samples)
    _check_width(matrix, n)
    h1, h2, h3 = (renyi_entropy_rows(matrix, a) for a in (a1, a2, a3))
    top = upper(h1, h2) if upper is not None else upper_bound3_batch(a1, a2, a3, h1, h2, n)
    bottom = lower(h1, h2) if lower is not None else lower_bound3_batch(a1, a2, a3, h1, h2, n)
    return _collect(matrix, h3, top, bottom, tolerance)


def entropy_columns(
    batch: npt.NDArray[np.float64], orders: Iterable[Order | float]
) -> list[npt.NDArray[np.float64]]:
    """Entropies of each row of a sample batch, one array per order."""
    return [renyi_entropy_rows(batch, as_order(a)) for a in orders]
