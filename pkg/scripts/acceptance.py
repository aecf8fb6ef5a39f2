"""Run the desk-scale acceptance checks of renyirange through the library.

Usage: ``python scripts/acceptance.py [--only 1 2 ...] [--log-level INFO]``.
Exits non-zero when any selected check fails.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from typing import TYPE_CHECKING

import numpy as np

from renyirange.__main__ import init_logger
from renyirange.core.entropy import realize_mixture, renyi_entropy
from renyirange.core.vandermonde import (
    VandermondeInstance,
    determinant_scale,
    gen_vandermonde_det,
    orientation_determinants,
)
from renyirange.diagram.three import lower_bound3_batch
from renyirange.diagram.two import boundary_curve, lower_bound_approach, tail_witness
from renyirange.verify.oracle import (
    SampleConfig,
    SampleMode,
    ViolationReport,
    check_bounds2,
    check_bounds3,
    compare_envelope,
    compare_envelope3,
    entropy_columns,
    envelope3_from_entropies,
    envelope_from_entropies,
    sample_batches,
)

if TYPE_CHECKING:
    from collections.abc import Callable

    import numpy.typing as npt
    import polars as pl

_LOGGER = logging.getLogger(__name__)

SEED = 7
TOLERANCE = 1e-9


def _lattice_columns(n: int, resolution: int, orders: tuple[float, ...]) -> list[npt.NDArray[np.float64]]:
    """Entropies of every lattice point, one array per order."""
    cfg = SampleConfig(n, mode=SampleMode.LATTICE, lattice_resolution=resolution)
    chunks: list[list[npt.NDArray[np.float64]]] = [[] for _ in orders]
    for batch in sample_batches(cfg):
        for chunk, values in zip(chunks, entropy_columns(batch, orders), strict=True):
            chunk.append(values)
    return [np.concatenate(chunk) for chunk in chunks]


def _bins_ok(compared: pl.DataFrame, label: str) -> bool:
    bad = compared.height - int(compared["within_slack"].sum())
    _LOGGER.info("%s: %d of %d bins within slack", label, compared.height - bad, compared.height)
    return bad == 0


def check_curve_and_sandwich() -> bool:
    """Diagonal points of the n = 4 boundary and a 10^6 sample sandwich."""
    curve = boundary_curve(1.0, 2.0, 4, 200)
    diagonal = all(
        any(abs(h1 - math.log(k)) <= 1e-12 and abs(h2 - math.log(k)) <= 1e-12 for h1, h2 in curve.vertices)
        for k in range(1, 5)
    )
    _LOGGER.info("Boundary passes through U_1..U_4: %s", diagonal)

    report = ViolationReport()
    for batch in sample_batches(SampleConfig(4, count=10**6, seed=SEED)):
        report = report.merge(check_bounds2(batch, 1.0, 2.0, 4, TOLERANCE))
    _LOGGER.info("Checked %d samples, %d violations", report.total_checked, len(report.violations))
    return diagonal and report.ok


def check_upper_envelope() -> bool:
    """Lattice maxima on three letters against the upper bound."""
    ok = True
    for orders in ((1.0, 2.0), (0.5, 2.0), (1.0, math.inf)):
        h1, h2 = _lattice_columns(3, 300, orders)
        compared = compare_envelope(envelope_from_entropies(h1, h2, 0.01), *orders, 3, 5e-3, TOLERANCE)
        bad = compared.filter(~compared["upper_gap"].is_between(-TOLERANCE, 5e-3)).height
        _LOGGER.info("Orders %s: %d of %d bins off the upper bound", orders, bad, compared.height)
        ok = ok and bad == 0
    return ok


def check_lower_envelope() -> bool:
    """Lattice minima on three letters against the fixed-n lower bound."""
    h1, h2 = _lattice_columns(3, 300, (1.0, 2.0))
    compared = compare_envelope(envelope_from_entropies(h1, h2, 0.01), 1.0, 2.0, 3, 5e-3, TOLERANCE)
    return _bins_ok(compared, "Orders (1, 2) on three letters")


def check_asymptote() -> bool:
    """Fixed-n lower bounds approach the unbounded one, and the tail witness."""
    values = lower_bound_approach(2.0, 3.0, 2.0, [10**2, 10**3, 10**4, 10**5])
    _LOGGER.info("H_3 on U_n/U_1 at h1 = 2: %s", values.tolist())
    decreasing = bool(np.all(np.diff(values) < 0.0)) and bool(np.all(values > 1.5))
    close = abs(values[-1] - 1.5) < 0.05

    witness = realize_mixture(tail_witness(10**6, 0.5))
    half = renyi_entropy(witness, 0.5).nats
    quarter = renyi_entropy(witness, 0.25).nats
    _LOGGER.info("Tail witness on 10^6 letters: H_0.5 = %.6f, H_0.25 = %.6f", half, quarter)
    tail = abs(half - 2.0 * math.log(2.0)) < 1e-3 and quarter > 5.0
    return decreasing and close and tail


def check_vandermonde() -> bool:
    """Determinant positivity, planted duplicates and the factorization identity."""
    rng = np.random.Generator(np.random.PCG64(SEED))

    def instance(size: int) -> VandermondeInstance:
        xs = 0.2 + np.cumsum(0.2 + rng.uniform(0.0, 0.5, size))
        betas = -1.0 + np.cumsum(0.2 + rng.uniform(0.0, 1.0, size))
        return VandermondeInstance(tuple(xs), tuple(betas))

    positive = sum(gen_vandermonde_det(instance(int(rng.integers(1, 6)))) > 0.0 for _ in range(1000))

    planted = 0
    for _ in range(100):
        v = instance(int(rng.integers(2, 6)))
        xs = list(v.xs)
        xs[1] = xs[0]
        dup = VandermondeInstance(tuple(xs), v.betas)
        planted += abs(gen_vandermonde_det(dup)) <= 1e-12 * determinant_scale(dup)

    agree = 0
    for _ in range(500):
        raw = np.sort(rng.uniform(0.05, 1.0, 4)) + 0.2 * np.arange(4)
        direct, factored = orientation_determinants((raw / raw.sum()).tolist(), (0.5, 2.0, 3.0))
        agree += math.isclose(direct, factored, rel_tol=1e-8)
    _LOGGER.info("Positive %d/1000, planted zero %d/100, factorization %d/500", positive, planted, agree)
    return positive == 1000 and planted == 100 and agree == 500


def check_three_order_sandwich() -> bool:
    """10^5 samples on 4 and 6 letters inside the three-order bounds."""
    ok = True
    for n in (4, 6):
        report = ViolationReport()
        for batch in sample_batches(SampleConfig(n, count=10**5, seed=SEED)):
            report = report.merge(check_bounds3(batch, 1.0, 2.0, 3.0, n, TOLERANCE))
        _LOGGER.info(
            "n = %d: %d violations, %d unresolved of %d", n, len(report.violations), report.unresolved, report.total_checked
        )
        ok = ok and report.ok

        batch = next(iter(sample_batches(SampleConfig(n, count=2000, seed=SEED))))
        h1, h2 = entropy_columns(batch, (1.0, 2.0))
        here = lower_bound3_batch(1.0, 2.0, 3.0, h1, h2, n)
        wider = lower_bound3_batch(1.0, 2.0, 3.0, h1, h2, n + 3)
        same = bool(np.allclose(here, wider, rtol=0.0, atol=1e-12, equal_nan=True))
        _LOGGER.info("n = %d: lower bound agrees with n + 3: %s", n, same)
        ok = ok and same
    return ok


def check_three_order_envelope() -> bool:
    """Lattice envelope on five letters against both three-order bounds."""
    h1, h2, h3 = _lattice_columns(5, 80, (1.0, 2.0, 3.0))
    envelope = envelope3_from_entropies(h1, h2, h3, 0.01)
    compared = compare_envelope3(envelope, 1.0, 2.0, 3.0, 5, 2e-2, TOLERANCE)
    return _bins_ok(compared, "Orders (1, 2, 3) on five letters")


CHECKS: dict[int, Callable[[], bool]] = {
    1: check_curve_and_sandwich,
    2: check_upper_envelope,
    3: check_lower_envelope,
    4: check_asymptote,
    5: check_vandermonde,
    6: check_three_order_sandwich,
    7: check_three_order_envelope,
}


def main() -> int:
    """Run the selected checks and return the number of failures."""
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--only", type=int, nargs="+", choices=sorted(CHECKS), default=sorted(CHECKS))
    parser.add_argument("-l", "--log-level", default="INFO", type=str)
    args = parser.parse_args()
    init_logger(getattr(logging, args.log_level.upper(), logging.INFO))

    failures = 0
    for number in args.only:
        start = time.perf_counter()
        passed = CHECKS[number]()
        failures += not passed
        _LOGGER.info(
            "Check %d (%s): %s in %.1f s",
            number,
            CHECKS[number].__name__,
            "PASS" if passed else "FAIL",
            time.perf_counter() - start,
        )
    return failures


if __name__ == "__main__":
    sys.exit(main())
