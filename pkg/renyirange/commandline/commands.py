"""Handlers of the command line subcommands.

Every handler takes the merged argument dictionary and returns the exit code.
Errors are raised as ``RenyiRangeError`` and mapped to exit codes by the caller.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Any

import numpy as np
import polars as pl

from renyirange.const import EXIT_OK, EXIT_VIOLATIONS
from renyirange.core.entropy import LogBase, ProbVector, renyi_entropy
from renyirange.diagram.three import BoundQuery3, SurfaceKind, lower_bound3, surface_mesh, upper_bound3
from renyirange.diagram.two import BoundQuery2, boundary_curve, lower_bound, upper_bound
from renyirange.errors import DomainError, InputError
from renyirange.util.units import convert_base
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

from .models import (
    BoundRecord,
    DiagramPoint,
    DiagramReport,
    EntropyRecord,
    EntropyReport,
    EnvelopeBin,
    OutputFormat,
    Side,
    VerifyReport,
    ViolationRecord,
    WitnessModel,
)
from .output import bound_to_csv, emit, records_to_csv, render_curve_svg, report_to_json

if TYPE_CHECKING:
    from collections.abc import Callable
    from pathlib import Path

    from renyirange.core.entropy import Order
    from renyirange.diagram.two import BoundResult

_LOGGER = logging.getLogger(__name__)


def _reject_svg(args: dict[str, Any]) -> None:
    if args["format"] is OutputFormat.SVG:
        msg = f"SVG output is only available for the curve command, not '{args['command']}'."
        raise InputError(msg)


def _check_order_count(orders: list[Order], *counts: int) -> None:
    if len(orders) not in counts:
        msg = f"Field 'orders' needs {' or '.join(map(str, counts))} orders, got {len(orders)}."
        raise InputError(msg)


def read_distribution(dist: str | Path) -> ProbVector:
    """Read a distribution given inline as comma separated values or as a CSV file.

    A CSV file needs a header row; the column ``p`` is used when present,
    otherwise the first column.
    """
    if isinstance(dist, str):
        values = []
        for position, token in enumerate(dist.split(",")):
            try:
                values.append(float(token))
            except ValueError as exc:
                msg = f"Field 'dist' entry {position}: cannot parse '{token.strip()}' as a probability."
                raise InputError(msg) from exc
        return ProbVector(np.array(values))

    try:
        frame = pl.read_csv(dist)
        column = "p" if "p" in frame.columns else frame.columns[0]
        probs = frame[column].cast(pl.Float64).to_numpy()
    except (pl.exceptions.ComputeError, pl.exceptions.InvalidOperationError, pl.exceptions.NoDataError) as exc:
        msg = f"Field 'dist': cannot read probabilities from {dist}."
        raise InputError(msg) from exc
    return ProbVector(probs)


def cmd_entropy(args: dict[str, Any]) -> int:
    """Print the entropy of a distribution for each requested order."""
    _reject_svg(args)
    p = read_distribution(args["dist"])
    base: LogBase = args["base"]
    records = [
        EntropyRecord(order=str(a), value=renyi_entropy(p, a).to(base).value, base=base.value)
        for a in args["orders"]
    ]
    if args["format"] is OutputFormat.JSON:
        text = report_to_json(EntropyReport(probs=p.probs.tolist(), entropies=records))
    else:
        text = records_to_csv(records, EntropyRecord)
    emit(text, args["output"])
    return EXIT_OK


def _witness(result: BoundResult) -> WitnessModel | None:
    if result.witness is None:
        return None
    return WitnessModel(supports=list(result.witness.supports), weights=list(result.witness.weights))


def cmd_bound(args: dict[str, Any]) -> int:
    """Print a tight bound on the last entropy given the others.

    The fixed entropies are read in the report base.
    """
    _reject_svg(args)
    orders: list[Order] = args["orders"]
    _check_order_count(orders, 2, 3)
    values: list[float] = args["h"]
    if len(values) != len(orders) - 1:
        msg = f"Field 'h' needs {len(orders) - 1} values for {len(orders)} orders, got {len(values)}."
        raise InputError(msg)

    base: LogBase = args["base"]
    side = Side(args["side"])
    h = [convert_base(v, base, LogBase.E) for v in values]
    if len(orders) == 2:
        query2 = BoundQuery2(orders[0], orders[1], h[0], args["n"])
        result = upper_bound(query2) if side is Side.UPPER else lower_bound(query2)
    else:
        query3 = BoundQuery3(orders[0], orders[1], orders[2], h[0], h[1], args["n"])
        result = upper_bound3(query3) if side is Side.UPPER else lower_bound3(query3)

    record = BoundRecord(
        orders=[str(a) for a in orders],
        h=values,
        n=args["n"],
        side=side,
        base=base.value,
        bound=result.bound.to(base).value,
        attained=result.attained,
        witness=_witness(result),
    )
    _LOGGER.debug("Bound query answered: %s", record)
    text = report_to_json(record) if args["format"] is OutputFormat.JSON else bound_to_csv(record)
    emit(text, args["output"])
    return EXIT_OK


def _emit_diagram(report: DiagramReport, args: dict[str, Any]) -> None:
    if args["format"] is OutputFormat.SVG:
        text = render_curve_svg(report)
    elif args["format"] is OutputFormat.JSON:
        text = report_to_json(report)
    else:
        text = records_to_csv(report.points, DiagramPoint)
    emit(text, args["output"])


def cmd_curve(args: dict[str, Any]) -> int:
    """Export the closed boundary of the range of two entropies."""
    orders: list[Order] = args["orders"]
    _check_order_count(orders, 2)
    base: LogBase = args["base"]
    curve = boundary_curve(orders[0], orders[1], args["n"], args["samples"])
    frame = curve.to_frame().with_columns(
        convert_base(pl.col("h1"), LogBase.E, base), convert_base(pl.col("h2"), LogBase.E, base)
    )
    points = [DiagramPoint(**row) for row in frame.iter_rows(named=True)]
    report = DiagramReport(orders=[str(a) for a in orders], n=args["n"], base=base.value, points=points)
    _emit_diagram(report, args)
    return EXIT_OK


def cmd_surface(args: dict[str, Any]) -> int:
    """Export both boundary sheets of the range of three entropies as one mesh."""
    if args["format"] is OutputFormat.SVG:
        msg = "SVG rendering of surfaces is not supported, use csv or json."
        raise DomainError(msg)
    orders: list[Order] = args["orders"]
    _check_order_count(orders, 3)
    base: LogBase = args["base"]

    points: list[DiagramPoint] = []
    triangles: list[tuple[int, int, int]] = []
    for kind in (SurfaceKind.UPPER, SurfaceKind.LOWER):
        mesh = surface_mesh(orders[0], orders[1], orders[2], args["n"], kind, args["resolution"])
        offset = len(points)
        triangles.extend((a + offset, b + offset, c + offset) for a, b, c in mesh.triangles)
        frame = mesh.to_frame().with_columns(
            convert_base(pl.col(name), LogBase.E, base) for name in ("h1", "h2", "h3")
        )
        points.extend(DiagramPoint(**row, sheet=kind.value) for row in frame.iter_rows(named=True))

    report = DiagramReport(
        orders=[str(a) for a in orders], n=args["n"], base=base.value, points=points, triangles=triangles
    )
    _emit_diagram(report, args)
    return EXIT_OK


def _envelope_bins(frame: pl.DataFrame, base: LogBase) -> list[EnvelopeBin]:
    value = "h2" if "min_h2" in frame.columns else "h3"
    centers = ["h1_bin_center", "h2_bin_center"] if value == "h3" else ["h1_bin_center"]
    scaled = [*centers, f"min_{value}", f"max_{value}", "lower", "upper", "lower_gap", "upper_gap"]
    frame = frame.with_columns(convert_base(pl.col(name), LogBase.E, base) for name in scaled).rename(
        {f"min_{value}": "min_value", f"max_{value}": "max_value"}
    )
    return [EnvelopeBin.model_validate(row) for row in frame.iter_rows(named=True)]


def _violation_records(report: ViolationReport) -> list[ViolationRecord]:
    return [
        ViolationRecord(
            kind=v.kind.value,
            bound=v.bound,
            observed=v.observed,
            excess=v.excess,
            probs=" ".join(f"{float(p):.17g}" for p in v.probs.probs),
        )
        for v in report.violations
    ]


def _check_batch(args: dict[str, Any], n: int, batch: np.ndarray[Any, Any]) -> ViolationReport:
    orders: list[Order] = args["orders"]
    if len(orders) == 2:
        return check_bounds2(batch, orders[0], orders[1], n, args["tolerance"])
    return check_bounds3(batch, orders[0], orders[1], orders[2], n, args["tolerance"])


def _check_samples(args: dict[str, Any], cfg: SampleConfig) -> ViolationReport:
    """Sandwich check of every sample, merged over batches."""
    report = ViolationReport()
    for batch in sample_batches(cfg):
        report = report.merge(_check_batch(args, cfg.n, batch))
        _LOGGER.debug("Checked %d of %d samples", report.total_checked, cfg.total)
    return report


def _compare_lattice(args: dict[str, Any], cfg: SampleConfig) -> pl.DataFrame:
    """Empirical envelope of the lattice next to the analytic bounds."""
    orders: list[Order] = args["orders"]
    columns: list[list[np.ndarray[Any, Any]]] = [[] for _ in orders]
    for batch in sample_batches(cfg):
        for column, values in zip(columns, entropy_columns(batch, orders), strict=True):
            column.append(values)
    h = [np.concatenate(column) for column in columns]
    if len(orders) == 2:
        envelope = envelope_from_entropies(h[0], h[1], args["bin_width"])
        return compare_envelope(envelope, orders[0], orders[1], cfg.n, args["slack"], args["tolerance"])
    envelope = envelope3_from_entropies(h[0], h[1], h[2], args["bin_width"])
    return compare_envelope3(envelope, orders[0], orders[1], orders[2], cfg.n, args["slack"], args["tolerance"])


def cmd_verify(args: dict[str, Any]) -> int:
    """Check the analytic bounds against sampled distributions.

    Monte Carlo runs check every sample against its own bounds. Lattice runs
    compare the empirical envelope with the bounds bin by bin.
    """
    _reject_svg(args)
    orders: list[Order] = args["orders"]
    _check_order_count(orders, 2, 3)
    base: LogBase = args["base"]
    cfg = SampleConfig(
        n=args["n"],
        count=args["count"],
        seed=args["seed"],
        mode=args["mode"],
        lattice_resolution=args["lattice_resolution"],
        batch_size=args["batch_size"],
    )
    _LOGGER.info("Verifying orders %s on %d letters with %d %s samples", [str(a) for a in orders], cfg.n, cfg.total, cfg.mode.value)

    envelope: list[EnvelopeBin] | None = None
    if cfg.mode is SampleMode.LATTICE:
        envelope = _envelope_bins(_compare_lattice(args, cfg), base)
        report = ViolationReport(total_checked=cfg.total)
        ok = all(b.within_slack for b in envelope)
        _LOGGER.info("%d of %d envelope bins within slack", sum(b.within_slack for b in envelope), len(envelope))
    else:
        report = _check_samples(args, cfg)
        ok = report.ok
        _LOGGER.info("%d violations, %d unresolved", len(report.violations), report.unresolved)

    violations = _violation_records(report)
    if args["format"] is OutputFormat.JSON:
        text = report_to_json(
            VerifyReport(
                orders=[str(a) for a in orders],
                n=cfg.n,
                mode=cfg.mode.value,
                seed=cfg.seed if cfg.mode is SampleMode.MONTE_CARLO else None,
                total_checked=report.total_checked,
                tolerance=args["tolerance"],
                unresolved=report.unresolved,
                ok=ok,
                violations=violations,
                slack=args["slack"] if envelope is not None else None,
                envelope=envelope,
            )
        )
    elif envelope is not None:
        text = records_to_csv(envelope, EnvelopeBin)
    else:
        text = records_to_csv(violations, ViolationRecord)
    emit(text, args["output"])
    return EXIT_OK if ok else EXIT_VIOLATIONS


COMMANDS: dict[str, Callable[[dict[str, Any]], int]] = {
    "entropy": cmd_entropy,
    "bound": cmd_bound,
    "curve": cmd_curve,
    "surface": cmd_surface,
    "verify": cmd_verify,
}
