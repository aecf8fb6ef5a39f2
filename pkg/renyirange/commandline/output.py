"""Readers and writers for the command line reports.

CSV files always carry a header row; floats are written with 17 significant
digits, so reading a report back gives the same records.
"""

from __future__ import annotations

import io
import logging
import math
import sys
from typing import TYPE_CHECKING, Any, TypeVar

import matplotlib as mpl
import polars as pl
from matplotlib.figure import Figure
from pydantic import BaseModel

from renyirange.core.entropy import LogBase
from renyirange.util.units import convert_base

from .models import BoundRecord, DiagramReport, Side, WitnessModel

if TYPE_CHECKING:
    from collections.abc import Sequence
    from pathlib import Path

_LOGGER = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

SVG_RC = {"svg.hashsalt": "renyirange", "svg.fonttype": "none"}
UNIT_NAMES = {LogBase.E: "nats", LogBase.TWO: "bits", LogBase.TEN: "dits"}


def emit(text: str, path: Path | None) -> None:
    """Write a report to a file, or to standard output when no path is given."""
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with path.open("w", encoding="utf-8", newline="\n") as out_file:
        out_file.write(text)
    _LOGGER.info("Report written to %s", path)


def records_to_csv(records: Sequence[BaseModel], model: type[BaseModel]) -> str:
    """Flat records as CSV text; columns that are empty in every row are left out."""
    rows = [record.model_dump(mode="json") for record in records]
    frame = pl.DataFrame(
        {name: [_format(row.get(name)) for row in rows] for name in model.model_fields}
    )
    if frame.height:
        frame = frame.select([name for name in frame.columns if frame[name].null_count() < frame.height])
    return frame.write_csv()


def records_from_csv(text: str, model: type[M]) -> list[M]:
    """Parse CSV text written by ``records_to_csv``."""
    frame = pl.read_csv(io.BytesIO(text.encode("utf-8")), infer_schema_length=0)
    return [model.model_validate({k: v for k, v in row.items() if v is not None}) for row in frame.iter_rows(named=True)]


def read_records(path: Path, model: type[M]) -> list[M]:
    """Read a CSV report back into records."""
    return records_from_csv(path.read_text(encoding="utf-8"), model)


def report_to_json(report: BaseModel) -> str:
    """A report model as indented JSON text."""
    return report.model_dump_json(indent=2) + "\n"


def read_report(path: Path, model: type[M]) -> M:
    """Read a JSON report back into its model."""
    return model.model_validate_json(path.read_text(encoding="utf-8"))


def _format(value: Any) -> Any:
    """Floats as text with 17 significant digits, other values unchanged."""
    return f"{value:.17g}" if isinstance(value, float) else value


def _join(values: Sequence[Any]) -> str:
    return " ".join(str(_format(v)) for v in values)


def bound_to_row(record: BoundRecord) -> dict[str, Any]:
    """Flatten a bound record into one CSV row."""
    return {
        "orders": " ".join(record.orders),
        "h": _join(record.h),
        "n": record.n,
        "side": record.side.value,
        "base": record.base,
        "bound": _format(record.bound),
        "attained": record.attained,
        "witness_supports": _join(record.witness.supports) if record.witness else None,
        "witness_weights": _join(record.witness.weights) if record.witness else None,
    }


def bound_to_csv(record: BoundRecord) -> str:
    """A bound record as a one-row CSV."""
    row = bound_to_row(record)
    return pl.DataFrame({key: [value] for key, value in row.items()}).write_csv()


def bound_from_csv(text: str) -> BoundRecord:
    """Parse the CSV written by ``bound_to_csv``."""
    frame = pl.read_csv(io.BytesIO(text.encode("utf-8")), infer_schema_length=0)
    row = frame.row(0, named=True)
    witness = None
    if row.get("witness_supports"):
        witness = WitnessModel(
            supports=[int(k) for k in row["witness_supports"].split()],
            weights=[float(w) for w in row["witness_weights"].split()],
        )
    return BoundRecord(
        orders=row["orders"].split(),
        h=[float(v) for v in row["h"].split()],
        n=int(row["n"]) if row["n"] else None,
        side=Side(row["side"]),
        base=row["base"],
        bound=float(row["bound"]),
        attained=row["attained"] == "true",
        witness=witness,
    )


def _axis_label(order: str, base: LogBase) -> str:
    subscript = r"\infty" if order == "inf" else order
    return f"$H_{{{subscript}}}$ [{UNIT_NAMES[base]}]"


def render_curve_svg(report: DiagramReport) -> str:
    """Draw the closed range of two entropies as an SVG document.

    The region is filled and stroked, the diagonal is dashed and the uniform
    distributions U_1..U_n on it are marked. Identical reports give
    byte-identical files.
    """
    base = LogBase(report.base)
    h1 = [p.h1 for p in report.points]
    h2 = [p.h2 for p in report.points]
    top = convert_base(math.log(report.n), LogBase.E, base)
    diagonal = [convert_base(math.log(k), LogBase.E, base) for k in range(1, report.n + 1)]

    with mpl.rc_context(SVG_RC):
        fig = Figure(figsize=(5.0, 5.0))
        ax = fig.add_subplot()
        ax.fill(h1, h2, color="tab:blue", alpha=0.25, linewidth=0.0)
        ax.plot([*h1, h1[0]], [*h2, h2[0]], color="tab:blue", linewidth=1.5)
        ax.plot([0.0, top], [0.0, top], linestyle="--", color="grey", linewidth=1.0)
        ax.plot(diagonal, diagonal, linestyle="none", marker="o", markersize=3.0, color="black")
        ax.set_xlim(0.0, top)
        ax.set_ylim(0.0, top)
        ax.set_aspect("equal")
        ax.set_xlabel(_axis_label(report.orders[0], base))
        ax.set_ylabel(_axis_label(report.orders[1], base))
        ax.set_title(f"n = {report.n}")
        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    return buffer.getvalue()
