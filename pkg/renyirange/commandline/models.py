"""Record models for the command line reports."""
from __future__ import annotations

from enum import Enum
from typing import Annotated

from pydantic import BaseModel, ConfigDict


class OutputFormat(str, Enum):
    """Report format."""

    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class Side(str, Enum):
    """Side of the range a bound query asks for."""

    UPPER = "upper"
    LOWER = "lower"


class EntropyRecord(BaseModel):
    """One entropy of the queried distribution."""

    order: str
    value: float
    base: str


class EntropyReport(BaseModel):
    """Entropies of one distribution."""

    probs: Annotated[list[float], "Point probabilities after normalization."]
    entropies: list[EntropyRecord]


class WitnessModel(BaseModel):
    """Uniform mixture attaining a bound."""

    supports: list[int]
    weights: list[float]


class BoundRecord(BaseModel):
    """Answer to a bound query."""

    orders: list[str]
    h: Annotated[list[float], "Fixed entropies, in the report base."]
    n: int | None = None
    side: Side
    base: str
    bound: float
    attained: bool
    witness: WitnessModel | None = None


class DiagramPoint(BaseModel):
    """Boundary vertex of an information diagram."""

    h1: float
    h2: float
    h3: float | None = None
    segment_label: str
    sheet: str | None = None


class DiagramReport(BaseModel):
    """Boundary of the range of two or three entropies."""

    orders: list[str]
    n: int
    base: str
    points: list[DiagramPoint]
    triangles: Annotated[list[tuple[int, int, int]], "Mesh triangles, indices into points."] = []


class ViolationRecord(BaseModel):
    """A sample outside the analytic range."""

    kind: str
    bound: float
    observed: float
    excess: float
    probs: str


class EnvelopeBin(BaseModel):
    """Empirical envelope bin next to the analytic bounds."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    h1_bin_center: float
    h2_bin_center: float | None = None
    min_value: float
    max_value: float
    sample_count: int
    lower: float
    upper: float
    lower_gap: float
    upper_gap: float
    within_slack: bool


class VerifyReport(BaseModel):
    """Outcome of a verification run."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    orders: list[str]
    n: int
    mode: str
    seed: int | None = None
    total_checked: int
    tolerance: float
    unresolved: int
    ok: bool
    violations: list[ViolationRecord]
    slack: float | None = None
    envelope: list[EnvelopeBin] | None = None
