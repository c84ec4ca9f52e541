from typing import Any, Dict, List, Optional
import json

from pydantic import BaseModel, Field

from ..config import TOOL_VERSION
from ..core.bounds import BoundReport, BoundRow
from ..core.pointset import PointSet
from ..engine.search_engine import ExtremalRecord
from ..generator.constructions import ConstructionRecord

SCHEMA_VERSION = 1


class BoundRowModel(BaseModel):
    name: str
    kind: str
    slope: int
    verdict: str
    computed: Optional[int] = None
    required: Optional[int] = None
    slack: Optional[int] = None
    hypothesis: str = ""

    @classmethod
    def from_row(cls, row: BoundRow) -> "BoundRowModel":
        return cls(
            name=row.name,
            kind=row.kind.value,
            slope=row.slope,
            verdict=row.verdict.value,
            computed=row.computed,
            required=row.required,
            slack=row.slack,
            hypothesis=row.hypothesis,
        )


class ReportDocument(BaseModel):
    """Machine-readable result of one command.

    Carries the input digest and every parameter the run depends on, and nothing
    that varies between runs (no timestamps, no worker counts), so equal inputs
    give byte-identical documents.
    """
    schema_version: int = SCHEMA_VERSION
    tool_version: str = TOOL_VERSION
    command: str
    input_digest: Optional[str] = None
    parameters: Dict[str, Any] = Field(default_factory=dict)
    results: Dict[str, Any] = Field(default_factory=dict)
    bounds: List[BoundRowModel] = Field(default_factory=list)
    witnesses: Dict[str, List[List[int]]] = Field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.model_validate(json.loads(text))

    def add_witness(self, name: str, A: PointSet) -> None:
        self.witnesses[name] = A.to_lists()

    def witness(self, name: str) -> PointSet:
        """The named witness as a PointSet."""
        return PointSet.from_points(self.witnesses[name])

    def failed(self) -> bool:
        return any(row.verdict == "FAIL" for row in self.bounds)


def bound_rows(report: BoundReport) -> List[BoundRowModel]:
    return [BoundRowModel.from_row(row) for row in report.rows]


def bound_results(report: BoundReport) -> Dict[str, Any]:
    s = report.summary
    return {
        "size": s.size,
        "dim": s.dim,
        "rank": s.rank,
        "cosets": s.cosets,
        "sum_of_dilates": report.computed,
        "line_cover": s.line_cover,
        "hyperplane_cover": s.hyperplane_cover,
    }


def search_parameters(record: ExtremalRecord) -> Dict[str, Any]:
    return {
        "mode": record.mode.value,
        "d": record.d,
        "q": record.q,
        "n": record.n,
        "grid": record.grid,
        "samples": record.samples,
        "seed": record.seed,
    }


def search_results(record: ExtremalRecord) -> Dict[str, Any]:
    return {
        "min_value": record.min_value,
        "floor": record.floor,
        "classes_examined": record.classes_examined,
        "rank_deficient": record.rank_deficient,
        "construction_value": record.construction_value,
        "slack": {row.name: {"slope": row.slope, "slack": row.slack} for row in record.slack},
    }


def construction_results(record: ConstructionRecord) -> Dict[str, Any]:
    return {
        "size": record.size,
        "sum_of_dilates": record.computed,
        "upper_bound": record.upper_bound,
        "slack_to_upper": record.slack_to_upper,
        "identity_value": record.identity_value,
    }
