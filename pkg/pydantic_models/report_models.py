from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator


class CorpusStats(BaseModel):
    """Ingest bookkeeping: how many papers and citations were read, kept, and why others were dropped."""

    raw_paper_count: int = Field(0, ge=0)
    kept_paper_count: int = Field(0, ge=0)
    raw_edge_count: int = Field(0, ge=0)
    kept_edge_count: int = Field(0, ge=0)
    dropped_incomplete: int = Field(0, ge=0)
    dropped_duplicate_ids: int = Field(0, ge=0)
    dropped_self_loops: int = Field(0, ge=0)
    dropped_duplicates: int = Field(0, ge=0)
    dropped_unknown_endpoint: int = Field(0, ge=0)
    flagged_out_of_range: int = Field(0, ge=0, description="Kept papers dated after 2017-12.")

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        merged = {k: v + getattr(other, k) for k, v in self.model_dump().items()}
        return CorpusStats(**merged)

    @model_validator(mode="after")
    def _consistent(self):
        if self.kept_paper_count > self.raw_paper_count or self.kept_edge_count > self.raw_edge_count:
            raise ValueError("kept counts cannot exceed raw counts")
        return self


class EvalReport(BaseModel):
    method_tag: str
    t: int
    T_f: int = Field(..., gt=0)
    pearson: float = Field(..., ge=-1.0, le=1.0)
    spearman: float = Field(..., ge=-1.0, le=1.0)
    precision: float = Field(..., ge=0.0, le=1.0)
    n_top: int = Field(..., ge=1)
    n_papers: int = Field(..., ge=2)
    convergence_ok: bool = True
    pearson_degenerate: bool = False
    spearman_degenerate: bool = False
    params: Dict[str, Any] = Field(default_factory=dict)

    def metric(self, name: str) -> float:
        return float(getattr(self, name))


class AgeBin(BaseModel):
    age_lo: int = Field(..., ge=0, description="Inclusive lower edge in months.")
    age_hi: int = Field(..., gt=0, description="Exclusive upper edge in months.")
    count: int = Field(0, ge=0, description="Real top papers in this bin.")
    detected: int = Field(0, ge=0)
    rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    rate_defined: bool = False
    mean_delta_r: Optional[float] = None


class AgeBinStats(BaseModel):
    method_tag: str
    bin_width: int = Field(60, ge=1)
    n_top: int = Field(..., ge=1)
    bins: List[AgeBin]

    @property
    def detected_total(self) -> int:
        return sum(b.detected for b in self.bins)


class SweepCell(BaseModel):
    tau: float
    alpha: float
    report: EvalReport


class SweepSurface(BaseModel):
    method_tag: str
    metrics: List[str]
    cells: List[SweepCell]
    best: Dict[str, SweepCell]


class TimeAveragedCurve(BaseModel):
    method_tag: str
    times: List[int]
    T_f_list: List[int]
    # metric -> one value per entry of T_f_list
    curves: Dict[str, List[float]]
    # metric -> chosen (tau, alpha) per T_f, when parameters were optimized per target metric
    chosen_params: Dict[str, List[Optional[Dict[str, float]]]] = Field(default_factory=dict)
    parameter_selection: str = "fixed"
