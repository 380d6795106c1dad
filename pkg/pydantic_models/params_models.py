from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class _Params(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class PageRankParams(_Params):
    """Damping and stopping rule for PageRank power iteration."""

    c: float = Field(0.5, gt=0.0, lt=1.0, description="Probability of following a reference rather than teleporting.")
    tol: float = Field(1e-12, gt=0.0, description="Stop when the L1 change between iterates falls below this.")
    max_iter: int = Field(1000, ge=1, description="Iteration cap; hitting it clears the convergence flag.")


class CiteRankParams(_Params):
    tau: float = Field(24.0, gt=0.0, description="Seed decay timescale in months.")
    alpha: float = Field(0.5, ge=0.0, lt=1.0, description="Probability of following a reference at each step.")
    tol: float = Field(1e-12, gt=0.0, description="Relative L1 truncation threshold for the path series.")
    max_terms: int = Field(100, ge=1)


class AgeDiffusionParams(_Params):
    tau: float = Field(24.0, gt=0.0, description="Decay timescale in months, shared by the seed and the transfer weights.")
    alpha: float = Field(0.74, ge=0.0, lt=1.0, description="Follow probability at the first step.")
    step_decay_base: float = Field(10.0, gt=1.0, description="alpha_i = alpha / base**(i - 1).")
    tol: float = Field(1e-12, gt=0.0)
    max_terms: int = Field(30, ge=1)


class RescaleParams(_Params):
    delta_p: int = Field(1000, ge=2, description="Number of papers in the averaging window.")
    pagerank: PageRankParams = Field(default_factory=PageRankParams)

    @model_validator(mode="after")
    def _even_window(self):
        if self.delta_p % 2:
            raise ValueError(f"delta_p must be even, got {self.delta_p}")
        return self


class SynthParams(_Params):
    n_papers: int = Field(5000, ge=1)
    papers_per_month: int = Field(25, ge=1)
    refs_per_paper: int = Field(10, ge=0, description="m: references drawn by each new paper.")
    fitness_distribution: Literal["lognormal", "constant"] = "lognormal"
    fitness_mu: float = 0.0
    fitness_sigma: float = Field(1.0, ge=0.0)
    theta: float = Field(24.0, gt=0.0, description="Relevance decay timescale in months.")
    start_month: int = Field(804, ge=0, le=4000, description="Month stamp of the first batch (default 1960-01).")
    seed: int = Field(42, ge=0)

    @model_validator(mode="after")
    def _enough_papers(self):
        if self.n_papers < self.refs_per_paper + 1:
            raise ValueError(f"n_papers ({self.n_papers}) must be at least refs_per_paper + 1 ({self.refs_per_paper + 1})")
        return self
