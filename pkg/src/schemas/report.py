"""Scenario report schemas: pooled distributions, percentile tables and gain tables."""

from typing import Optional

from pydantic import BaseModel, Field

from .network import NetworkConfig, UlPolicy


class PolicyReport(BaseModel):
    """Aggregated uplink statistics of one policy case across all drops."""

    name: str = Field(..., description="Case name")
    ul_policy: UlPolicy = Field(..., description="UL association policy")
    small_bias_db: float = Field(..., description="Small-cell DL bias in dB")

    ul_tx_power_dbm: list[float] = Field(..., description="Per-UE UL transmit power, pooled over drops")
    ul_sinr_db: list[float] = Field(..., description="Per-slot UL SINR samples, pooled over UEs and drops")
    ul_sinr_std_db: list[float] = Field(..., description="Per-UE SINR standard deviation over slots")
    ul_rate_bps: list[float] = Field(..., description="Per-UE mean UL rate")
    ul_interference_dbm: list[float] = Field(
        default_factory=list, description="Interference received at active BSs per slot"
    )

    mean_ues_per_cell: dict[str, dict[str, float]] = Field(
        ..., description="Mean attached UEs per cell, keyed by direction then tier"
    )
    decoupling_fraction: float = Field(..., ge=0, le=1, description="Share of UEs with UL cell != DL cell")
    outage_probability: float = Field(..., ge=0, le=1, description="Share of SINR samples below threshold")
    max_power_fraction: float = Field(..., ge=0, le=1, description="Share of UEs at maximum power")
    percentiles: dict[str, dict[str, float]] = Field(
        default_factory=dict, description="Percentile table, keyed by metric then level label"
    )
    drop_mean_stderr: dict[str, dict[str, float]] = Field(
        default_factory=dict,
        description="Mean of the per-drop means and its standard error, keyed by per-UE metric",
    )


class GainRow(BaseModel):
    """Rate gain of a test case over the baseline at one percentile."""

    preset: str
    baseline: str
    test: str
    percentile: float = Field(..., ge=0, le=1)
    gain_percent: float
    reference_percent: Optional[float] = Field(None, description="Analytical reference gain, if any")


class ReductionRow(BaseModel):
    """Reduction (baseline minus test) of a dB-valued metric at one percentile."""

    baseline: str
    test: str
    metric: str
    percentile: float = Field(..., ge=0, le=1)
    reduction_db: float


class ScenarioReport(BaseModel):
    """Everything a scenario run produces; serialized as report.json."""

    version: str
    master_seed: int
    num_drops: int
    config: NetworkConfig
    preset: Optional[str] = None
    policies: dict[str, PolicyReport]
    gains: list[GainRow] = Field(default_factory=list)
    reductions: list[ReductionRow] = Field(default_factory=list)
