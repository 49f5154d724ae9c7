"""Pydantic schemas for configuration, presets and reports."""

from .network import Direction, NetworkConfig, RateEstimator, Tier, UlPolicy
from .presets import PolicyCase, ScenarioPreset, SmallCellProfile
from .report import GainRow, PolicyReport, ReductionRow, ScenarioReport

__all__ = [
    "Direction",
    "GainRow",
    "NetworkConfig",
    "PolicyCase",
    "PolicyReport",
    "RateEstimator",
    "ReductionRow",
    "ScenarioPreset",
    "ScenarioReport",
    "SmallCellProfile",
    "Tier",
    "UlPolicy",
]
