"""
Simulation services: deployment sampling, channel, association, uplink
evaluation, statistics and scenario orchestration.
"""

from .association import associate, associate_dl, associate_ul, decoupling_fraction, load_by_cell
from .channel import build_link_state, path_loss_db, sample_fading, sample_shadowing_db, thermal_noise_mw
from .metrics import (
    empirical_cdf,
    merge_drop_results,
    outage_probability,
    percentile,
    power_reduction_db,
    rate_gain_percent,
    sinr_std_summary,
)
from .network import sample_deployment, toroidal_distance
from .presets import PRESETS, get_preset
from .runner import ScenarioRunner, compare_policies, run_scenario
from .uplink import run_drop, schedule_slot, transmit_power_dbm, uplink_rate_bps, uplink_sinr

__all__ = [
    "PRESETS",
    "ScenarioRunner",
    "associate",
    "associate_dl",
    "associate_ul",
    "build_link_state",
    "compare_policies",
    "decoupling_fraction",
    "empirical_cdf",
    "get_preset",
    "load_by_cell",
    "merge_drop_results",
    "outage_probability",
    "path_loss_db",
    "percentile",
    "power_reduction_db",
    "rate_gain_percent",
    "run_drop",
    "run_scenario",
    "sample_deployment",
    "sample_fading",
    "sample_shadowing_db",
    "schedule_slot",
    "sinr_std_summary",
    "thermal_noise_mw",
    "toroidal_distance",
    "transmit_power_dbm",
    "uplink_rate_bps",
    "uplink_sinr",
]
