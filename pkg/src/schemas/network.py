"""
Network scenario configuration schema.

Every field has a default, so an empty config file runs the reference
scenario: picocells at 30 dBm, four per macro, no bias.
"""

from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class Tier(str, Enum):
    """Base station tiers."""
    MACRO = "macro"
    SMALL = "small"


class UlPolicy(str, Enum):
    """Uplink cell association policies."""
    COUPLED = "coupled"
    DECOUPLED = "decoupled"


class Direction(str, Enum):
    """Link directions."""
    DL = "dl"
    UL = "ul"


class RateEstimator(str, Enum):
    """How per-slot SINR samples turn into a spectral efficiency."""
    MEAN_LOG = "mean_log"
    LOG_MEAN = "log_mean"


class NetworkConfig(BaseModel):
    """Full scenario parameterization: geometry, radio, power control and runtime."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    # Geometry and densities
    window_side: float = Field(2000.0, gt=0, description="Side of the square toroidal window in meters")
    macro_density: float = Field(5.0, ge=0, description="Macro BSs per km²")
    small_density: float = Field(20.0, ge=0, description="Small cell BSs per km² (4 per macro)")
    ue_density: float = Field(330.0, ge=0, description="UEs per km²")

    # Transmit powers and DL selection bias
    macro_power_dbm: float = Field(46.0, description="Macro BS transmit power in dBm")
    small_power_dbm: float = Field(30.0, description="Small cell transmit power in dBm")
    ue_max_power_dbm: float = Field(20.0, description="UE maximum transmit power in dBm")
    small_bias_db: float = Field(0.0, description="DL selection bias of the small tier in dB")

    # Channel
    pathloss_exponent: float = Field(3.5, gt=2, description="Path loss exponent")
    pathloss_intercept_db: float = Field(40.75, description="Path loss at 1 m in dB (free space, 2.6 GHz)")
    min_distance_m: float = Field(1.0, gt=0, description="Distance clamp in meters")
    shadowing_std_db: float = Field(8.0, ge=0, description="Lognormal shadowing std in dB")
    noise_figure_db: float = Field(5.0, description="BS receiver noise figure in dB")

    # Spectrum
    bandwidth_hz: float = Field(20e6, gt=0, description="System bandwidth in Hz")
    num_blocks: int = Field(100, ge=1, description="Number of frequency blocks")

    # Fractional power control
    pc_p0_dbm: float = Field(-78.0, description="Power control target P0 in dBm")
    pc_alpha: float = Field(0.8, ge=0, le=1, description="Fractional path loss compensation factor")

    # Runtime controls
    num_drops: int = Field(200, ge=1, description="Number of Monte Carlo drops")
    slots_per_drop: int = Field(50, ge=1, description="Scheduling slots per drop")
    master_seed: int = Field(2015, ge=0, lt=2**64, description="Master seed (64-bit)")
    ul_policy: UlPolicy = Field(UlPolicy.DECOUPLED, description="Configured UL association policy")

    # Variants
    decoupled_dl_bias: bool = Field(False, description="Apply small_bias_db to the DL under the decoupled policy")
    rate_estimator: RateEstimator = Field(RateEstimator.MEAN_LOG, description="Slot averaging of spectral efficiency")
    spectral_efficiency_cap: Optional[float] = Field(None, gt=0, description="Cap on bits/s/Hz per slot; None = unbounded")
    outage_threshold_db: float = Field(-5.0, description="SINR threshold for outage statistics in dB")

    @property
    def area_km2(self) -> float:
        """Window area in km²."""
        return (self.window_side / 1000.0) ** 2

    @property
    def block_bandwidth_hz(self) -> float:
        """Width of one frequency block in Hz."""
        return self.bandwidth_hz / self.num_blocks

    def tier_power_dbm(self, tier: Tier) -> float:
        """Transmit power of a tier."""
        return self.macro_power_dbm if tier is Tier.MACRO else self.small_power_dbm

    def tier_bias_db(self, tier: Tier) -> float:
        """DL selection bias of a tier; the macro tier is never biased."""
        return 0.0 if tier is Tier.MACRO else self.small_bias_db
