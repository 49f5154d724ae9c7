"""Deployment value type: one sampled realization of BS and UE positions."""

from dataclasses import dataclass

import numpy as np

from src.schemas.network import Tier

# Tier codes stored in Deployment.bs_tier
TIER_CODES = {Tier.MACRO: 0, Tier.SMALL: 1}


@dataclass(frozen=True)
class BaseStation:
    position: tuple[float, float]
    tier: Tier
    tx_power_dbm: float
    bias_db: float


@dataclass(frozen=True, eq=False)
class Deployment:
    """
    BS and UE positions on the toroidal window, stored column-wise.

    Macro cells come first in the BS ordering, then small cells.
    """

    window_side: float
    bs_positions: np.ndarray    # (B, 2) meters
    bs_tier: np.ndarray         # (B,) int8 tier code
    bs_tx_power_dbm: np.ndarray # (B,)
    bs_bias_db: np.ndarray      # (B,)
    ue_positions: np.ndarray    # (U, 2) meters

    def __post_init__(self) -> None:
        for arr in (self.bs_positions, self.bs_tier, self.bs_tx_power_dbm,
                    self.bs_bias_db, self.ue_positions):
            arr.setflags(write=False)

    @property
    def num_bs(self) -> int:
        return int(self.bs_positions.shape[0])

    @property
    def num_ues(self) -> int:
        return int(self.ue_positions.shape[0])

    @property
    def is_small(self) -> np.ndarray:
        """Boolean mask of small-tier BSs."""
        return self.bs_tier == TIER_CODES[Tier.SMALL]

    @property
    def bs_list(self) -> list[BaseStation]:
        """Ordered BS records."""
        tiers = {code: tier for tier, code in TIER_CODES.items()}
        return [
            BaseStation(
                position=(float(pos[0]), float(pos[1])),
                tier=tiers[int(code)],
                tx_power_dbm=float(power),
                bias_db=float(bias),
            )
            for pos, code, power, bias in zip(
                self.bs_positions, self.bs_tier, self.bs_tx_power_dbm, self.bs_bias_db
            )
        ]

    def tier_counts(self) -> dict[Tier, int]:
        small = int(np.count_nonzero(self.is_small))
        return {Tier.MACRO: self.num_bs - small, Tier.SMALL: small}

    def bias_vector(self, small_bias_db: float) -> np.ndarray:
        """Per-BS DL bias with the small tier set to small_bias_db and macros at 0 dB."""
        return np.where(self.is_small, float(small_bias_db), 0.0)

    def same_as(self, other: "Deployment") -> bool:
        """Exact equality of every array."""
        return (
            self.window_side == other.window_side
            and np.array_equal(self.bs_positions, other.bs_positions)
            and np.array_equal(self.bs_tier, other.bs_tier)
            and np.array_equal(self.bs_tx_power_dbm, other.bs_tx_power_dbm)
            and np.array_equal(self.bs_bias_db, other.bs_bias_db)
            and np.array_equal(self.ue_positions, other.ue_positions)
        )
