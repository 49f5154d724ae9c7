"""Uplink engine value types: slot state, per-UE metrics and drop results."""

from dataclasses import dataclass

import numpy as np

from src.schemas.network import Direction, Tier
from src.schemas.presets import PolicyCase

from .association import AssociationMap, CellLoad

# Marker for a BS with no UL-attached UE in active_ue
NO_UE = -1


@dataclass(frozen=True, eq=False)
class UplinkSlotState:
    """Who transmits on the reference block this slot, at what power, through which fading."""

    active_ue: np.ndarray      # (B,) UE index or NO_UE
    tx_power_dbm: np.ndarray   # (U,)
    fading: np.ndarray         # (U, B) linear power gain

    @property
    def active_cells(self) -> np.ndarray:
        return np.flatnonzero(self.active_ue != NO_UE)


@dataclass(frozen=True, eq=False)
class UplinkMetricsPerUE:
    """
    Per-UE uplink metrics for one drop, stored as arrays indexed by UE.

    SINR samples are kept flat with the owning UE index alongside, so
    variable-length per-UE series need no ragged containers.

    observed_sinr_db holds, for every regular slot and every UE, the SINR the
    UE gets at its UL cell against that slot's transmitters in other cells.
    It equals the recorded sample whenever the UE is the active one, and it
    gives every UE the same number of samples whatever its cell's load.
    sinr_std_db is its population std over slots.
    """

    sinr_db: np.ndarray           # (S,) every recorded SINR sample
    sinr_ue: np.ndarray           # (S,) UE index of each sample
    sinr_slot: np.ndarray         # (S,) slot index of each sample
    tx_power_dbm: np.ndarray      # (U,)
    mean_rate_bps: np.ndarray     # (U,)
    observed_sinr_db: np.ndarray  # (T, U), T = slots_per_drop
    sinr_std_db: np.ndarray       # (U,)

    @property
    def num_ues(self) -> int:
        return int(self.tx_power_dbm.shape[0])

    def sinr_db_series(self, ue: int) -> np.ndarray:
        """SINR samples of one UE in slot order."""
        return self.sinr_db[self.sinr_ue == ue]

    def observed_series(self, ue: int) -> np.ndarray:
        """Per-slot observed SINR of one UE, one value per regular slot."""
        return self.observed_sinr_db[:, ue]

    def samples_per_ue(self) -> np.ndarray:
        return np.bincount(self.sinr_ue, minlength=self.num_ues)


@dataclass(frozen=True, eq=False)
class PolicyDropResult:
    """Everything one policy case produced in one drop."""

    case: PolicyCase
    association: AssociationMap
    serving_loss_db: np.ndarray    # (U,) UL serving coupling loss
    metrics: UplinkMetricsPerUE
    interference_dbm: np.ndarray   # (K,) per active BS per slot, zero-interference slots skipped
    dl_load: CellLoad
    ul_load: CellLoad
    decoupling_fraction: float
    max_power_fraction: float

    def load(self, direction: Direction) -> CellLoad:
        return self.dl_load if direction is Direction.DL else self.ul_load


@dataclass(frozen=True, eq=False)
class DropResult:
    """One Monte Carlo realization evaluated under every requested case."""

    drop_index: int
    num_ues: int
    tier_counts: dict[Tier, int]
    cases: dict[str, PolicyDropResult]
