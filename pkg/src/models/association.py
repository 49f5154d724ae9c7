"""Association value types."""

from dataclasses import dataclass

import numpy as np

from src.schemas.network import Direction, Tier, UlPolicy


@dataclass(frozen=True, eq=False)
class AssociationMap:
    """Per-UE DL and UL serving cell indices for one policy."""

    dl_cell: np.ndarray  # (U,) int
    ul_cell: np.ndarray  # (U,) int
    policy: UlPolicy
    num_cells: int

    def __post_init__(self) -> None:
        self.dl_cell.setflags(write=False)
        self.ul_cell.setflags(write=False)

    @property
    def num_ues(self) -> int:
        return int(self.dl_cell.shape[0])

    def cells(self, direction: Direction) -> np.ndarray:
        return self.dl_cell if direction is Direction.DL else self.ul_cell


@dataclass(frozen=True, eq=False)
class CellLoad:
    """Attached-UE counts per BS plus per-tier totals for one direction."""

    direction: Direction
    counts: np.ndarray  # (B,) attached UEs per BS
    tier_attached: dict[Tier, int]
    tier_cells: dict[Tier, int]

    @property
    def tier_mean(self) -> dict[Tier, float]:
        """Mean attached UEs per cell of each tier; 0 for an empty tier."""
        return {
            tier: self.tier_attached[tier] / self.tier_cells[tier] if self.tier_cells[tier] else 0.0
            for tier in Tier
        }
