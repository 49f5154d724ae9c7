"""Large-scale link state of one drop."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class LinkState:
    """Per (UE, BS) large-scale loss in dB; coupling loss = path loss - shadowing."""

    pathloss_db: np.ndarray       # (U, B)
    shadowing_db: np.ndarray      # (U, B)
    coupling_loss_db: np.ndarray  # (U, B)

    def __post_init__(self) -> None:
        for arr in (self.pathloss_db, self.shadowing_db, self.coupling_loss_db):
            arr.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        rows, cols = self.coupling_loss_db.shape
        return int(rows), int(cols)

    def linear_gain(self) -> np.ndarray:
        """Coupling loss as a linear power gain, 10^(-L/10)."""
        return np.power(10.0, -self.coupling_loss_db / 10.0)
