"""
Deterministic random substreams.

Every drop owns an independent family of streams derived from
(master_seed, drop_index); within a drop each purpose (and, for per-slot
draws, each slot index) gets its own stream. Results therefore do not
depend on how drops are spread across workers or in which order they run.
"""

from enum import IntEnum

import numpy as np


class StreamPurpose(IntEnum):
    """What a substream is used for."""
    DEPLOYMENT = 0
    SHADOWING = 1
    FADING = 2
    SCHEDULING = 3


class DropStreams:
    """Factory of seeded generators for one drop."""

    def __init__(self, master_seed: int, drop_index: int):
        self.master_seed = int(master_seed)
        self.drop_index = int(drop_index)

    def seed_sequence(self, purpose: StreamPurpose, *key: int) -> np.random.SeedSequence:
        return np.random.SeedSequence(
            self.master_seed,
            spawn_key=(self.drop_index, int(purpose), *(int(k) for k in key)),
        )

    def seed_for(self, purpose: StreamPurpose, *key: int) -> int:
        """64-bit integer seed of a substream."""
        state = self.seed_sequence(purpose, *key).generate_state(1, dtype=np.uint64)
        return int(state[0])

    def generator(self, purpose: StreamPurpose, *key: int) -> np.random.Generator:
        return np.random.default_rng(self.seed_sequence(purpose, *key))
