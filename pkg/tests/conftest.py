"""Pytest configuration and fixtures for testing."""

from collections.abc import Callable, Sequence

import numpy as np
import pytest

from src.models.network import TIER_CODES, Deployment
from src.schemas.network import NetworkConfig, Tier
from src.utils.logging import configure_logging

# Large enough that wrap-around never shortens a hand-placed link
HAND_WINDOW = 10_000.0


@pytest.fixture(scope="session", autouse=True)
def quiet_logging():
    """Keep test output readable."""
    configure_logging(level="WARNING", fmt="console")


@pytest.fixture
def default_config() -> NetworkConfig:
    """Configuration with every documented default."""
    return NetworkConfig()


@pytest.fixture
def small_config() -> NetworkConfig:
    """Fast scenario: 1 km² window, a handful of drops and slots."""
    return NetworkConfig(
        window_side=1000.0,
        ue_density=120.0,
        num_drops=3,
        slots_per_drop=8,
        master_seed=7,
    )


@pytest.fixture
def deterministic_config() -> NetworkConfig:
    """No shadowing, for hand-checked geometry."""
    return NetworkConfig(window_side=HAND_WINDOW, shadowing_std_db=0.0)


@pytest.fixture
def make_deployment() -> Callable[..., Deployment]:
    """Build a Deployment from hand-placed BSs and UEs."""

    def _make(
        bs: Sequence[tuple[float, float, Tier]],
        ues: Sequence[tuple[float, float]],
        config: NetworkConfig = NetworkConfig(window_side=HAND_WINDOW),
    ) -> Deployment:
        tiers = [tier for _, _, tier in bs]
        return Deployment(
            window_side=config.window_side,
            bs_positions=np.array([(x, y) for x, y, _ in bs], dtype=float).reshape(-1, 2),
            bs_tier=np.array([TIER_CODES[t] for t in tiers], dtype=np.int8),
            bs_tx_power_dbm=np.array([config.tier_power_dbm(t) for t in tiers], dtype=float),
            bs_bias_db=np.array([config.tier_bias_db(t) for t in tiers], dtype=float),
            ue_positions=np.array(ues, dtype=float).reshape(-1, 2),
        )

    return _make
