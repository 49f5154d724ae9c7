"""
Network model service.

Samples BS and UE positions on a square toroidal window. Both BS tiers are
Poisson point processes; the UE count is deterministic and positions are
uniform.
"""

import math
from collections.abc import Mapping
from typing import Any, Union

import numpy as np

from src.config import validate_config
from src.models.network import TIER_CODES, Deployment
from src.schemas.network import NetworkConfig, Tier
from src.utils.exceptions import EmptyNetworkError
from src.utils.logging import get_logger

logger = get_logger(__name__)

MAX_EMPTY_NETWORK_RETRIES = 100

Point = Union[tuple[float, float], np.ndarray]


def _uniform_positions(rng: np.random.Generator, count: int, side: float) -> np.ndarray:
    positions = rng.random((count, 2)) * side
    # keep the half-open window even if the product rounds up to side
    return np.minimum(positions, np.nextafter(side, 0.0))


def expected_ue_count(config: NetworkConfig) -> int:
    """round(ue_density * area), halves rounded up."""
    return int(math.floor(config.ue_density * config.area_km2 + 0.5))


def sample_deployment(
    config: Union[NetworkConfig, Mapping[str, Any]],
    drop_seed: int,
) -> Deployment:
    """
    Sample one deployment.

    Args:
        config: Scenario configuration (a raw mapping is validated first)
        drop_seed: Seed of this drop's deployment stream

    Returns:
        Deployment with macro cells first, then small cells

    Raises:
        ConfigValidationError: If a raw mapping is not a valid config
        EmptyNetworkError: If every attempt in the retry budget had no BS
    """
    if not isinstance(config, NetworkConfig):
        config = validate_config(dict(config))

    rng = np.random.default_rng(drop_seed)
    area = config.area_km2

    for attempt in range(1, MAX_EMPTY_NETWORK_RETRIES + 1):
        n_macro = int(rng.poisson(config.macro_density * area))
        n_small = int(rng.poisson(config.small_density * area))
        if n_macro + n_small > 0:
            break
        logger.debug("Empty network sampled, resampling", attempt=attempt, drop_seed=drop_seed)
    else:
        logger.error(
            "No base station placed within retry budget",
            attempts=MAX_EMPTY_NETWORK_RETRIES,
            macro_density=config.macro_density,
            small_density=config.small_density,
        )
        raise EmptyNetworkError(
            f"No base station placed after {MAX_EMPTY_NETWORK_RETRIES} attempts",
            attempts=MAX_EMPTY_NETWORK_RETRIES,
        )

    side = config.window_side
    bs_positions = np.vstack([
        _uniform_positions(rng, n_macro, side),
        _uniform_positions(rng, n_small, side),
    ])
    tiers = [Tier.MACRO] * n_macro + [Tier.SMALL] * n_small
    ue_positions = _uniform_positions(rng, expected_ue_count(config), side)

    return Deployment(
        window_side=side,
        bs_positions=bs_positions,
        bs_tier=np.array([TIER_CODES[t] for t in tiers], dtype=np.int8),
        bs_tx_power_dbm=np.array([config.tier_power_dbm(t) for t in tiers], dtype=float),
        bs_bias_db=np.array([config.tier_bias_db(t) for t in tiers], dtype=float),
        ue_positions=ue_positions,
    )


def toroidal_distance(p: Point, q: Point, window_side: float) -> float:
    """Euclidean distance with wrap-around in both axes."""
    delta = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    delta = np.minimum(delta, window_side - delta)
    return float(np.hypot(delta[0], delta[1]))


def toroidal_distance_matrix(
    from_positions: np.ndarray,
    to_positions: np.ndarray,
    window_side: float,
) -> np.ndarray:
    """Pairwise wrap-around distances, shape (len(from_positions), len(to_positions))."""
    delta = np.abs(from_positions[:, None, :] - to_positions[None, :, :])
    delta = np.minimum(delta, window_side - delta)
    return np.hypot(delta[..., 0], delta[..., 1])
