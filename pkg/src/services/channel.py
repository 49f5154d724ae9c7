"""
Channel service: power-law path loss, lognormal shadowing and Rayleigh fading.
"""

from typing import Optional, Union

import numpy as np

from src.models.channel import LinkState
from src.models.network import Deployment
from src.schemas.network import NetworkConfig

from .network import toroidal_distance_matrix

# Thermal noise power spectral density
THERMAL_NOISE_DBM_PER_HZ = -174.0

Size = Optional[Union[int, tuple[int, ...]]]


def path_loss_db(
    distance: Union[float, np.ndarray],
    config: NetworkConfig,
) -> Union[float, np.ndarray]:
    """
    Path loss in dB: intercept + 10·n·log10(max(d, d_min) / 1 m).

    Accepts a scalar or an array of distances in meters.
    """
    clamped = np.maximum(np.asarray(distance, dtype=float), config.min_distance_m)
    loss = config.pathloss_intercept_db + 10.0 * config.pathloss_exponent * np.log10(clamped)
    return float(loss) if np.ndim(loss) == 0 else loss


def sample_shadowing_db(
    rng: np.random.Generator,
    std_db: float,
    size: Size = None,
) -> Union[float, np.ndarray]:
    """Zero-mean Gaussian shadowing in dB."""
    if std_db == 0:
        return 0.0 if size is None else np.zeros(size)
    return rng.normal(0.0, std_db, size)


def sample_fading(rng: np.random.Generator, size: Size = None) -> Union[float, np.ndarray]:
    """Rayleigh fading power gain: exponential with unit mean."""
    return rng.exponential(1.0, size)


def thermal_noise_mw(config: NetworkConfig) -> float:
    """Receiver noise power over one frequency block, in mW."""
    noise_dbm = (
        THERMAL_NOISE_DBM_PER_HZ
        + 10.0 * np.log10(config.block_bandwidth_hz)
        + config.noise_figure_db
    )
    return float(10.0 ** (noise_dbm / 10.0))


def build_link_state(
    deployment: Deployment,
    config: NetworkConfig,
    drop_rng: np.random.Generator,
) -> LinkState:
    """
    Compute path loss and draw shadowing for every UE-BS link of a drop.

    Args:
        deployment: Sampled positions
        config: Scenario configuration
        drop_rng: Shadowing stream of the drop

    Returns:
        LinkState with (num_ues, num_bs) matrices
    """
    distances = toroidal_distance_matrix(
        deployment.ue_positions, deployment.bs_positions, deployment.window_side
    )
    pathloss = np.asarray(path_loss_db(distances, config), dtype=float).reshape(distances.shape)
    shadowing = np.asarray(
        sample_shadowing_db(drop_rng, config.shadowing_std_db, distances.shape), dtype=float
    )
    return LinkState(
        pathloss_db=pathloss,
        shadowing_db=shadowing,
        coupling_loss_db=pathloss - shadowing,
    )
