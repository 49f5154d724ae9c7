"""Test path loss, shadowing, fading and noise."""

import math

import numpy as np
import pytest

from src.schemas.network import NetworkConfig, Tier
from src.services.channel import (
    build_link_state,
    path_loss_db,
    sample_fading,
    sample_shadowing_db,
    thermal_noise_mw,
)
from src.services.streams import DropStreams, StreamPurpose

pytestmark = pytest.mark.unit


def test_path_loss_hand_values(default_config):
    """40.75 dB at 1 m plus 35 dB per decade."""
    assert path_loss_db(1.0, default_config) == pytest.approx(40.75)
    assert path_loss_db(10.0, default_config) == pytest.approx(75.75)
    assert path_loss_db(300.0, default_config) == pytest.approx(40.75 + 35.0 * math.log10(300.0))


def test_path_loss_clamps_short_distances(default_config):
    """Distances below min_distance_m are clamped."""
    assert path_loss_db(0.0, default_config) == pytest.approx(40.75)
    assert path_loss_db(0.3, default_config) == pytest.approx(40.75)


def test_path_loss_is_monotone_on_arrays(default_config):
    """Array input keeps its shape and never decreases with distance."""
    distances = np.linspace(0.5, 2000.0, 200)
    losses = path_loss_db(distances, default_config)

    assert losses.shape == distances.shape
    assert np.all(np.diff(losses) >= 0.0)


def test_shadowing_statistics():
    """Zero mean, configured std, exact zeros when disabled."""
    rng = np.random.default_rng(11)
    samples = sample_shadowing_db(rng, 8.0, 200_000)

    assert samples.mean() == pytest.approx(0.0, abs=0.1)
    assert samples.std() == pytest.approx(8.0, abs=0.1)
    np.testing.assert_array_equal(sample_shadowing_db(rng, 0.0, (3, 4)), np.zeros((3, 4)))
    assert sample_shadowing_db(rng, 0.0) == 0.0


def test_fading_is_unit_mean_exponential():
    """Rayleigh power gain: Exp(1), so mean and variance are both 1."""
    samples = sample_fading(np.random.default_rng(12), 200_000)

    assert np.all(samples >= 0.0)
    assert samples.mean() == pytest.approx(1.0, abs=0.01)
    assert samples.var() == pytest.approx(1.0, abs=0.03)


def test_fading_and_shadowing_streams_are_independent():
    """Paired draws from a drop's shadowing and fading streams are uncorrelated."""
    streams = DropStreams(2015, 0)
    shadowing = sample_shadowing_db(streams.generator(StreamPurpose.SHADOWING), 8.0, 100_000)
    fading = sample_fading(streams.generator(StreamPurpose.FADING, 0), 100_000)

    assert abs(np.corrcoef(shadowing, fading)[0, 1]) < 0.02


def test_thermal_noise_per_block(default_config):
    """-174 dBm/Hz over 200 kHz plus 5 dB noise figure."""
    expected_dbm = -174.0 + 10.0 * math.log10(200e3) + 5.0
    assert 10.0 * math.log10(thermal_noise_mw(default_config)) == pytest.approx(expected_dbm)
    assert expected_dbm == pytest.approx(-115.99, abs=0.01)


def test_link_state_combines_pathloss_and_shadowing(make_deployment):
    """Coupling loss is path loss minus shadowing on every link."""
    config = NetworkConfig(window_side=10_000.0)
    deployment = make_deployment(
        [(0.0, 0.0, Tier.MACRO), (450.0, 0.0, Tier.SMALL)],
        [(300.0, 0.0), (100.0, 100.0), (0.0, 0.0)],
        config,
    )
    link_state = build_link_state(deployment, config, np.random.default_rng(3))

    assert link_state.shape == (3, 2)
    np.testing.assert_allclose(
        link_state.coupling_loss_db, link_state.pathloss_db - link_state.shadowing_db
    )
    assert link_state.pathloss_db[0, 0] == pytest.approx(path_loss_db(300.0, config))
    assert link_state.pathloss_db[0, 1] == pytest.approx(path_loss_db(150.0, config))
    np.testing.assert_allclose(
        link_state.linear_gain(), 10.0 ** (-link_state.coupling_loss_db / 10.0)
    )


def test_link_state_without_shadowing(make_deployment, deterministic_config):
    """With std 0 the coupling loss is the path loss."""
    deployment = make_deployment(
        [(0.0, 0.0, Tier.MACRO)], [(10.0, 0.0)], deterministic_config
    )
    link_state = build_link_state(deployment, deterministic_config, np.random.default_rng(0))

    assert link_state.coupling_loss_db[0, 0] == pytest.approx(75.75)
    assert link_state.shadowing_db[0, 0] == 0.0
