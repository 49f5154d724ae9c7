"""Test power control, scheduling, SINR, rates and drop evaluation."""

import math

import numpy as np
import pytest

from src.models.association import AssociationMap
from src.models.channel import LinkState
from src.models.network import TIER_CODES, Deployment
from src.models.uplink import NO_UE, UplinkSlotState
from src.schemas.network import Direction, NetworkConfig, RateEstimator, Tier, UlPolicy
from src.schemas.presets import PolicyCase
from src.services.association import associate, load_by_cell
from src.services.channel import thermal_noise_mw
from src.services.uplink import (
    UplinkScheduler,
    dbm_to_mw,
    default_cases,
    run_drop,
    schedule_slot,
    slot_sinr,
    spectral_efficiency,
    transmit_power_dbm,
    uplink_rate_bps,
    uplink_sinr,
)
from src.utils.exceptions import NoActiveSlotsError, SimulationError

pytestmark = pytest.mark.unit

COUPLED = PolicyCase(name="coupled", ul_policy=UlPolicy.COUPLED)
DECOUPLED = PolicyCase(name="decoupled", ul_policy=UlPolicy.DECOUPLED)


def _assoc(ul_cell, num_cells, policy=UlPolicy.DECOUPLED):
    ul = np.asarray(ul_cell, dtype=np.int64)
    return AssociationMap(dl_cell=ul.copy(), ul_cell=ul, policy=policy, num_cells=num_cells)


# Power control

def test_transmit_power_follows_fractional_compensation(default_config):
    """P0 + alpha·L below the cap, P_max above it."""
    loss = 40.75 + 35.0 * math.log10(150.0)
    assert transmit_power_dbm(loss, default_config) == pytest.approx(-78.0 + 0.8 * loss)
    assert transmit_power_dbm(loss, default_config) == pytest.approx(15.5306, abs=1e-4)
    assert transmit_power_dbm(127.45, default_config) == 20.0


def test_transmit_power_is_monotone_and_capped(default_config):
    """Power never decreases with loss and never exceeds P_max."""
    losses = np.linspace(60.0, 180.0, 121)
    power = transmit_power_dbm(losses, default_config)

    assert np.all(np.diff(power) >= 0.0)
    assert power.max() == default_config.ue_max_power_dbm
    assert power[0] == pytest.approx(-78.0 + 0.8 * 60.0)


# Scheduling

def test_scheduler_maps_uniforms_to_attached_ues():
    """One UE per busy cell; idle cells carry NO_UE."""
    scheduler = UplinkScheduler(_assoc([0, 0, 1], 3))

    assert scheduler.pick(np.array([0.0, 0.99, 0.5])).tolist() == [0, 2, NO_UE]
    assert scheduler.pick(np.array([0.75, 0.0, 0.5])).tolist() == [1, 2, NO_UE]
    assert scheduler.pick(np.array([0.9999999, 0.0, 0.0])).tolist() == [1, 2, NO_UE]


def test_schedule_slot_picks_uniformly():
    """Each of four UEs in a cell is active about a quarter of the time."""
    assoc = _assoc([0, 0, 0, 0, 1], 2)
    rng = np.random.default_rng(21)
    picks = np.array([schedule_slot(assoc, rng)[0] for _ in range(8000)])

    frequencies = np.bincount(picks, minlength=4) / picks.size
    np.testing.assert_allclose(frequencies[:4], 0.25, atol=0.02)


def test_schedule_active_ue_belongs_to_cell():
    """The active UE of every busy cell is UL-attached to it."""
    rng = np.random.default_rng(2)
    ul_cell = rng.integers(0, 6, size=40)
    assoc = _assoc(ul_cell, 8)
    active = schedule_slot(assoc, np.random.default_rng(3))

    for cell, ue in enumerate(active):
        if ue == NO_UE:
            assert not np.any(ul_cell == cell)
        else:
            assert ul_cell[ue] == cell


# SINR

def _brute_force_sinr(serving, active, power_mw, fading, loss_db, noise_mw):
    ue = active[serving]
    signal = power_mw[ue] * fading[ue, serving] * 10.0 ** (-loss_db[ue, serving] / 10.0)
    interference = 0.0
    for cell, other in enumerate(active):
        if cell != serving and other != NO_UE:
            interference += power_mw[other] * fading[other, serving] * 10.0 ** (-loss_db[other, serving] / 10.0)
    return signal / (noise_mw + interference)


def test_slot_sinr_matches_brute_force(default_config):
    """1000 random 3-BS / 5-UE slots agree with a direct loop."""
    rng = np.random.default_rng(1000)
    noise_mw = thermal_noise_mw(default_config)

    for _ in range(1000):
        ul_cell = rng.integers(0, 3, size=5)
        assoc = _assoc(ul_cell, 3)
        loss = rng.uniform(70.0, 150.0, size=(5, 3))
        link_state = LinkState(pathloss_db=loss.copy(), shadowing_db=np.zeros_like(loss), coupling_loss_db=loss)
        tx = np.asarray(transmit_power_dbm(loss[np.arange(5), ul_cell], default_config))
        fading = rng.exponential(1.0, size=(5, 3))
        active = UplinkScheduler(assoc).pick(rng.random(3))
        state = UplinkSlotState(active_ue=active, tx_power_dbm=tx, fading=fading)

        result = slot_sinr(state, link_state.linear_gain(), dbm_to_mw(tx), noise_mw)

        for cell, ue, sinr in zip(result.cells, result.ues, result.sinr):
            expected = _brute_force_sinr(cell, active, dbm_to_mw(tx), fading, loss, noise_mw)
            assert sinr == pytest.approx(expected, rel=1e-9)
            assert uplink_sinr(int(ue), int(cell), state, link_state, default_config) == pytest.approx(
                expected, rel=1e-9
            )


def test_single_link_sinr_is_snr(default_config):
    """Without interferers the SINR is received power over noise."""
    loss = np.array([[116.9131940671]])
    link_state = LinkState(pathloss_db=loss.copy(), shadowing_db=np.zeros((1, 1)), coupling_loss_db=loss)
    tx = np.array([transmit_power_dbm(loss[0, 0], default_config)])
    state = UplinkSlotState(active_ue=np.array([0]), tx_power_dbm=tx, fading=np.ones((1, 1)))

    snr_db = 10.0 * math.log10(uplink_sinr(0, 0, state, link_state, default_config))
    noise_dbm = -174.0 + 10.0 * math.log10(200e3) + 5.0
    assert snr_db == pytest.approx(tx[0] - loss[0, 0] - noise_dbm)


def test_uplink_sinr_rejects_inactive_ue(default_config):
    """Only the active UE of a cell has an SINR."""
    loss = np.full((2, 1), 100.0)
    link_state = LinkState(pathloss_db=loss.copy(), shadowing_db=np.zeros((2, 1)), coupling_loss_db=loss)
    state = UplinkSlotState(
        active_ue=np.array([0]), tx_power_dbm=np.array([0.0, 0.0]), fading=np.ones((2, 1))
    )
    with pytest.raises(SimulationError):
        uplink_sinr(1, 0, state, link_state, default_config)


# Rates

def test_rate_equipartition(default_config):
    """SINR {3, 1} averages 1.5 bit/s/Hz: 30 Mbit/s alone, 15 Mbit/s shared by two."""
    assert uplink_rate_bps(0, [3.0, 1.0], 1, default_config) == pytest.approx(30e6)
    assert uplink_rate_bps(0, [3.0, 1.0], 2, default_config) == pytest.approx(15e6)


def test_rate_estimators_and_cap():
    """log_mean uses the mean SINR; the cap clips each slot."""
    log_mean = NetworkConfig(rate_estimator=RateEstimator.LOG_MEAN)
    capped = NetworkConfig(spectral_efficiency_cap=1.0)

    assert spectral_efficiency([3.0, 1.0], log_mean) == pytest.approx(math.log2(3.0))
    assert spectral_efficiency([3.0, 1.0], capped) == pytest.approx(1.0)
    assert uplink_rate_bps(0, [3.0, 1.0], 1, log_mean) == pytest.approx(20e6 * math.log2(3.0))


def test_rate_errors(default_config):
    """No samples or an empty cell cannot produce a rate."""
    with pytest.raises(NoActiveSlotsError) as exc_info:
        uplink_rate_bps(4, [], 1, default_config)
    assert exc_info.value.ue == 4
    with pytest.raises(SimulationError):
        uplink_rate_bps(0, [1.0], 0, default_config)


# Drop evaluation

@pytest.fixture
def drop_config():
    return NetworkConfig(window_side=800.0, ue_density=150.0, slots_per_drop=6, master_seed=31)


def test_default_cases(default_config):
    """Coupled baseline first, then the configured policy."""
    cases = default_cases(default_config)
    assert [case.name for case in cases] == ["coupled", "decoupled"]
    assert default_cases(NetworkConfig(ul_policy=UlPolicy.COUPLED))[0].ul_policy is UlPolicy.COUPLED
    assert len(default_cases(NetworkConfig(ul_policy=UlPolicy.COUPLED))) == 1


def test_run_drop_gives_every_ue_a_rate(drop_config):
    """Completion slots leave no UE without a SINR sample."""
    result = run_drop(drop_config, 0)

    for policy in result.cases.values():
        metrics = policy.metrics
        assert metrics.num_ues == result.num_ues
        assert np.all(metrics.samples_per_ue() >= 1)
        assert np.all(metrics.mean_rate_bps > 0.0)
        assert np.all(metrics.sinr_std_db >= 0.0)
        assert np.all(metrics.tx_power_dbm <= drop_config.ue_max_power_dbm)


def test_run_drop_rates_match_rate_formula(drop_config):
    """Vectorised per-UE rates equal the scalar equipartition rate."""
    result = run_drop(drop_config, 1)
    policy = result.cases["decoupled"]
    load = policy.load(Direction.UL).counts

    for ue in range(0, result.num_ues, 7):
        series = 10.0 ** (policy.metrics.sinr_db_series(ue) / 10.0)
        cell = policy.association.ul_cell[ue]
        expected = uplink_rate_bps(ue, series, int(load[cell]), drop_config)
        assert policy.metrics.mean_rate_bps[ue] == pytest.approx(expected, rel=1e-9)


def test_sinr_std_covers_every_regular_slot(drop_config):
    """Every UE gets one observed SINR per regular slot, whatever its cell's load."""
    result = run_drop(drop_config, 1)

    for policy in result.cases.values():
        metrics = policy.metrics
        assert metrics.observed_sinr_db.shape == (drop_config.slots_per_drop, result.num_ues)
        for ue in range(0, result.num_ues, 5):
            assert metrics.sinr_std_db[ue] == pytest.approx(np.std(metrics.observed_series(ue)), abs=1e-12)


def test_observed_sinr_matches_scheduled_samples(drop_config):
    """In a slot where a UE transmits, its observed SINR is its recorded SINR."""
    result = run_drop(drop_config, 5)

    for policy in result.cases.values():
        metrics = policy.metrics
        regular = metrics.sinr_slot < drop_config.slots_per_drop
        assert np.any(regular)
        observed = metrics.observed_sinr_db[metrics.sinr_slot[regular], metrics.sinr_ue[regular]]
        np.testing.assert_allclose(observed, metrics.sinr_db[regular], rtol=0.0, atol=1e-12)


def test_single_slot_gives_zero_sinr_std(drop_config):
    result = run_drop(drop_config.model_copy(update={"slots_per_drop": 1}), 0)

    for policy in result.cases.values():
        np.testing.assert_array_equal(policy.metrics.sinr_std_db, 0.0)
        assert np.all(policy.metrics.samples_per_ue() >= 1)


def test_run_drop_is_deterministic(drop_config):
    """Same config and drop index, identical arrays."""
    first = run_drop(drop_config, 3)
    second = run_drop(drop_config, 3)

    for name in first.cases:
        a, b = first.cases[name].metrics, second.cases[name].metrics
        np.testing.assert_array_equal(a.sinr_db, b.sinr_db)
        np.testing.assert_array_equal(a.mean_rate_bps, b.mean_rate_bps)


def test_cases_share_randomness(drop_config):
    """A case's results do not depend on which other cases run alongside it."""
    alone = run_drop(drop_config, 2, [COUPLED])
    together = run_drop(drop_config, 2, [COUPLED, DECOUPLED])

    np.testing.assert_array_equal(
        alone.cases["coupled"].metrics.sinr_db, together.cases["coupled"].metrics.sinr_db
    )
    np.testing.assert_array_equal(
        alone.cases["coupled"].metrics.mean_rate_bps, together.cases["coupled"].metrics.mean_rate_bps
    )


def test_decoupled_power_never_exceeds_coupled(drop_config):
    """Minimum-loss UL association means lower or equal power for every UE."""
    result = run_drop(drop_config, 4)
    coupled = result.cases["coupled"]
    decoupled = result.cases["decoupled"]

    assert np.all(decoupled.serving_loss_db <= coupled.serving_loss_db)
    assert np.all(decoupled.metrics.tx_power_dbm <= coupled.metrics.tx_power_dbm)
    np.testing.assert_array_equal(coupled.association.ul_cell, coupled.association.dl_cell)
    assert coupled.decoupling_fraction == 0.0


def test_run_drop_rejects_duplicate_case_names(drop_config):
    """Case names key the results."""
    with pytest.raises(SimulationError):
        run_drop(drop_config, 0, [COUPLED, COUPLED])


# Brute-force cross-check

def _brute_force_instance(tx_bs, bias, loss, ul_policy, uniforms, fading, config):
    """Associations, powers, one-slot SINRs and rates straight from the formulas."""
    num_ues, num_bs = len(loss), len(tx_bs)
    dl = []
    for i in range(num_ues):
        best = 0
        for j in range(1, num_bs):
            if tx_bs[j] - loss[i][j] + bias[j] > tx_bs[best] - loss[i][best] + bias[best]:
                best = j
        dl.append(best)
    ul = list(dl)
    if ul_policy is UlPolicy.DECOUPLED:
        for i in range(num_ues):
            ul[i] = 0
            for j in range(1, num_bs):
                if loss[i][j] < loss[i][ul[i]]:
                    ul[i] = j

    power_dbm = [
        min(config.ue_max_power_dbm, config.pc_p0_dbm + config.pc_alpha * loss[i][ul[i]])
        for i in range(num_ues)
    ]
    power_mw = [10.0 ** (p / 10.0) for p in power_dbm]
    members = [[i for i in range(num_ues) if ul[i] == j] for j in range(num_bs)]
    active = [
        m[min(int(uniforms[j] * len(m)), len(m) - 1)] if m else None for j, m in enumerate(members)
    ]
    block_hz = config.bandwidth_hz / config.num_blocks
    noise_mw = 10.0 ** ((-174.0 + 10.0 * math.log10(block_hz) + config.noise_figure_db) / 10.0)

    sinr, rate = {}, {}
    for j, ue in enumerate(active):
        if ue is None:
            continue
        interference = 0.0
        for c, k in enumerate(active):
            if c != j and k is not None:
                interference += power_mw[k] * fading[k][j] * 10.0 ** (-loss[k][j] / 10.0)
        signal = power_mw[ue] * fading[ue][j] * 10.0 ** (-loss[ue][j] / 10.0)
        sinr[ue] = signal / (noise_mw + interference)
        rate[ue] = config.bandwidth_hz / len(members[j]) * math.log2(1.0 + sinr[ue])
    return dl, ul, power_dbm, sinr, rate


def test_pipeline_matches_brute_force():
    """1000 random 3-BS / 5-UE instances: associations, powers, SINRs and rates agree."""
    rng = np.random.default_rng(8)
    tiers = np.array([TIER_CODES[Tier.MACRO], TIER_CODES[Tier.SMALL], TIER_CODES[Tier.SMALL]], dtype=np.int8)
    tx_bs = [46.0, 30.0, 30.0]

    for _ in range(1000):
        small_bias = float(rng.uniform(0.0, 8.0))
        config = NetworkConfig(small_bias_db=small_bias)
        deployment = Deployment(
            window_side=config.window_side,
            bs_positions=rng.random((3, 2)) * config.window_side,
            bs_tier=tiers.copy(),
            bs_tx_power_dbm=np.array(tx_bs),
            bs_bias_db=np.array([0.0, small_bias, small_bias]),
            ue_positions=rng.random((5, 2)) * config.window_side,
        )
        loss = rng.uniform(70.0, 150.0, size=(5, 3))
        link_state = LinkState(pathloss_db=loss.copy(), shadowing_db=np.zeros_like(loss), coupling_loss_db=loss)
        fading = rng.exponential(1.0, size=(5, 3))
        uniforms = rng.random(3)
        coupled = PolicyCase(name="coupled", ul_policy=UlPolicy.COUPLED, small_bias_db=small_bias)

        for case, bias in ((coupled, [0.0, small_bias, small_bias]), (DECOUPLED, [0.0, 0.0, 0.0])):
            dl, ul, power, sinr, rate = _brute_force_instance(
                tx_bs, bias, loss.tolist(), case.ul_policy, uniforms.tolist(), fading.tolist(), config
            )

            assoc = associate(case, deployment, link_state)
            assert assoc.dl_cell.tolist() == dl
            assert assoc.ul_cell.tolist() == ul

            tx = np.asarray(transmit_power_dbm(loss[np.arange(5), assoc.ul_cell], config))
            np.testing.assert_allclose(tx, power, rtol=1e-9)

            state = UplinkSlotState(
                active_ue=UplinkScheduler(assoc).pick(uniforms), tx_power_dbm=tx, fading=fading
            )
            result = slot_sinr(state, link_state.linear_gain(), dbm_to_mw(tx), thermal_noise_mw(config))
            load = load_by_cell(assoc, deployment, Direction.UL).counts
            assert sorted(int(ue) for ue in result.ues) == sorted(sinr)
            for cell, ue, value in zip(result.cells, result.ues, result.sinr):
                assert value == pytest.approx(sinr[int(ue)], rel=1e-9)
                assert uplink_rate_bps(int(ue), [value], int(load[cell]), config) == pytest.approx(
                    rate[int(ue)], rel=1e-9
                )
