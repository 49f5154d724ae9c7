"""
Uplink engine: fractional power control, per-slot co-channel scheduling,
SINR and equipartition rates, and the end-to-end evaluation of one drop.

Interference is evaluated on one reference frequency block: every cell with
at least one UL-attached UE has exactly one transmitter on it per slot.
"""

import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from src.models.association import AssociationMap
from src.models.channel import LinkState
from src.models.network import Deployment
from src.models.uplink import (
    NO_UE,
    DropResult,
    PolicyDropResult,
    UplinkMetricsPerUE,
    UplinkSlotState,
)
from src.schemas.network import Direction, NetworkConfig, RateEstimator, UlPolicy
from src.schemas.presets import PolicyCase
from src.utils.exceptions import NoActiveSlotsError, SimulationError
from src.utils.logging import get_logger, log_drop_completed

from .association import associate, decoupling_fraction, load_by_cell
from .channel import build_link_state, sample_fading, thermal_noise_mw
from .metrics import sinr_std_summary
from .network import sample_deployment
from .streams import DropStreams, StreamPurpose

logger = get_logger(__name__)


def transmit_power_dbm(
    coupling_loss_serving: Union[float, np.ndarray],
    config: NetworkConfig,
) -> Union[float, np.ndarray]:
    """Fractional power control: min(P_max, P0 + alpha·L)."""
    power = np.minimum(
        config.ue_max_power_dbm,
        config.pc_p0_dbm + config.pc_alpha * np.asarray(coupling_loss_serving, dtype=float),
    )
    return float(power) if np.ndim(power) == 0 else power


def dbm_to_mw(power_dbm: ArrayLike) -> np.ndarray:
    return np.power(10.0, np.asarray(power_dbm, dtype=float) / 10.0)


class UplinkScheduler:
    """Picks one UL-attached UE per cell per slot, uniformly at random."""

    def __init__(self, assoc: AssociationMap):
        self.num_cells = assoc.num_cells
        self.counts = np.bincount(assoc.ul_cell, minlength=assoc.num_cells)
        self.order = np.argsort(assoc.ul_cell, kind="stable")
        self.offsets = np.concatenate(([0], np.cumsum(self.counts)[:-1]))
        self.busy_cells = np.flatnonzero(self.counts)

    def pick(self, uniforms: np.ndarray) -> np.ndarray:
        """Map one uniform draw per cell to the active UE of that cell."""
        active = np.full(self.num_cells, NO_UE, dtype=np.int64)
        cells = self.busy_cells
        counts = self.counts[cells]
        choice = np.minimum((uniforms[cells] * counts).astype(np.int64), counts - 1)
        active[cells] = self.order[self.offsets[cells] + choice]
        return active

    def schedule(self, slot_rng: np.random.Generator) -> np.ndarray:
        # one draw per cell, attached or not, so every policy consumes the stream alike
        return self.pick(slot_rng.random(self.num_cells))


def schedule_slot(assoc: AssociationMap, slot_rng: np.random.Generator) -> np.ndarray:
    """Per-BS active UE for one slot; NO_UE marks cells without UL-attached UEs."""
    return UplinkScheduler(assoc).schedule(slot_rng)


def uplink_sinr(
    ue: int,
    serving_bs: int,
    slot_state: UplinkSlotState,
    link_state: LinkState,
    config: NetworkConfig,
) -> float:
    """
    Linear UL SINR of the UE active at serving_bs in this slot.

    Raises:
        SimulationError: If ue is not the active UE of serving_bs
    """
    if slot_state.active_ue[serving_bs] != ue:
        raise SimulationError(
            f"UE {ue} is not scheduled at BS {serving_bs} in this slot", operation="uplink_sinr"
        )
    power_mw = dbm_to_mw(slot_state.tx_power_dbm)
    loss = link_state.coupling_loss_db

    def received(k: int) -> float:
        return float(
            power_mw[k] * slot_state.fading[k, serving_bs] * 10.0 ** (-loss[k, serving_bs] / 10.0)
        )

    interference = sum(
        received(int(k))
        for j, k in enumerate(slot_state.active_ue)
        if j != serving_bs and k != NO_UE
    )
    return received(ue) / (thermal_noise_mw(config) + interference)


@dataclass(frozen=True, eq=False)
class SlotSinr:
    """Vectorised SINR of every active link in a slot."""

    cells: np.ndarray
    ues: np.ndarray
    signal_mw: np.ndarray
    interference_mw: np.ndarray
    sinr: np.ndarray


def slot_sinr(
    slot_state: UplinkSlotState,
    link_gain: np.ndarray,
    power_mw: np.ndarray,
    noise_mw: float,
) -> SlotSinr:
    """
    SINR at every active cell of a slot.

    Args:
        slot_state: Active UEs and fading of the slot
        link_gain: 10^(-coupling_loss/10), shape (U, B)
        power_mw: Per-UE transmit power in mW
        noise_mw: Noise power per block in mW
    """
    cells = slot_state.active_cells
    ues = slot_state.active_ue[cells]
    links = np.ix_(ues, cells)
    # rx[t, r]: power of transmitter t received at cell r
    rx = power_mw[ues, None] * slot_state.fading[links] * link_gain[links]
    signal = np.diagonal(rx).copy()
    np.fill_diagonal(rx, 0.0)
    interference = rx.sum(axis=0)
    return SlotSinr(
        cells=cells,
        ues=ues,
        signal_mw=signal,
        interference_mw=interference,
        sinr=signal / (noise_mw + interference),
    )


def spectral_efficiency(sinr_series: ArrayLike, config: NetworkConfig) -> float:
    """Bits/s/Hz of one UE from its linear SINR samples."""
    sinr = np.asarray(sinr_series, dtype=float)
    cap = config.spectral_efficiency_cap if config.spectral_efficiency_cap is not None else np.inf
    if config.rate_estimator is RateEstimator.LOG_MEAN:
        return float(min(np.log2(1.0 + sinr.mean()), cap))
    return float(np.minimum(np.log2(1.0 + sinr), cap).mean())


def uplink_rate_bps(
    ue: Optional[int],
    sinr_series: ArrayLike,
    cell_load: int,
    config: NetworkConfig,
) -> float:
    """
    Equipartition rate: (bandwidth / cell load) · spectral efficiency over the active slots.

    Raises:
        NoActiveSlotsError: If the UE has no SINR sample
        SimulationError: If cell_load < 1
    """
    sinr = np.asarray(sinr_series, dtype=float)
    if sinr.size == 0:
        raise NoActiveSlotsError(f"UE {ue} was never scheduled", ue=ue)
    if cell_load < 1:
        raise SimulationError(f"Cell load must be at least 1, got {cell_load}", operation="uplink_rate_bps")
    return config.bandwidth_hz / cell_load * spectral_efficiency(sinr, config)


@dataclass(eq=False)
class _PolicyEvaluation:
    """Mutable accumulator of one policy case while a drop runs."""

    case: PolicyCase
    association: AssociationMap
    scheduler: UplinkScheduler
    serving_loss_db: np.ndarray
    tx_power_dbm: np.ndarray
    power_mw: np.ndarray
    sample_counts: np.ndarray
    sinr_chunks: list[np.ndarray] = field(default_factory=list)
    ue_chunks: list[np.ndarray] = field(default_factory=list)
    slot_chunks: list[np.ndarray] = field(default_factory=list)
    interference_chunks: list[np.ndarray] = field(default_factory=list)
    observed_rows: list[np.ndarray] = field(default_factory=list)

    def observe(
        self,
        slot_state: UplinkSlotState,
        link_gain: np.ndarray,
        result: SlotSinr,
        noise_mw: float,
    ) -> None:
        """SINR of every UE at its UL cell against the other cells' transmitters of this slot."""
        cells = self.association.ul_cell
        rows = np.arange(cells.size)
        interference = np.zeros(self.association.num_cells)
        interference[result.cells] = result.interference_mw
        signal = self.power_mw * slot_state.fading[rows, cells] * link_gain[rows, cells]
        self.observed_rows.append(10.0 * np.log10(signal / (noise_mw + interference[cells])))

    def record(
        self,
        slot: int,
        slot_state: UplinkSlotState,
        link_gain: np.ndarray,
        noise_mw: float,
        targets: Optional[np.ndarray] = None,
    ) -> None:
        result = slot_sinr(slot_state, link_gain, self.power_mw, noise_mw)
        if targets is None:
            keep = np.ones(result.ues.size, dtype=bool)
            positive = result.interference_mw > 0
            self.interference_chunks.append(10.0 * np.log10(result.interference_mw[positive]))
            self.observe(slot_state, link_gain, result, noise_mw)
        else:
            keep = np.isin(result.ues, targets)
        self.sinr_chunks.append(result.sinr[keep])
        self.ue_chunks.append(result.ues[keep])
        self.slot_chunks.append(np.full(int(np.count_nonzero(keep)), slot, dtype=np.int64))
        self.sample_counts[result.ues[keep]] += 1


def _concat(chunks: list[np.ndarray], dtype: type) -> np.ndarray:
    return np.concatenate(chunks).astype(dtype) if chunks else np.empty(0, dtype=dtype)


def default_cases(config: NetworkConfig) -> tuple[PolicyCase, ...]:
    """Coupled baseline plus the configured policy, both at the configured bias."""
    baseline = PolicyCase(
        name=UlPolicy.COUPLED.value,
        ul_policy=UlPolicy.COUPLED,
        small_bias_db=config.small_bias_db,
    )
    if config.ul_policy is UlPolicy.COUPLED:
        return (baseline,)
    return (
        baseline,
        PolicyCase(
            name=config.ul_policy.value,
            ul_policy=config.ul_policy,
            small_bias_db=config.small_bias_db,
        ),
    )


def _start_evaluation(
    case: PolicyCase,
    deployment: Deployment,
    link_state: LinkState,
    config: NetworkConfig,
) -> _PolicyEvaluation:
    assoc = associate(case, deployment, link_state, config.decoupled_dl_bias)
    serving_loss = link_state.coupling_loss_db[np.arange(deployment.num_ues), assoc.ul_cell]
    tx_power = np.asarray(transmit_power_dbm(serving_loss, config), dtype=float).reshape(-1)
    return _PolicyEvaluation(
        case=case,
        association=assoc,
        scheduler=UplinkScheduler(assoc),
        serving_loss_db=serving_loss,
        tx_power_dbm=tx_power,
        power_mw=dbm_to_mw(tx_power),
        sample_counts=np.zeros(deployment.num_ues, dtype=np.int64),
    )


def _complete_schedule(
    evaluation: _PolicyEvaluation,
    streams: DropStreams,
    link_gain: np.ndarray,
    noise_mw: float,
    first_slot: int,
) -> None:
    """Extra slots until every UE has at least one SINR sample."""
    num_ues, num_bs = link_gain.shape
    slot = first_slot
    while True:
        pending = np.flatnonzero(evaluation.sample_counts == 0)
        if pending.size == 0:
            return
        fading = sample_fading(streams.generator(StreamPurpose.FADING, slot), (num_ues, num_bs))
        active = evaluation.scheduler.schedule(streams.generator(StreamPurpose.SCHEDULING, slot))
        # lowest-index pending UE of each cell that still has one
        cells, first = np.unique(evaluation.association.ul_cell[pending], return_index=True)
        targets = pending[first]
        active[cells] = targets
        slot_state = UplinkSlotState(
            active_ue=active, tx_power_dbm=evaluation.tx_power_dbm, fading=fading
        )
        evaluation.record(slot, slot_state, link_gain, noise_mw, targets=targets)
        slot += 1


def _finish_evaluation(
    evaluation: _PolicyEvaluation,
    deployment: Deployment,
    config: NetworkConfig,
) -> PolicyDropResult:
    num_ues = deployment.num_ues
    assoc = evaluation.association
    sinr = _concat(evaluation.sinr_chunks, float)
    sinr_ue = _concat(evaluation.ue_chunks, np.int64)
    sinr_db = 10.0 * np.log10(sinr)
    observed = (
        np.vstack(evaluation.observed_rows) if evaluation.observed_rows else np.empty((0, num_ues))
    )

    counts = np.maximum(np.bincount(sinr_ue, minlength=num_ues), 1)
    cap = config.spectral_efficiency_cap if config.spectral_efficiency_cap is not None else np.inf
    if config.rate_estimator is RateEstimator.LOG_MEAN:
        mean_sinr = np.bincount(sinr_ue, weights=sinr, minlength=num_ues) / counts
        efficiency = np.minimum(np.log2(1.0 + mean_sinr), cap)
    else:
        per_slot = np.minimum(np.log2(1.0 + sinr), cap)
        efficiency = np.bincount(sinr_ue, weights=per_slot, minlength=num_ues) / counts

    ul_load = load_by_cell(assoc, deployment, Direction.UL)
    dl_load = load_by_cell(assoc, deployment, Direction.DL)
    rate = config.bandwidth_hz / ul_load.counts[assoc.ul_cell] * efficiency

    metrics = UplinkMetricsPerUE(
        sinr_db=sinr_db,
        sinr_ue=sinr_ue,
        sinr_slot=_concat(evaluation.slot_chunks, np.int64),
        tx_power_dbm=evaluation.tx_power_dbm,
        mean_rate_bps=rate,
        observed_sinr_db=observed,
        sinr_std_db=sinr_std_summary(observed.T)[0] if num_ues else np.empty(0),
    )
    at_max = np.count_nonzero(evaluation.tx_power_dbm >= config.ue_max_power_dbm)
    return PolicyDropResult(
        case=evaluation.case,
        association=assoc,
        serving_loss_db=evaluation.serving_loss_db,
        metrics=metrics,
        interference_dbm=_concat(evaluation.interference_chunks, float),
        dl_load=dl_load,
        ul_load=ul_load,
        decoupling_fraction=decoupling_fraction(assoc),
        max_power_fraction=float(at_max) / num_ues if num_ues else 0.0,
    )


def run_drop(
    config: NetworkConfig,
    drop_index: int,
    cases: Optional[Sequence[PolicyCase]] = None,
) -> DropResult:
    """
    Run one Monte Carlo realization under every case on shared randomness.

    The deployment, shadowing, per-slot fading and per-slot scheduling draws
    are common to all cases; a case sees different draws only where its own
    association makes the sample spaces differ.

    Args:
        config: Scenario configuration
        drop_index: Index of the drop; selects the random substreams
        cases: Policy cases to evaluate (default: coupled baseline + configured policy)

    Returns:
        DropResult keyed by case name

    Raises:
        EmptyNetworkError: If the deployment cannot be sampled
        SimulationError: If case names are not unique
    """
    started = time.perf_counter()
    cases = tuple(cases) if cases else default_cases(config)
    names = [case.name for case in cases]
    if len(set(names)) != len(names):
        raise SimulationError(f"Case names must be unique: {names}", operation="run_drop")

    streams = DropStreams(config.master_seed, drop_index)
    deployment = sample_deployment(config, streams.seed_for(StreamPurpose.DEPLOYMENT))
    link_state = build_link_state(
        deployment, config, streams.generator(StreamPurpose.SHADOWING)
    )
    link_gain = link_state.linear_gain()
    noise_mw = thermal_noise_mw(config)
    num_ues, num_bs = link_state.shape

    evaluations = [_start_evaluation(case, deployment, link_state, config) for case in cases]

    for slot in range(config.slots_per_drop):
        fading = sample_fading(streams.generator(StreamPurpose.FADING, slot), (num_ues, num_bs))
        for evaluation in evaluations:
            active = evaluation.scheduler.schedule(
                streams.generator(StreamPurpose.SCHEDULING, slot)
            )
            slot_state = UplinkSlotState(
                active_ue=active, tx_power_dbm=evaluation.tx_power_dbm, fading=fading
            )
            evaluation.record(slot, slot_state, link_gain, noise_mw)

    results = {}
    for evaluation in evaluations:
        _complete_schedule(evaluation, streams, link_gain, noise_mw, config.slots_per_drop)
        results[evaluation.case.name] = _finish_evaluation(evaluation, deployment, config)

    log_drop_completed(
        drop_index,
        (time.perf_counter() - started) * 1000.0,
        num_bs=num_bs,
        num_ues=num_ues,
        cases=names,
    )
    return DropResult(
        drop_index=drop_index,
        num_ues=num_ues,
        tier_counts=deployment.tier_counts(),
        cases=results,
    )
