"""
Distribution statistics: empirical CDFs, percentiles, gains and report assembly.

Percentiles use linear interpolation between order statistics at the virtual
index (n - 1)·p, which is numpy's default "linear" quantile method.
"""

from collections.abc import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from src.config import settings
from src.models.uplink import DropResult, PolicyDropResult
from src.schemas.network import Direction, NetworkConfig, Tier
from src.schemas.presets import PolicyCase
from src.schemas.report import PolicyReport, ScenarioReport
from src.utils.exceptions import EmptySamplesError, InvalidPercentileError, ZeroBaselineError

PERCENTILE_LEVELS = (0.05, 0.5, 0.95)

# report field -> UplinkMetricsPerUE attribute, for the per-drop standard errors
PER_UE_METRICS = {
    "ul_tx_power_dbm": "tx_power_dbm",
    "ul_sinr_std_db": "sinr_std_db",
    "ul_rate_bps": "mean_rate_bps",
}


def _samples(samples: ArrayLike) -> np.ndarray:
    arr = np.asarray(samples, dtype=float).ravel()
    if arr.size == 0:
        raise EmptySamplesError("At least one sample is required")
    return arr


def percentile_label(p: float) -> str:
    """Table key of a percentile level, e.g. 0.05 -> 'p5'."""
    return f"p{p * 100:g}"


def cdf_arrays(samples: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Sorted values and their step probabilities k/n."""
    values = np.sort(_samples(samples))
    probs = np.arange(1, values.size + 1, dtype=float) / values.size
    return values, probs


def empirical_cdf(samples: ArrayLike) -> list[tuple[float, float]]:
    """
    Empirical CDF as ordered (value, cumulative probability) pairs.

    Raises:
        EmptySamplesError: If no sample is given
    """
    values, probs = cdf_arrays(samples)
    return list(zip(values.tolist(), probs.tolist()))


def percentile(samples: ArrayLike, p: float) -> float:
    """
    Linearly interpolated percentile, p in [0, 1].

    Raises:
        EmptySamplesError: If no sample is given
        InvalidPercentileError: If p is outside [0, 1]
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidPercentileError(f"Percentile level must lie in [0, 1], got {p}")
    return float(np.quantile(_samples(samples), p, method="linear"))


def rate_gain_percent(rates_test: ArrayLike, rates_baseline: ArrayLike, p: float) -> float:
    """
    Relative gain of the test percentile over the baseline percentile, in percent.

    Raises:
        ZeroBaselineError: If the baseline percentile is zero
    """
    baseline = percentile(rates_baseline, p)
    if baseline == 0:
        raise ZeroBaselineError(f"Baseline rate percentile at p={p} is zero")
    return 100.0 * (percentile(rates_test, p) / baseline - 1.0)


def power_reduction_db(values_test: ArrayLike, values_baseline: ArrayLike, p: float) -> float:
    """Baseline percentile minus test percentile, for dB-valued metrics."""
    return percentile(values_baseline, p) - percentile(values_test, p)


def outage_probability(sinr_db: ArrayLike, threshold_db: float) -> float:
    """Share of SINR samples strictly below the threshold."""
    arr = _samples(sinr_db)
    return float(np.count_nonzero(arr < threshold_db)) / arr.size


def mean_with_stderr(samples: ArrayLike) -> tuple[float, float]:
    """Sample mean and its standard error."""
    arr = _samples(samples)
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))


def sinr_std_summary(
    series: Sequence[ArrayLike],
) -> tuple[np.ndarray, list[tuple[float, float]]]:
    """
    Per-UE population std of SINR series (dB) and the CDF over UEs.

    Raises:
        EmptySamplesError: If a UE has no sample
    """
    stds = []
    for ue, values in enumerate(series):
        arr = np.asarray(values, dtype=float)
        if arr.size == 0:
            raise EmptySamplesError(f"UE {ue} has no SINR sample")
        stds.append(float(np.std(arr)))
    std_array = np.array(stds, dtype=float)
    return std_array, empirical_cdf(std_array)


def _percentile_table(samples: dict[str, np.ndarray]) -> dict[str, dict[str, float]]:
    return {
        metric: {percentile_label(p): percentile(values, p) for p in PERCENTILE_LEVELS}
        for metric, values in samples.items()
        if values.size
    }


def _concat(arrays: Iterable[np.ndarray]) -> np.ndarray:
    parts = list(arrays)
    return np.concatenate(parts) if parts else np.empty(0)


def _drop_mean_stderr(results: Sequence[PolicyDropResult]) -> dict[str, dict[str, float]]:
    """Mean and standard error of the per-drop means of each per-UE metric."""
    table = {}
    for metric, attribute in PER_UE_METRICS.items():
        means = [
            float(getattr(r.metrics, attribute).mean())
            for r in results
            if getattr(r.metrics, attribute).size
        ]
        if means:
            mean, stderr = mean_with_stderr(means)
            table[metric] = {"mean": mean, "stderr": stderr}
    return table


def _policy_report(
    case: PolicyCase,
    results: Sequence[PolicyDropResult],
    config: NetworkConfig,
) -> PolicyReport:
    samples = {
        "ul_tx_power_dbm": _concat(r.metrics.tx_power_dbm for r in results),
        "ul_sinr_db": _concat(r.metrics.sinr_db for r in results),
        "ul_sinr_std_db": _concat(r.metrics.sinr_std_db for r in results),
        "ul_rate_bps": _concat(r.metrics.mean_rate_bps for r in results),
        "ul_interference_dbm": _concat(r.interference_dbm for r in results),
    }

    mean_ues_per_cell: dict[str, dict[str, float]] = {}
    for direction in Direction:
        per_tier = {}
        for tier in Tier:
            attached = sum(r.load(direction).tier_attached[tier] for r in results)
            cells = sum(r.load(direction).tier_cells[tier] for r in results)
            per_tier[tier.value] = attached / cells if cells else 0.0
        mean_ues_per_cell[direction.value] = per_tier

    num_ues = sum(r.association.num_ues for r in results)
    decoupled = sum(
        int(np.count_nonzero(r.association.ul_cell != r.association.dl_cell)) for r in results
    )
    tx = samples["ul_tx_power_dbm"]
    sinr = samples["ul_sinr_db"]

    return PolicyReport(
        name=case.name,
        ul_policy=case.ul_policy,
        small_bias_db=case.small_bias_db,
        mean_ues_per_cell=mean_ues_per_cell,
        decoupling_fraction=decoupled / num_ues if num_ues else 0.0,
        outage_probability=outage_probability(sinr, config.outage_threshold_db) if sinr.size else 0.0,
        max_power_fraction=(
            float(np.count_nonzero(tx >= config.ue_max_power_dbm)) / tx.size if tx.size else 0.0
        ),
        percentiles=_percentile_table(samples),
        drop_mean_stderr=_drop_mean_stderr(results),
        **{metric: values.tolist() for metric, values in samples.items()},
    )


def merge_drop_results(
    drop_results: Iterable[DropResult],
    config: NetworkConfig,
    cases: Sequence[PolicyCase],
) -> ScenarioReport:
    """
    Pool per-drop results into a scenario report.

    Drops are ordered by drop index first, so the report does not depend on
    the order in which results arrive.
    """
    ordered = sorted(drop_results, key=lambda result: result.drop_index)
    policies = {
        case.name: _policy_report(case, [r.cases[case.name] for r in ordered], config)
        for case in cases
    }
    return ScenarioReport(
        version=settings.VERSION,
        master_seed=config.master_seed,
        num_drops=len(ordered),
        config=config,
        policies=policies,
    )
