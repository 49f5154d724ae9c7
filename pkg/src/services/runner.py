"""
Scenario orchestration.

Drops fan out to a worker pool; every worker gets the immutable config and a
drop index and returns a DropResult. Merging is single-threaded and ordered
by drop index, so the report is the same for any worker count.
"""

import multiprocessing
import time
from collections.abc import Sequence
from typing import Any, Optional

from src.config import apply_overrides, settings
from src.models.uplink import DropResult
from src.schemas.network import NetworkConfig, Tier
from src.schemas.presets import PolicyCase, ScenarioPreset
from src.schemas.report import GainRow, ReductionRow, ScenarioReport
from src.utils.exceptions import ConfigValidationError, DudeSimError
from src.utils.logging import get_logger, log_scenario_operation

from .metrics import (
    merge_drop_results,
    percentile_label,
    power_reduction_db,
    rate_gain_percent,
)
from .uplink import default_cases, run_drop

logger = get_logger(__name__)

GAIN_LEVELS = (0.05, 0.5)
POWER_LEVELS = (0.5, 0.95)
SINR_STD_LEVELS = (0.5,)

# Fixed by a preset's cases and small cell profile
PRESET_FIELDS = frozenset({"small_bias_db", "small_power_dbm"})

DropTask = tuple[NetworkConfig, int, tuple[PolicyCase, ...]]


def _run_drop_task(task: DropTask) -> DropResult:
    config, drop_index, cases = task
    return run_drop(config, drop_index, cases)


def comparison_tables(
    report: ScenarioReport,
    label: str,
    pairs: Sequence[tuple[PolicyCase, PolicyCase]],
    reference_gains: Optional[dict[str, float]] = None,
    reference_baseline: Optional[str] = None,
) -> tuple[list[GainRow], list[ReductionRow]]:
    """
    Rate gains and dB reductions of each (baseline, test) pair.

    Reference values are attached only to pairs whose baseline is reference_baseline.
    """
    gains: list[GainRow] = []
    reductions: list[ReductionRow] = []
    for baseline, test in pairs:
        base = report.policies[baseline.name]
        other = report.policies[test.name]
        with_reference = reference_gains is not None and baseline.name == reference_baseline
        for p in GAIN_LEVELS:
            gains.append(GainRow(
                preset=label,
                baseline=baseline.name,
                test=test.name,
                percentile=p,
                gain_percent=rate_gain_percent(other.ul_rate_bps, base.ul_rate_bps, p),
                reference_percent=(
                    reference_gains.get(percentile_label(p)) if with_reference and reference_gains else None
                ),
            ))
        metric_levels = [
            ("ul_tx_power_dbm", POWER_LEVELS),
            ("ul_sinr_std_db", SINR_STD_LEVELS),
            ("ul_interference_dbm", (0.5,)),
        ]
        for metric, levels in metric_levels:
            test_values = getattr(other, metric)
            base_values = getattr(base, metric)
            if not test_values or not base_values:
                continue
            for p in levels:
                reductions.append(ReductionRow(
                    baseline=baseline.name,
                    test=test.name,
                    metric=metric,
                    percentile=p,
                    reduction_db=power_reduction_db(test_values, base_values, p),
                ))
    return gains, reductions


def default_pairs(cases: Sequence[PolicyCase]) -> list[tuple[PolicyCase, PolicyCase]]:
    """First case is the baseline of every other case."""
    return [(cases[0], case) for case in cases[1:]]


class ScenarioRunner:
    """Runs scenarios, preset comparisons and parameter sweeps."""

    def __init__(self, workers: Optional[int] = None):
        self.workers = max(1, int(workers or settings.DEFAULT_WORKERS))

    def run_drops(self, config: NetworkConfig, cases: Sequence[PolicyCase]) -> list[DropResult]:
        """Execute all drops, serially or on a process pool."""
        tasks: list[DropTask] = [(config, index, tuple(cases)) for index in range(config.num_drops)]
        processes = min(self.workers, len(tasks))
        if processes <= 1:
            return [_run_drop_task(task) for task in tasks]
        with multiprocessing.Pool(processes=processes) as pool:
            return pool.map(_run_drop_task, tasks)

    def run_scenario(
        self,
        config: NetworkConfig,
        cases: Optional[Sequence[PolicyCase]] = None,
    ) -> ScenarioReport:
        """
        Run config.num_drops drops and pool them into a report.

        With the default cases (coupled baseline + configured policy) the
        report also carries gain and reduction tables against the baseline.
        """
        use_defaults = not cases
        cases = default_cases(config) if use_defaults else tuple(cases)
        started = time.perf_counter()
        logger.info(
            "Scenario started",
            num_drops=config.num_drops,
            slots_per_drop=config.slots_per_drop,
            workers=self.workers,
            cases=[case.name for case in cases],
        )
        try:
            drops = self.run_drops(config, cases)
            report = merge_drop_results(drops, config, cases)
        except DudeSimError as e:
            log_scenario_operation(
                "run_scenario",
                success=False,
                duration_ms=(time.perf_counter() - started) * 1000.0,
                error=str(e),
            )
            raise

        if use_defaults and len(cases) > 1:
            gains, reductions = comparison_tables(report, "run", default_pairs(cases))
            report = report.model_copy(update={"gains": gains, "reductions": reductions})

        log_scenario_operation(
            "run_scenario",
            success=True,
            duration_ms=(time.perf_counter() - started) * 1000.0,
            num_drops=config.num_drops,
            workers=self.workers,
        )
        return report

    def compare_policies(self, config: NetworkConfig, preset: ScenarioPreset) -> ScenarioReport:
        """
        Run a preset's baseline and tests on shared randomness and tabulate gains.

        The preset's small cell profile overrides small_power_dbm.
        """
        scenario_config = apply_overrides(config, small_power_dbm=preset.profile.power_dbm)
        report = self.run_scenario(scenario_config, preset.cases)
        gains, reductions = comparison_tables(
            report,
            preset.name,
            preset.comparisons,
            reference_gains=preset.reference_gains or None,
            reference_baseline=preset.baseline.name,
        )
        logger.info(
            "Preset comparison finished",
            preset=preset.name,
            gains={
                f"{row.test}_vs_{row.baseline}@{percentile_label(row.percentile)}": round(row.gain_percent, 2)
                for row in gains
            },
        )
        return report.model_copy(
            update={"preset": preset.name, "gains": gains, "reductions": reductions}
        )

    def sweep(
        self,
        config: NetworkConfig,
        param: str,
        values: Sequence[Any],
        preset: Optional[ScenarioPreset] = None,
    ) -> list[tuple[Any, ScenarioReport]]:
        """
        Re-run the scenario (or a preset comparison) for each value of one config field.

        Raises:
            ConfigValidationError: If param is not a config field, a value is invalid,
                or the preset fixes param itself
        """
        if param not in NetworkConfig.model_fields:
            raise ConfigValidationError(f"Unknown sweep parameter '{param}'", field=param)
        if preset is not None and param in PRESET_FIELDS:
            raise ConfigValidationError(
                f"Preset '{preset.name}' sets {param} per case; sweep it without --preset",
                field=param,
            )

        results = []
        for value in values:
            swept = apply_overrides(config, **{param: value})
            logger.info("Sweep point", param=param, value=value)
            if preset is not None:
                report = self.compare_policies(swept, preset)
            else:
                report = self.run_scenario(swept)
            results.append((value, report))
        return results


def sweep_summary_rows(
    param: str,
    results: Sequence[tuple[Any, ScenarioReport]],
) -> list[dict[str, Any]]:
    """One row per (sweep value, case) with the headline statistics."""
    rows = []
    for value, report in results:
        for name, policy in report.policies.items():
            rows.append({
                param: value,
                "case": name,
                "rate_p5_bps": policy.percentiles["ul_rate_bps"]["p5"],
                "rate_p50_bps": policy.percentiles["ul_rate_bps"]["p50"],
                "rate_mean_bps": policy.drop_mean_stderr["ul_rate_bps"]["mean"],
                "rate_mean_stderr_bps": policy.drop_mean_stderr["ul_rate_bps"]["stderr"],
                "tx_power_p50_dbm": policy.percentiles["ul_tx_power_dbm"]["p50"],
                "sinr_std_p50_db": policy.percentiles["ul_sinr_std_db"]["p50"],
                "decoupling_fraction": policy.decoupling_fraction,
                "ul_ues_per_small_cell": policy.mean_ues_per_cell["ul"][Tier.SMALL.value],
                "outage_probability": policy.outage_probability,
            })
    return rows


def run_scenario(config: NetworkConfig, workers: Optional[int] = None) -> ScenarioReport:
    """Run a scenario with the default cases."""
    return ScenarioRunner(workers).run_scenario(config)


def compare_policies(
    config: NetworkConfig,
    preset: ScenarioPreset,
    workers: Optional[int] = None,
) -> ScenarioReport:
    """Run one preset comparison."""
    return ScenarioRunner(workers).compare_policies(config, preset)
