"""
Report repository: persists scenario reports, CDF tables and gain tables.

Every float is written with a fixed number of significant digits so that
parsing an output file gives back the in-memory value bit for bit.
"""

import json
import math
from collections.abc import Sequence
from pathlib import Path
from typing import Any, Optional, Union

import pandas as pd

from src.config import settings
from src.schemas.report import GainRow, ReductionRow, ScenarioReport
from src.services.metrics import cdf_arrays
from src.utils.exceptions import OutputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

# file tag -> PolicyReport sample field
CDF_METRICS: dict[str, str] = {
    "tx_power": "ul_tx_power_dbm",
    "sinr": "ul_sinr_db",
    "sinr_std": "ul_sinr_std_db",
    "rate": "ul_rate_bps",
}

REPORT_FILE = "report.json"
GAINS_FILE = "gains.csv"
REDUCTIONS_FILE = "reductions.csv"
SWEEP_FILE = "sweep.csv"


class FixedDigitsEncoder(json.JSONEncoder):
    """JSON encoder that renders floats with a fixed count of significant digits."""

    def __init__(self, *args: Any, digits: int = settings.FLOAT_SIGNIFICANT_DIGITS, **kwargs: Any):
        super().__init__(*args, **kwargs)
        self.digits = digits

    def _floatstr(self, value: float) -> str:
        if not math.isfinite(value):
            raise ValueError(f"Non-finite float {value!r} is not valid JSON")
        return format(value, f"#.{self.digits}g")

    def iterencode(self, o: Any, _one_shot: bool = False):
        indent = self.indent
        if indent is not None and not isinstance(indent, str):
            indent = " " * indent
        encoder = (
            json.encoder.encode_basestring_ascii if self.ensure_ascii else json.encoder.encode_basestring
        )
        _iterencode = json.encoder._make_iterencode(
            {} if self.check_circular else None,
            self.default,
            encoder,
            indent,
            self._floatstr,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return _iterencode(o, 0)


def float_format() -> str:
    """printf-style float format used for every CSV."""
    return f"%#.{settings.FLOAT_SIGNIFICANT_DIGITS}g"


class ReportRepository:
    """File-system store for one output directory."""

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir)

    def _prepare(self, name: str) -> Path:
        try:
            self.out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError(
                f"Cannot create output directory {self.out_dir}: {e}", path=str(self.out_dir)
            ) from e
        return self.out_dir / name

    def _write_frame(self, frame: pd.DataFrame, name: str) -> Path:
        path = self._prepare(name)
        try:
            frame.to_csv(path, index=False, float_format=float_format(), lineterminator="\n")
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}", path=str(path)) from e
        logger.debug("Wrote CSV", path=str(path), rows=len(frame))
        return path

    def save_report(self, report: ScenarioReport) -> Path:
        """Write report.json."""
        path = self._prepare(REPORT_FILE)
        text = json.dumps(report.model_dump(mode="json"), cls=FixedDigitsEncoder, indent=2)
        try:
            path.write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            raise OutputError(f"Cannot write {path}: {e}", path=str(path)) from e
        logger.info("Wrote report", path=str(path), policies=list(report.policies))
        return path

    def load_report(self) -> ScenarioReport:
        """Read report.json back into a ScenarioReport."""
        path = self.out_dir / REPORT_FILE
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise OutputError(f"Cannot read {path}: {e}", path=str(path)) from e
        return ScenarioReport.model_validate(data)

    def save_cdfs(self, report: ScenarioReport) -> list[Path]:
        """Write cdf_<metric>_<policy>.csv for every policy and metric with samples."""
        paths = []
        for policy_name, policy in report.policies.items():
            for tag, metric in CDF_METRICS.items():
                samples = getattr(policy, metric)
                if not samples:
                    continue
                values, probs = cdf_arrays(samples)
                frame = pd.DataFrame({"value": values, "cum_prob": probs})
                paths.append(self._write_frame(frame, f"cdf_{tag}_{policy_name}.csv"))
        return paths

    def load_cdf(self, metric: str, policy: str) -> pd.DataFrame:
        """Read one CDF file with exact float parsing."""
        path = self.out_dir / f"cdf_{metric}_{policy}.csv"
        try:
            return pd.read_csv(path, float_precision="round_trip")
        except OSError as e:
            raise OutputError(f"Cannot read {path}: {e}", path=str(path)) from e

    def save_gains(self, gains: Sequence[GainRow]) -> Path:
        """
        Write gains.csv (preset, percentile, gain_percent).

        When a table holds more than one comparison, the preset column reads
        "<preset>/<test>-vs-<baseline>".
        """
        pairs = {(row.baseline, row.test) for row in gains}
        rows = [
            {
                "preset": row.preset if len(pairs) <= 1 else f"{row.preset}/{row.test}-vs-{row.baseline}",
                "percentile": row.percentile,
                "gain_percent": row.gain_percent,
            }
            for row in gains
        ]
        frame = pd.DataFrame(rows, columns=["preset", "percentile", "gain_percent"])
        return self._write_frame(frame, GAINS_FILE)

    def save_reductions(self, reductions: Sequence[ReductionRow]) -> Path:
        """Write reductions.csv (baseline, test, metric, percentile, reduction_db)."""
        frame = pd.DataFrame(
            [row.model_dump(mode="json") for row in reductions],
            columns=list(ReductionRow.model_fields),
        )
        return self._write_frame(frame, REDUCTIONS_FILE)

    def save_sweep(self, rows: Sequence[dict[str, Any]]) -> Path:
        """Write the per-value summary of a parameter sweep."""
        return self._write_frame(pd.DataFrame(list(rows)), SWEEP_FILE)

    def save_all(self, report: ScenarioReport) -> list[Path]:
        """Write the report, its CDFs and, when present, the gain and reduction tables."""
        paths = [self.save_report(report), *self.save_cdfs(report)]
        if report.gains:
            paths.append(self.save_gains(report.gains))
        if report.reductions:
            paths.append(self.save_reductions(report.reductions))
        return paths
