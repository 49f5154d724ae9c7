"""Policy case and comparison preset schemas."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field

from .network import UlPolicy


class SmallCellProfile(str, Enum):
    """Small cell power classes."""
    PICOCELL = "picocell"
    FEMTOCELL = "femtocell"

    @property
    def power_dbm(self) -> float:
        """Transmit power of the profile."""
        return 30.0 if self is SmallCellProfile.PICOCELL else 20.0


class PolicyCase(BaseModel):
    """One evaluated association world: a UL policy and the small-cell DL bias it runs with."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1, description="Case label used in reports and file names")
    ul_policy: UlPolicy = Field(..., description="UL association policy")
    small_bias_db: float = Field(0.0, description="Small-cell DL selection bias in dB")


class ScenarioPreset(BaseModel):
    """A baseline-vs-test comparison for one small cell class and bias."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Preset name as given on the command line")
    profile: SmallCellProfile = Field(..., description="Small cell power profile")
    baseline: PolicyCase = Field(..., description="Coupled baseline case")
    tests: tuple[PolicyCase, ...] = Field(..., min_length=1, description="Cases compared against the baseline")
    reference_gains: dict[str, float] = Field(
        default_factory=dict,
        description="Analytical reference rate gains in percent, keyed by percentile label",
    )

    @property
    def cases(self) -> tuple[PolicyCase, ...]:
        """Baseline followed by all test cases."""
        return (self.baseline, *self.tests)

    @property
    def comparisons(self) -> list[tuple[PolicyCase, PolicyCase]]:
        """(baseline, test) pairs: every test against the baseline, then every
        coupled test against every decoupled test."""
        pairs = [(self.baseline, test) for test in self.tests]
        coupled = [t for t in self.tests if t.ul_policy is UlPolicy.COUPLED]
        decoupled = [t for t in self.tests if t.ul_policy is UlPolicy.DECOUPLED]
        pairs.extend((c, d) for c in coupled for d in decoupled)
        return pairs
