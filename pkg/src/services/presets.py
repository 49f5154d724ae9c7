"""
Comparison presets.

Each preset pairs a coupled baseline with the decoupled policy for one small
cell power class and bias, with the analytical reference gains it is checked against.
"""

from src.schemas.network import UlPolicy
from src.schemas.presets import PolicyCase, ScenarioPreset, SmallCellProfile
from src.utils.exceptions import ConfigValidationError

DUDE_CASE = PolicyCase(name="dude", ul_policy=UlPolicy.DECOUPLED, small_bias_db=0.0)


def coupled_case(bias_db: float) -> PolicyCase:
    return PolicyCase(
        name=f"coupled_bias{bias_db:g}",
        ul_policy=UlPolicy.COUPLED,
        small_bias_db=bias_db,
    )


def _table_preset(
    name: str,
    profile: SmallCellProfile,
    bias_db: float,
    edge_gain: float,
    median_gain: float,
) -> ScenarioPreset:
    return ScenarioPreset(
        name=name,
        profile=profile,
        baseline=coupled_case(bias_db),
        tests=(DUDE_CASE,),
        reference_gains={"p5": edge_gain, "p50": median_gain},
    )


PRESETS: dict[str, ScenarioPreset] = {
    preset.name: preset
    for preset in (
        _table_preset("pico-bias0", SmallCellProfile.PICOCELL, 0.0, 115.0, 95.0),
        _table_preset("pico-bias6", SmallCellProfile.PICOCELL, 6.0, 50.0, 30.0),
        _table_preset("femto-bias0", SmallCellProfile.FEMTOCELL, 0.0, 270.0, 260.0),
        _table_preset("femto-bias8", SmallCellProfile.FEMTOCELL, 8.0, 140.0, 120.0),
        ScenarioPreset(
            name="fig1-cases",
            profile=SmallCellProfile.PICOCELL,
            baseline=coupled_case(0.0),
            tests=(coupled_case(6.0), DUDE_CASE),
        ),
    )
}


def get_preset(name: str) -> ScenarioPreset:
    """
    Look up a preset by name.

    Raises:
        ConfigValidationError: If the preset is unknown
    """
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigValidationError(
            f"Unknown preset '{name}'; choose one of: {', '.join(PRESETS)}", field="preset"
        ) from None
