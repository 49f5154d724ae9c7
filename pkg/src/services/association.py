"""
Cell association service.

DL association is max biased RSRP (long-term, fading excluded). Under the
coupled policy the UL follows the DL; under the decoupled policy the UL cell
is the one with minimum coupling loss. Ties go to the lowest BS index.
"""

from typing import Optional

import numpy as np

from src.models.association import AssociationMap, CellLoad
from src.models.channel import LinkState
from src.models.network import TIER_CODES, Deployment
from src.schemas.network import Direction, Tier, UlPolicy
from src.schemas.presets import PolicyCase
from src.utils.exceptions import SimulationError


def associate_dl(
    deployment: Deployment,
    link_state: LinkState,
    bias_db: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Per-UE DL serving cell: argmax of tx power - coupling loss + bias.

    Args:
        deployment: Sampled deployment
        link_state: Large-scale losses of the drop
        bias_db: Per-BS bias overriding the deployment's configured bias

    Returns:
        BS index per UE
    """
    bias = deployment.bs_bias_db if bias_db is None else np.asarray(bias_db, dtype=float)
    rsrp = deployment.bs_tx_power_dbm[None, :] - link_state.coupling_loss_db + bias[None, :]
    return np.argmax(rsrp, axis=1)


def associate_ul(
    policy: UlPolicy,
    deployment: Deployment,
    link_state: LinkState,
    dl_assoc: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Per-UE UL serving cell.

    Coupled copies the DL association; decoupled picks the minimum coupling
    loss, which is the BS receiving the most power from the UE since the UE
    power budget does not depend on the BS. Bias plays no role in the UL.

    Raises:
        SimulationError: If the coupled policy is requested without a DL association
    """
    if policy is UlPolicy.COUPLED:
        if dl_assoc is None:
            raise SimulationError(
                "Coupled UL association needs the DL association", operation="associate_ul"
            )
        return np.array(dl_assoc, copy=True)

    if link_state.shape[1] != deployment.num_bs:
        raise SimulationError("Link state does not match deployment", operation="associate_ul")
    return np.argmin(link_state.coupling_loss_db, axis=1)


def associate(
    case: PolicyCase,
    deployment: Deployment,
    link_state: LinkState,
    decoupled_dl_bias: bool = False,
) -> AssociationMap:
    """
    Build the association map of one policy case.

    The decoupled DL stays unbiased max-RSRP unless decoupled_dl_bias is set.
    """
    apply_bias = case.ul_policy is UlPolicy.COUPLED or decoupled_dl_bias
    bias = deployment.bias_vector(case.small_bias_db if apply_bias else 0.0)
    dl_cell = associate_dl(deployment, link_state, bias)
    ul_cell = associate_ul(case.ul_policy, deployment, link_state, dl_cell)
    return AssociationMap(
        dl_cell=dl_cell,
        ul_cell=ul_cell,
        policy=case.ul_policy,
        num_cells=deployment.num_bs,
    )


def decoupling_fraction(assoc: AssociationMap) -> float:
    """Share of UEs whose UL cell differs from their DL cell."""
    if assoc.num_ues == 0:
        return 0.0
    return float(np.count_nonzero(assoc.ul_cell != assoc.dl_cell)) / assoc.num_ues


def load_by_cell(
    assoc: AssociationMap,
    deployment: Deployment,
    direction: Direction,
) -> CellLoad:
    """Attached UEs per BS in one direction, with per-tier totals."""
    counts = np.bincount(assoc.cells(direction), minlength=deployment.num_bs)
    tier_attached = {}
    tier_cells = {}
    for tier in Tier:
        mask = deployment.bs_tier == TIER_CODES[tier]
        tier_attached[tier] = int(counts[mask].sum())
        tier_cells[tier] = int(np.count_nonzero(mask))
    return CellLoad(
        direction=direction,
        counts=counts,
        tier_attached=tier_attached,
        tier_cells=tier_cells,
    )
