"""Numpy-backed runtime value types produced by the simulation services."""

from .association import AssociationMap, CellLoad
from .channel import LinkState
from .network import TIER_CODES, BaseStation, Deployment
from .uplink import NO_UE, DropResult, PolicyDropResult, UplinkMetricsPerUE, UplinkSlotState

__all__ = [
    "NO_UE",
    "TIER_CODES",
    "AssociationMap",
    "BaseStation",
    "CellLoad",
    "Deployment",
    "DropResult",
    "LinkState",
    "PolicyDropResult",
    "UplinkMetricsPerUE",
    "UplinkSlotState",
]
