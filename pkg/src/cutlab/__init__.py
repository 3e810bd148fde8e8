"""Deterministic cut-query algorithm laboratory."""

from .config import DESK, PAPER, Params, get_profile
from .oracle import (
    AugmentedView,
    BaseView,
    ContractedView,
    ContractViolation,
    CutCache,
    Flow,
    GraphFormatError,
    GraphInstance,
    InducedView,
    QueryInputError,
    QueryLedger,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentedView",
    "BaseView",
    "ContractedView",
    "ContractViolation",
    "CutCache",
    "DESK",
    "Flow",
    "GraphFormatError",
    "GraphInstance",
    "InducedView",
    "PAPER",
    "Params",
    "QueryInputError",
    "QueryLedger",
    "get_profile",
]
