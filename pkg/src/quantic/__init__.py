"""Computing with finite ordered magmas, prequantales, and their nuclei."""

from .errors import (
    CarrierTooLarge,
    HypothesisNotMet,
    InternalCheckError,
    IterationBudgetExceeded,
    NoUnit,
    NotAMorphism,
    QuanticError,
    StructureError,
    UndecidableFamily,
)
from .magma import ClassificationProfile, MagmaMorphism, OrderedMagma, Residual, classify
from .nucleus import MonotoneMap, enumerate_closures, enumerate_nuclei, is_closure, is_nucleus
from .poset import FinitePoset, PosetFlags

__all__ = [
    "CarrierTooLarge",
    "ClassificationProfile",
    "FinitePoset",
    "HypothesisNotMet",
    "InternalCheckError",
    "IterationBudgetExceeded",
    "MagmaMorphism",
    "MonotoneMap",
    "NoUnit",
    "NotAMorphism",
    "OrderedMagma",
    "PosetFlags",
    "QuanticError",
    "Residual",
    "StructureError",
    "UndecidableFamily",
    "classify",
    "enumerate_closures",
    "enumerate_nuclei",
    "is_closure",
    "is_nucleus",
]
