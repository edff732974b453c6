"""Certified search for balancing and Lucas-balancing numbers that are differences of two repdigits."""

from .highprec import DEFAULT_SCALE, Cmp, FixedReal
from .kernels import BACKEND
from .repdigits import DifferenceRepresentation, difference_representations
from .sequences import BALANCING, LUCAS_BALANCING
from .solver import ProofReport, ProveConfig, prove

__all__ = [
    "BACKEND",
    "BALANCING",
    "Cmp",
    "DEFAULT_SCALE",
    "DifferenceRepresentation",
    "FixedReal",
    "LUCAS_BALANCING",
    "ProofReport",
    "ProveConfig",
    "difference_representations",
    "prove",
]

__version__ = "0.1.0"
