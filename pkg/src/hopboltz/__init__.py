"""Two-state neural networks: Hopfield dynamics, Hebbian storage, Gibbs
sampling for Boltzmann machines, and Perron-Frobenius ergodicity checks."""

from hopboltz.errors import (
    ConvergenceBoundViolation,
    HopboltzError,
    MaxStepsExceeded,
    NoConvergence,
    NotIrreducible,
    NotStochastic,
    NotUnique,
    ScopeRejection,
    SizeGuardError,
    TieSite,
)
from hopboltz.network import NetworkSpec, NetworkState, Params, Schedule
from hopboltz.hopfield import ConvergenceReport, HopfieldParams
from hopboltz.rng import RngStream

__version__ = "0.1.0"

__all__ = [
    "ConvergenceBoundViolation",
    "ConvergenceReport",
    "HopboltzError",
    "HopfieldParams",
    "MaxStepsExceeded",
    "NetworkSpec",
    "NetworkState",
    "NoConvergence",
    "NotIrreducible",
    "NotStochastic",
    "NotUnique",
    "Params",
    "RngStream",
    "Schedule",
    "ScopeRejection",
    "SizeGuardError",
    "TieSite",
]
