"""Cross-cavity correlations of squared scalar fields across a quantum-fluctuating mirror."""

__version__ = "0.1.0"

from .errors import (
    BasisSizeError,
    ConfigError,
    ConvergenceError,
    DomainError,
    FitError,
    MirrorCorrError,
)
from .model import CouplingModel, ModeSet, PhysicalParams, load_config
from .perturb import CorrelationResult, PerturbativeState

__all__ = [
    "BasisSizeError",
    "ConfigError",
    "ConvergenceError",
    "CorrelationResult",
    "CouplingModel",
    "DomainError",
    "FitError",
    "MirrorCorrError",
    "ModeSet",
    "PerturbativeState",
    "PhysicalParams",
    "load_config",
    "__version__",
]
