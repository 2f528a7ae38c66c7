"""Steady-state microwave-optics entanglement in a four-mode cavity
optomagnomechanical system (microwave cavity, magnon, phonon, optical cavity)."""

from magnolink.errors import (
    CalibrationError,
    ConfigError,
    DegenerateDriveError,
    DegenerateLyapunovError,
    DomainError,
    MagnolinkError,
    NonConvergenceError,
    ThresholdError,
    UnphysicalCovarianceError,
    UnstableSystemError,
)
from magnolink.model import (
    ModeKind,
    OperatingPoint,
    SystemParams,
    build_diffusion,
    build_drift,
    thermal_occupation,
)
from magnolink.steadystate import (
    DriveSpec,
    SteadyState,
    amplitudes_from_drives,
    operating_point_from_couplings,
    selfconsistent_point,
)
from magnolink.lyapunov import StabilityReport, solve_lyapunov, stability
from magnolink.entanglement import (
    PairCM,
    PointResult,
    evaluate_point,
    log_negativity,
    phonon_occupation,
    reduce_pair,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationError",
    "ConfigError",
    "DegenerateDriveError",
    "DegenerateLyapunovError",
    "DomainError",
    "DriveSpec",
    "MagnolinkError",
    "ModeKind",
    "NonConvergenceError",
    "OperatingPoint",
    "PairCM",
    "PointResult",
    "StabilityReport",
    "SteadyState",
    "SystemParams",
    "ThresholdError",
    "UnphysicalCovarianceError",
    "UnstableSystemError",
    "amplitudes_from_drives",
    "build_diffusion",
    "build_drift",
    "evaluate_point",
    "log_negativity",
    "operating_point_from_couplings",
    "phonon_occupation",
    "reduce_pair",
    "selfconsistent_point",
    "solve_lyapunov",
    "stability",
    "thermal_occupation",
]
