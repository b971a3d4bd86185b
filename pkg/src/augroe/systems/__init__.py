from .acoustics import AcousticsModel, acoustic_interface_coefficients, acoustics_model
from .analytic import (
    AnalyticalSolution,
    analytic_erf_transient,
    analytic_piecewise_steady,
    analytic_sine_steady,
    analytic_source_steady,
)
from .base import Augmentation, SystemModel, offdiag_eigen, piecewise, sample_profile
from .heat import K1, HeatModel, epsilon_for, heat_augmented_eigen, heat_model

__all__ = [
    "AcousticsModel",
    "AnalyticalSolution",
    "Augmentation",
    "HeatModel",
    "K1",
    "SystemModel",
    "acoustic_interface_coefficients",
    "acoustics_model",
    "analytic_erf_transient",
    "analytic_piecewise_steady",
    "analytic_sine_steady",
    "analytic_source_steady",
    "epsilon_for",
    "heat_augmented_eigen",
    "heat_model",
    "offdiag_eigen",
    "piecewise",
    "sample_profile",
]
