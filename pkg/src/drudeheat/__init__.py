"""Thermodynamics of a free quantum particle coupled to a Drude bath.

Units: hbar = k_B = M = 1.
"""
from .model import (
    BathSpec,
    MatsubaraRoots,
    SystemSpec,
    gamma_hat,
    gamma_hat_deriv,
    roots,
)
from .thermo import (
    SumConfig,
    ThermoPoint,
    energy_E,
    entropy,
    free_energy,
    heat_ce,
    heat_cz,
    internal_U,
    log_partition,
    thermo_point,
)

__version__ = "0.1.0"

__all__ = [
    "BathSpec",
    "SystemSpec",
    "MatsubaraRoots",
    "gamma_hat",
    "gamma_hat_deriv",
    "roots",
    "SumConfig",
    "ThermoPoint",
    "energy_E",
    "heat_ce",
    "heat_cz",
    "internal_U",
    "log_partition",
    "entropy",
    "free_energy",
    "thermo_point",
]
