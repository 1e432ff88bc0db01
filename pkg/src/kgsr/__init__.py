"""Bound states of the (generalized) Klein-Gordon oscillator in Som-Raychaudhuri space-time."""

from .heun import (
    SeriesNonTerminationWarning,
    SeriesSolution,
    radial_wavefunction,
    series_coefficients,
    termination_residuals,
)
from .model import (
    DegenerateConfigurationError,
    Mode,
    PhysicalConfig,
    QuantumNumbers,
    RadialCoefficients,
    effective_angular_momentum,
    grouped_coefficients,
    radial_coefficients,
)
from .oracle import GridSpec, OracleError, oracle_energy, radial_operator_eigenvalues
from .spectrum import (
    EnergyLevel,
    NoBoundStateError,
    RootSearchSpec,
    ab_flux_shift_check,
    quantization_residual,
    select_branch,
    solve_energy,
)

__version__ = "0.1.0"
