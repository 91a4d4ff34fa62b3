"""
Gaussian dynamics of two cavity arrays driven by the finite-bandwidth
two-mode squeezed output of a parametric oscillator, and the entanglement
the drive replicates between the arrays.
"""

from .analysis import (
    Lock,
    PairEntanglementMap,
    SweepResult,
    TiedRatio,
    normal_mode_pair_map,
    pair_map,
    pair_value,
    rotate_to_modes,
    sweep,
    two_mode_reduction,
)
from .arrays import (
    BroadbandMoments,
    NormalModes,
    SystemParams,
    broadband_margin,
    broadband_moments,
    broadband_pair_en,
    build_drift,
    build_injection,
    kossakowski,
    normal_modes,
    source_n0,
    source_nt,
)
from .config import RunConfig, parse_config
from .errors import (
    ConfigError,
    MalformedInputError,
    NoSteadyStateError,
    NumericalError,
    SimulationError,
    ThresholdError,
)
from .gaussian import (
    log_negativity,
    normalized_en,
    physicality_defect,
    quadrature_covariance,
    symplectic_eigs,
    vacuum_two_mode,
)
from .reservoir import (
    PoParams,
    SpectralCurve,
    antisqueezing_spectrum,
    decay_rates,
    default_omega_grid,
    output_corr_tau,
    reservoir_en,
    spectral_density,
    squeezing_spectrum,
)
from .steady import (
    CorrMatrix,
    DriftDiffusion,
    cascade_steady,
    cascade_system,
    extract_array_block,
    lyapunov_steady,
    reduced_steady,
    transient,
    vacuum_corr,
)

__version__ = "0.1.0"

__all__ = [
    "BroadbandMoments",
    "ConfigError",
    "CorrMatrix",
    "DriftDiffusion",
    "Lock",
    "MalformedInputError",
    "NoSteadyStateError",
    "NormalModes",
    "NumericalError",
    "PairEntanglementMap",
    "PoParams",
    "RunConfig",
    "SimulationError",
    "SpectralCurve",
    "SweepResult",
    "SystemParams",
    "ThresholdError",
    "TiedRatio",
    "antisqueezing_spectrum",
    "broadband_margin",
    "broadband_moments",
    "broadband_pair_en",
    "build_drift",
    "build_injection",
    "cascade_steady",
    "cascade_system",
    "decay_rates",
    "default_omega_grid",
    "extract_array_block",
    "kossakowski",
    "log_negativity",
    "lyapunov_steady",
    "normal_mode_pair_map",
    "normal_modes",
    "normalized_en",
    "output_corr_tau",
    "pair_map",
    "pair_value",
    "parse_config",
    "physicality_defect",
    "quadrature_covariance",
    "reduced_steady",
    "reservoir_en",
    "rotate_to_modes",
    "source_n0",
    "source_nt",
    "spectral_density",
    "squeezing_spectrum",
    "sweep",
    "symplectic_eigs",
    "transient",
    "two_mode_reduction",
    "vacuum_corr",
    "vacuum_two_mode",
]
