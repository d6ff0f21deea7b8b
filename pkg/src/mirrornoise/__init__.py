"""Quantum noise budget of a mirror position read out by a detector.

A coherent field reflects off a free mirror; a detector between the source
and the mirror reads the interference.  The package evaluates the late-time
noise budget, optimizes the input power, averages over a finite bandwidth,
checks the closed forms against brute-force quadrature, and simulates the
mirror's Langevin dynamics.
"""

from .band import (
    BandBudget,
    BandSpec,
    band_budget_closed_form,
    band_optimum,
    numeric_band_average,
    numeric_band_budget,
)
from .budget import (
    MeanObservables,
    NoiseBudget,
    RegimeWarning,
    budget_terms,
    mean_signal,
    noise_budget,
    particle_number_view,
)
from .errors import MirrorNoiseError, NumericalError, ValidationError
from .langevin import (
    BackreactionCoefficients,
    EnsembleStats,
    Trajectory,
    backreaction_coefficients,
    backreaction_ratio,
    integrate_trajectory,
    run_ensemble,
    synthesize_force_noise,
)
from .optimize import OptimumReport, SweepTable, numeric_minimize, optimal_power, sweep, worst_negative_zeta
from .oracle import (
    OracleResult,
    delta_kernel_check,
    fdr_check,
    k_integral,
    rp_subdominant_oracle,
    rp_variance_oracle,
    run_verification,
    shot_noise_oracle,
)
from .params import (
    DerivedScales,
    RegimeReport,
    SystemParams,
    Thresholds,
    derive_scales,
    load_config,
    regime_report,
    validate_params,
    zeta_of,
)

__version__ = "0.1.0"
