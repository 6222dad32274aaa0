"""Decay of a confined quantum state through a delta-shell barrier.

The momentum density |C(k)|^2 of the box ground state confined by
V(r) = lam * delta(r - a) is computed two independent ways: from the exact
continuum scattering states, and from an expansion over the resonance
(quasinormal) poles of the Jost function.  The same pole data drives the
time evolution: survival amplitude, non-escape probability, and the
exponential-to-power-law asymptotics.  Units: hbar = 2m = 1.
"""

from .model import (
    InitialState,
    ModelParams,
    ResonancePole,
    ResonanceStateData,
    born_coefficient_continuum,
    continuum_wavefunction,
    interior_norm_in,
    jost_plus,
    jost_plus_prime,
    normalization_constant,
    normalization_residual,
    overlap_cn,
    resonance_state,
    resonance_state_data,
    s_matrix,
    sin_product_integral,
    snc,
    width_identity_residual,
)
from .poles import (
    DuplicateCollapseError,
    NonConvergenceError,
    PoleSearchError,
    SolverConfig,
    WrongQuadrantError,
    find_poles,
    refine_pole,
    seed_pole,
    seed_poles,
)
from .expansion import (
    BornSpectrumPoint,
    PoleHitError,
    Truncation,
    born_coefficient_resonance,
    born_density_decomposition,
    born_norm_identity,
    build_states,
    closure_reconstruct,
    continuum_wavefunction_resonance,
    greens_resonance,
    strength_sum,
    sum_rule_residual,
)
from .evolution import (
    EvolutionSample,
    OverlapMatrix,
    born_norm_quadrature,
    crossover_time,
    default_time_grid,
    fit_exponential_rate,
    lifetime,
    nonescape_probability,
    overlap_matrix,
    regime_tag,
    survival_amplitude,
    survival_asymptotic,
    survival_loglog_slope,
    wavefunction_continuum,
    wavefunction_resonance,
)
from .quadrature import (
    Integrand,
    QuadratureFailure,
    QuadratureResult,
    QuadratureSpec,
    ToleranceNotMet,
    fsum_complex,
    integrate_oscillatory_real_line,
    integrate_semi_infinite,
)
from .special_functions import faddeeva, moshinsky_m

__version__ = "0.1.0"

__all__ = [
    "InitialState",
    "ModelParams",
    "ResonancePole",
    "ResonanceStateData",
    "born_coefficient_continuum",
    "continuum_wavefunction",
    "interior_norm_in",
    "jost_plus",
    "jost_plus_prime",
    "normalization_constant",
    "normalization_residual",
    "overlap_cn",
    "resonance_state",
    "resonance_state_data",
    "s_matrix",
    "sin_product_integral",
    "snc",
    "width_identity_residual",
    "DuplicateCollapseError",
    "NonConvergenceError",
    "PoleSearchError",
    "SolverConfig",
    "WrongQuadrantError",
    "find_poles",
    "refine_pole",
    "seed_pole",
    "seed_poles",
    "BornSpectrumPoint",
    "PoleHitError",
    "Truncation",
    "born_coefficient_resonance",
    "born_density_decomposition",
    "born_norm_identity",
    "build_states",
    "closure_reconstruct",
    "continuum_wavefunction_resonance",
    "greens_resonance",
    "strength_sum",
    "sum_rule_residual",
    "EvolutionSample",
    "OverlapMatrix",
    "born_norm_quadrature",
    "crossover_time",
    "default_time_grid",
    "fit_exponential_rate",
    "lifetime",
    "nonescape_probability",
    "overlap_matrix",
    "regime_tag",
    "survival_amplitude",
    "survival_asymptotic",
    "survival_loglog_slope",
    "wavefunction_continuum",
    "wavefunction_resonance",
    "Integrand",
    "QuadratureFailure",
    "QuadratureResult",
    "QuadratureSpec",
    "ToleranceNotMet",
    "fsum_complex",
    "integrate_oscillatory_real_line",
    "integrate_semi_infinite",
    "faddeeva",
    "moshinsky_m",
]
