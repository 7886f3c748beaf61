"""Entanglement generated between bosonic field modes by Bogoliubov
transformations, computed in the covariance-matrix formalism."""

from .errors import ConfigError, DegeneracyError, NonConvergenceError, NumericalError
from .gaussian import (
    EntanglementReport,
    GaussianState,
    SymplecticMatrix,
    apply_symplectic,
    local_rotation,
    negativity,
    partial_trace,
    partial_transpose,
    single_mode_squeezed_state,
    symplectic_eigenvalues,
    symplectic_form,
    vacuum_state,
)
from .bogo import (
    BogoCoeffs,
    IdentityReport,
    PhaseVector,
    SeriesTerm,
    compose,
    from_symplectic,
    phase_transform,
    read_coeffs,
    series_eval,
    symplectic_inverse,
    to_symplectic,
    verify_identities,
    write_coeffs,
)
from .perturbation import (
    LinearCoefficientData,
    PerturbedTwoModeState,
    TruncatedSum,
    degenerate_nu_correction,
    degenerate_nu_spectrum,
    enhancement_monotonicity_check,
    leading_negativity,
    mixedness_determinant,
    nu_minus_roots,
    squeezing_parameter,
    two_mode_truncation,
    validity_F,
)
from .cavity import (
    AcceleratedSegment,
    CavityConfig,
    InertialSegment,
    TravelScenario,
    composed_linear_coefficients,
    one_segment_linear_data,
    one_segment_scenario,
    one_segment_sweep,
    full_negativity,
    junction_coefficients,
    junction_provider,
    linear_coefficients_closed_form,
    minkowski_mode,
    rindler_mode,
    scenario_symplectic,
    segment_phases,
)
from .frw import FRWConfig, frw_coefficients, frw_negativity, frw_pair_state

__version__ = "0.1.0"
