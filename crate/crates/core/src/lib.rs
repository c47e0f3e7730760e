//! Surface-plasmon dispersion of a charged layer bound to a plane by a delta
//! well, with the Coulomb interaction treated in the linearized Hartree
//! approximation.
//!
//! All lengths are measured in units of the binding length `1/β` and energies
//! in units of `β²` (with `2m* = ħ = 1`). A scaled point is `(q̃, ω̃)` and the
//! single coupling constant is `C₀ = e²η₀/(2ε₀β³)`.
//!
//! The main pipeline is
//! [`find_root`] → [`AmplitudeProfile::at_root`] → [`amplitude_eval`], with
//! [`oracle_root`] as an independent check by direct discretization.

pub mod amplitude;
pub mod checks;
pub mod dispersion;
pub mod error;
pub mod kernel;
pub mod oracle;
pub mod param_core;
pub mod propagator;
pub mod quad;
pub mod semiclassical;
pub mod series;

pub use amplitude::{amplitude_eval, far_field, integral_residual, solve_boundary_values, AmplitudeProfile};
pub use dispersion::{
    dispersion_sweep, find_root, lambda_det, matrix_elements, regularity_probe, DispersionMatrix, DispersionRoot,
    RootOptions,
};
pub use error::{Error, Result};
pub use kernel::{script_g, script_g_oracle, slashed_kernel, KernelContext};
pub use oracle::{build_operator, oracle_root, FredholmOperator, GridSpec, OracleOptions, OracleRoot};
pub use param_core::{
    alpha_sigma, from_scaled, to_scaled, validate_regime, LengthScales, PhysicalParams, RegimeReport, ScaledPoint,
    Sign,
};
pub use propagator::{complex_erfc, hat_green, i1_integral, td_green};
pub use semiclassical::{
    asymptotic_quantities, classical_dispersion, compare_report, corrected_dispersion, AsymptoticQuantities,
};
pub use series::{breve_f, functional_residual, lambda_seq, AmplitudeExpansion, BoundaryValues, SeriesCoeffs};
