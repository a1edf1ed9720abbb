//! Certification of the compactness constants by constrained sampling and
//! projected-ascent optimization over spinor spheres.

mod cone;
mod estimators;
mod optimize;

pub use cone::{cone_project, haydys_decompose, mu_norm_from_singular_values, mu_su2, spinor_to_xi, xi_to_spinor, ConeDecomposition, XiMatrix};
pub use estimators::{
    certify_criterion_generic, certify_quadratic_estimate, certify_su2_criterion, criterion_ratio, estimate_sigma_adhm12,
    min_mu_on_unit_psi, split_constant_from_sigma, su2_criterion_delta_sweep, su3_failure_search,
    validate_split_bound, CertReport, SweepPoint,
};
pub use optimize::{projected_ascent, AscentConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("nearest rank-one projection is ambiguous: top singular values within {gap:.3e} relative")]
    AmbiguousProjection { gap: f64 },
    #[error("spinor is not on the cone: |mu| = {mu_norm:.3e} exceeds {tol:.3e}·|xi|²")]
    NotOnCone { mu_norm: f64, tol: f64 },
    #[error("cannot decompose the zero spinor")]
    ZeroSpinor,
    #[error("multistart estimates spread {spread:.3} exceeds 0.25")]
    NonConvergence { spread: f64 },
    #[error("ratio denominator vanishes (|Γ_φ μ(φ)| = {gamma_norm:.3e}) while |μ(φ)| = {mu_norm:.3e}: criterion counterexample candidate")]
    DivisionByZero { mu_norm: f64, gamma_norm: f64 },
    #[error(transparent)]
    Rep(#[from] crate::rep::RepError),
}
