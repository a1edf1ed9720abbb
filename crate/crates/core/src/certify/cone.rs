//! The rank-one cone in su(2) ⊗ H and its nearest-point decomposition.
//!
//! An element 𝛏 = ξ₀⊗1 + ξ₁⊗i + ξ₂⊗j + ξ₃⊗k of su(2) ⊗ H is stored as the
//! 3×4 real matrix of its coefficients (rows: τ basis of su(2), columns: H
//! basis). Its moment map vanishes exactly when all pairwise brackets of
//! the ξ_m vanish, i.e. when the matrix has rank ≤ 1; the nearest point of
//! the cone is the top singular triple.

use nalgebra::{DMatrix, SMatrix, SVector};

use super::CertifyError;
use crate::quat::Quat;
use crate::rep::{MomentValue, QuatRep, Spinor};

/// Coefficient matrix of an su(2) ⊗ H element: rows τ₀..τ₂, columns 1,i,j,k.
pub type XiMatrix = SMatrix<f64, 3, 4>;

/// Unique decomposition 𝛏 = ζ + ξ̂ with ζ on the cone and ξ̂ normal to the
/// cone's tangent space at ζ.
#[derive(Debug, Clone)]
pub struct ConeDecomposition {
    pub zeta: XiMatrix,
    pub xi_hat: XiMatrix,
    /// |ξ̂|, the distance to the cone.
    pub distance: f64,
}

/// Adjoint-su(2) spinor coefficients as a 3×4 matrix.
pub fn spinor_to_xi(xi: &Spinor) -> XiMatrix {
    assert_eq!(xi.coeffs.len(), 12, "expected an su(2) ⊗ H element");
    XiMatrix::from_fn(|b, m| xi.coeffs[b * 4 + m])
}

pub fn xi_to_spinor(rep: &QuatRep, m: &XiMatrix) -> Spinor {
    let mut coeffs = vec![0.0; 12];
    for b in 0..3 {
        for c in 0..4 {
            coeffs[b * 4 + c] = m[(b, c)];
        }
    }
    rep.spinor(&coeffs)
}

/// Moment-map norm squared from the singular values of the coefficient
/// matrix: |μ(𝛏)|² = 4(σ₁²σ₂² + σ₁²σ₃² + σ₂²σ₃²). Independent route used
/// as an oracle against the representation-theoretic evaluation.
pub fn mu_norm_from_singular_values(xi: &XiMatrix) -> f64 {
    let sv = xi.singular_values();
    let (a, b, c) = (sv[0] * sv[0], sv[1] * sv[1], sv[2] * sv[2]);
    2.0 * (a * b + a * c + b * c).sqrt()
}

/// Nearest-point projection onto the cone of rank ≤ 1 matrices.
///
/// Fails with `AmbiguousProjection` when the top two singular values agree
/// to better than 1e−9 relative, where the nearest point is not unique.
pub fn cone_project(xi: &XiMatrix) -> Result<ConeDecomposition, CertifyError> {
    let svd = nalgebra::SVD::new(DMatrix::from_fn(3, 4, |r, c| xi[(r, c)]), true, true);
    let sv = &svd.singular_values;
    let (s1, s2) = (sv[0], sv[1]);
    if s1 <= 0.0 {
        // the zero matrix is itself on the cone
        return Ok(ConeDecomposition { zeta: XiMatrix::zeros(), xi_hat: XiMatrix::zeros(), distance: 0.0 });
    }
    if (s1 - s2).abs() <= 1e-9 * s1 {
        return Err(CertifyError::AmbiguousProjection { gap: (s1 - s2).abs() / s1 });
    }
    let u = svd.u.as_ref().unwrap().column(0).clone_owned();
    let v = svd.v_t.as_ref().unwrap().row(0).clone_owned();
    let mut zeta = XiMatrix::zeros();
    for r in 0..3 {
        for c in 0..4 {
            zeta[(r, c)] = s1 * u[r] * v[c];
        }
    }
    let xi_hat = xi - zeta;
    let distance = xi_hat.norm();
    Ok(ConeDecomposition { zeta, xi_hat, distance })
}

/// Factorization 𝛏 = τ ⊗ ν of a cone element into a unit su(2) direction
/// and a quaternion, with the sign fixed by requiring the first nonzero
/// coefficient of τ to be positive.
pub fn haydys_decompose(rep: &QuatRep, xi: &Spinor, tol: f64) -> Result<(SVector<f64, 3>, Quat), CertifyError> {
    let mu = rep.moment(xi)?;
    let n2 = xi.norm().powi(2);
    if n2 == 0.0 {
        return Err(CertifyError::ZeroSpinor);
    }
    if mu.norm() > tol * n2 {
        return Err(CertifyError::NotOnCone { mu_norm: mu.norm(), tol });
    }
    let m = spinor_to_xi(xi);
    // rank-one to working precision: extract the top singular pair
    let svd = nalgebra::SVD::new(DMatrix::from_fn(3, 4, |r, c| m[(r, c)]), true, true);
    let s1 = svd.singular_values[0];
    let u = svd.u.as_ref().unwrap().column(0).clone_owned();
    let v = svd.v_t.as_ref().unwrap().row(0).clone_owned();
    let mut tau = SVector::<f64, 3>::from_fn(|r, _| u[r]);
    let mut nu = Quat::new(v[0], v[1], v[2], v[3]).scale(s1);
    let flip = tau.iter().find(|c| c.abs() > 1e-12).map_or(1.0, |c| c.signum());
    tau *= flip;
    nu = nu.scale(flip);
    Ok((tau, nu))
}

/// The moment value of the su(2) adjoint representation for a coefficient
/// matrix, through cross products of the coefficient columns (structure
/// constants 2ε): row i is 2(x₂×x₃ + x₀×x₁) and cyclic.
pub fn mu_su2(xi: &XiMatrix) -> MomentValue {
    let col = |m: usize| SVector::<f64, 3>::from_fn(|r, _| xi[(r, m)]);
    let (x0, x1, x2, x3) = (col(0), col(1), col(2), col(3));
    let rows = [
        (x2.cross(&x3) + x0.cross(&x1)) * 2.0,
        (x3.cross(&x1) + x0.cross(&x2)) * 2.0,
        (x1.cross(&x2) + x0.cross(&x3)) * 2.0,
    ];
    MomentValue { coeffs: DMatrix::from_fn(3, 3, |a, b| rows[a][b]) }
}
