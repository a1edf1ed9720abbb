//! Compact Lie algebras with a fixed orthonormal basis.
//!
//! A `LieAlg` stores the structure constants c_{ab}^e of a chosen basis that
//! is orthonormal for an invariant inner product; all coefficient vectors
//! downstream are taken with respect to this basis, so the Gram matrix is the
//! identity throughout.
//!
//! Two normalizations are in play:
//!
//! * su(k) uses ⟨x,y⟩ = −½ Re tr(xy). For k = 2 this makes the basis
//!   (τ₀, τ₁, τ₂) with `[τ₀,τ₁] = 2τ₂`, `[τ₁,τ₂] = 2τ₀`, `[τ₂,τ₀] = 2τ₁`
//!   orthonormal, i.e. structure constants 2ε_{abc}.
//! * u(k) uses ⟨x,y⟩ = −Re tr(xy), which makes the diagonal generators
//!   i·E_mm unit vectors. Maximal tori then have orthonormal coordinate
//!   bases, which is the normalization the torus-projection identities
//!   are calibrated to.

use nalgebra::{Complex, DMatrix};
use thiserror::Error;

type CMat = DMatrix<Complex<f64>>;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("coefficient vector has length {got}, algebra dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank must be at least 1, got {0}")]
    InvalidRank(usize),
}

/// A compact Lie algebra presented by structure constants over an
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct LieAlg {
    pub name: String,
    pub dim: usize,
    /// c_{ab}^e at index (a·dim + b)·dim + e.
    structure: Vec<f64>,
    /// Inner-product matrix of the basis; the identity for every built-in,
    /// since the bases are constructed orthonormal.
    pub gram: DMatrix<f64>,
}

impl LieAlg {
    /// The zero-dimensional algebra (plain scalar fields).
    pub fn trivial() -> Self {
        LieAlg { name: "trivial".to_string(), dim: 0, structure: Vec::new(), gram: DMatrix::identity(0, 0) }
    }

    /// u(1) with basis {i}; all brackets vanish.
    pub fn u1() -> Self {
        LieAlg { name: "u(1)".to_string(), dim: 1, structure: vec![0.0], gram: DMatrix::identity(1, 1) }
    }

    /// su(k) with the −½tr inner product. `k = 1` degenerates to u(1).
    pub fn su(k: usize) -> Result<Self, AlgebraError> {
        if k < 1 {
            return Err(AlgebraError::InvalidRank(k));
        }
        if k == 1 {
            return Ok(Self::u1());
        }
        let basis = su_basis_matrices(k);
        let structure = structure_constants(&basis, 0.5);
        let dim = basis.len();
        Ok(LieAlg { name: format!("su({k})"), dim, structure, gram: DMatrix::identity(dim, dim) })
    }

    /// u(k) with the −tr inner product.
    pub fn uk(k: usize) -> Result<Self, AlgebraError> {
        if k < 1 {
            return Err(AlgebraError::InvalidRank(k));
        }
        let basis = uk_basis_matrices(k);
        let structure = structure_constants(&basis, 1.0);
        let dim = basis.len();
        Ok(LieAlg { name: format!("u({k})"), dim, structure, gram: DMatrix::identity(dim, dim) })
    }

    #[inline]
    pub fn structure(&self, a: usize, b: usize, e: usize) -> f64 {
        self.structure[(a * self.dim + b) * self.dim + e]
    }

    fn check_len(&self, v: &[f64]) -> Result<(), AlgebraError> {
        if v.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    /// `[X, Y]` in coefficients.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>, AlgebraError> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut out = vec![0.0; self.dim];
        for a in 0..self.dim {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..self.dim {
                if y[b] == 0.0 {
                    continue;
                }
                let xy = x[a] * y[b];
                for e in 0..self.dim {
                    out[e] += xy * self.structure(a, b, e);
                }
            }
        }
        Ok(out)
    }

    /// Matrix of ad_{ξ_b} on coefficients: (ad_b)_{e,c} = c_{bc}^e.
    pub fn ad_matrix(&self, b: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |e, c| self.structure(b, c, e))
    }

    /// `|[x,[y,z]] + [y,[z,x]] + [z,[x,y]]|` for given coefficient vectors.
    pub fn jacobi_residual(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64, AlgebraError> {
        let a = self.bracket(x, &self.bracket(y, z)?)?;
        let b = self.bracket(y, &self.bracket(z, x)?)?;
        let c = self.bracket(z, &self.bracket(x, y)?)?;
        Ok((0..self.dim).map(|e| (a[e] + b[e] + c[e]).powi(2)).sum::<f64>().sqrt())
    }

    /// `|⟨[x,y],z⟩ + ⟨y,[x,z]⟩|` (invariance of the inner product).
    pub fn ad_invariance_residual(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64, AlgebraError> {
        let xy = self.bracket(x, y)?;
        let xz = self.bracket(x, z)?;
        let lhs: f64 = xy.iter().zip(z).map(|(p, q)| p * q).sum();
        let rhs: f64 = y.iter().zip(&xz).map(|(p, q)| p * q).sum();
        Ok((lhs + rhs).abs())
    }

    /// Worst antisymmetry defect of the stored structure constants.
    pub fn antisymmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.dim {
            for b in 0..self.dim {
                for e in 0..self.dim {
                    worst = worst.max((self.structure(a, b, e) + self.structure(b, a, e)).abs());
                }
            }
        }
        worst
    }
}

fn cplx(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// Skew-Hermitian traceless basis of su(k), orthonormal under −½Re tr(xy).
///
/// Ordering: diagonal generators i·d_1, ..., i·d_{k−1} first, then for each
/// a < b the pair E_ab − E_ba, i(E_ab + E_ba). For k = 2 this is exactly
/// (τ₀, τ₁, τ₂).
pub fn su_basis_matrices(k: usize) -> Vec<CMat> {
    let mut basis = Vec::new();
    for m in 1..k {
        let mut d = CMat::zeros(k, k);
        let s = (2.0 / (m as f64 * (m as f64 + 1.0))).sqrt();
        for j in 0..m {
            d[(j, j)] = cplx(0.0, s);
        }
        d[(m, m)] = cplx(0.0, -(m as f64) * s);
        basis.push(d);
    }
    for a in 0..k {
        for b in (a + 1)..k {
            let mut x = CMat::zeros(k, k);
            x[(a, b)] = cplx(1.0, 0.0);
            x[(b, a)] = cplx(-1.0, 0.0);
            basis.push(x);
            let mut y = CMat::zeros(k, k);
            y[(a, b)] = cplx(0.0, 1.0);
            y[(b, a)] = cplx(0.0, 1.0);
            basis.push(y);
        }
    }
    basis
}

/// Skew-Hermitian basis of u(k), orthonormal under −Re tr(xy).
///
/// Ordering: the torus generators i·E_mm first, then for each a < b the
/// normalized pair (E_ab − E_ba)/√2, i(E_ab + E_ba)/√2.
pub fn uk_basis_matrices(k: usize) -> Vec<CMat> {
    let mut basis = Vec::new();
    for m in 0..k {
        let mut t = CMat::zeros(k, k);
        t[(m, m)] = cplx(0.0, 1.0);
        basis.push(t);
    }
    let r = 0.5f64.sqrt();
    for a in 0..k {
        for b in (a + 1)..k {
            let mut x = CMat::zeros(k, k);
            x[(a, b)] = cplx(r, 0.0);
            x[(b, a)] = cplx(-r, 0.0);
            basis.push(x);
            let mut y = CMat::zeros(k, k);
            y[(a, b)] = cplx(0.0, r);
            y[(b, a)] = cplx(0.0, r);
            basis.push(y);
        }
    }
    basis
}

/// Inner product −s·Re tr(xy) on skew-Hermitian matrices.
pub fn skew_inner(x: &CMat, y: &CMat, s: f64) -> f64 {
    -s * (x * y).trace().re
}

fn structure_constants(basis: &[CMat], metric_scale: f64) -> Vec<f64> {
    let dim = basis.len();
    let mut c = vec![0.0; dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            let br = &basis[a] * &basis[b] - &basis[b] * &basis[a];
            for e in 0..dim {
                let v = skew_inner(&br, &basis[e], metric_scale);
                c[(a * dim + b) * dim + e] = if v.abs() < 1e-14 { 0.0 } else { v };
            }
        }
    }
    c
}
