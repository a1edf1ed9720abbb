//! Seeded randomized verification of the pointwise algebraic identities.
//!
//! Every check draws its samples from a ChaCha stream seeded by the caller,
//! evaluates a residual per sample, and reports the worst case together
//! with the witness coefficients. Samples are drawn in a fixed order, so a
//! run with more samples extends a run with fewer and the worst residual is
//! monotone in the sample count. Inputs are normalized to the unit sphere,
//! which makes the absolute residuals scale-free for the homogeneous
//! identities checked here.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::rep::{MomentValue, QuatRep, RepError, Spinor};

/// Outcome of one identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub rep: String,
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub worst_residual: f64,
    pub pass: bool,
    /// Input coefficients attaining the worst residual.
    pub worst_witness: Vec<f64>,
}

impl IdentityCheck {
    fn from_run(name: &str, rep: &str, samples: usize, seed: u64, tolerance: f64, worst: (f64, Vec<f64>)) -> Self {
        IdentityCheck {
            name: name.to_string(),
            rep: rep.to_string(),
            samples,
            seed,
            tolerance,
            worst_residual: worst.0,
            pass: worst.0 <= tolerance,
            worst_witness: worst.1,
        }
    }
}

/// Tracks the worst residual; ties are kept at the lowest sample index.
struct Worst {
    residual: f64,
    witness: Vec<f64>,
}

impl Worst {
    fn new() -> Self {
        Worst { residual: 0.0, witness: Vec::new() }
    }

    fn update(&mut self, residual: f64, witness: impl FnOnce() -> Vec<f64>) {
        if residual > self.residual {
            self.residual = residual;
            self.witness = witness();
        }
    }

    fn into_pair(self) -> (f64, Vec<f64>) {
        (self.residual, self.witness)
    }
}

/// μ(𝛾(μ(φ))φ, φ) = ½ Γ_φ*Γ_φ μ(φ), with Γ_φ* taken as the matrix
/// transpose of Γ_φ.
pub fn check_mu_gamma_identity(rep: &QuatRep, samples: usize, seed: u64, tolerance: f64) -> Result<IdentityCheck, RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = rep.dim_g();
    let mut worst = Worst::new();
    for _ in 0..samples {
        let phi = rep.random_unit_spinor(&mut rng);
        let mu = rep.moment(&phi)?;
        let gphi = rep.gamma_phi(&phi, &mu)?;
        let lhs = rep.moment_polarized(&gphi, &phi)?;
        let gamma_mat = rep.gamma_phi_matrix(&phi)?;
        let flat = nalgebra::DVector::from_vec(mu.flat());
        let rhs_flat = gamma_mat.transpose() * (&gamma_mat * flat) * 0.5;
        let rhs = MomentValue::from_flat(g, rhs_flat.as_slice());
        let res = lhs.sub(&rhs).norm();
        worst.update(res, || phi.coeffs.as_slice().to_vec());
    }
    Ok(IdentityCheck::from_run("mu-gamma-identity", &rep.name, samples, seed, tolerance, worst.into_pair()))
}

/// |μ(𝛏)|² = ½ Σ_{i,j} |[ξ_i, ξ_j]|² on the adjoint representation.
pub fn check_commutator_norm(rep: &QuatRep, samples: usize, seed: u64, tolerance: f64) -> Result<IdentityCheck, RepError> {
    let alg = &rep.alg;
    let g = alg.dim;
    assert_eq!(rep.dim_s, 4 * g, "commutator-norm check requires an adjoint representation");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let xi = rep.random_unit_spinor(&mut rng);
        let mu = rep.moment(&xi)?;
        let lhs = mu.norm().powi(2);
        let comp = |m: usize| -> Vec<f64> { (0..g).map(|b| xi.coeffs[b * 4 + m]).collect() };
        let parts: Vec<Vec<f64>> = (0..4).map(comp).collect();
        let mut rhs = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let br = alg.bracket(&parts[i], &parts[j]).unwrap();
                rhs += 0.5 * br.iter().map(|v| v * v).sum::<f64>();
            }
        }
        worst.update((lhs - rhs).abs(), || xi.coeffs.as_slice().to_vec());
    }
    Ok(IdentityCheck::from_run("commutator-norm", &rep.name, samples, seed, tolerance, worst.into_pair()))
}

/// For rank-one ζ and ξ̂ normal to the zero-locus tangent at ζ:
/// d_ζμ(ξ̂) = 2μ(ζ,ξ̂) has no 𝔤-component along the ζ direction, and
/// μ(ξ̂) lies entirely along it. Specific to the su(2) adjoint cone.
pub fn check_dmu_orthogonality(samples: usize, seed: u64, tolerance: f64) -> Result<IdentityCheck, RepError> {
    let rep = QuatRep::adjoint_su2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = Worst::new();
    for _ in 0..samples {
        let raw = rep.random_unit_spinor(&mut rng);
        let dir = rep.random_unit_spinor(&mut rng);
        // rank-one ζ = u ⊗ v from the first sample's leading coefficients
        let mut u = [raw.coeffs[0], raw.coeffs[1], raw.coeffs[2]];
        let un = (u.iter().map(|x| x * x).sum::<f64>()).sqrt();
        u.iter_mut().for_each(|x| *x /= un);
        let mut v = [raw.coeffs[3], raw.coeffs[4], raw.coeffs[5], raw.coeffs[6]];
        let vn = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
        v.iter_mut().for_each(|x| *x /= vn);
        let mut zeta = rep.zero_spinor();
        for b in 0..3 {
            for m in 0..4 {
                zeta.coeffs[b * 4 + m] = u[b] * v[m];
            }
        }
        // project dir onto the normal space: rows ⊥ u, columns ⊥ v
        let mut xi_hat = rep.zero_spinor();
        for b in 0..3 {
            for m in 0..4 {
                let mut s = dir.coeffs[b * 4 + m];
                // subtract u-row and v-column parts
                let row_dot: f64 = (0..3).map(|bb| u[bb] * dir.coeffs[bb * 4 + m]).sum();
                let col_dot: f64 = (0..4).map(|mm| v[mm] * dir.coeffs[b * 4 + mm]).sum();
                let both: f64 = (0..3)
                    .flat_map(|bb| (0..4).map(move |mm| (bb, mm)))
                    .map(|(bb, mm)| u[bb] * v[mm] * dir.coeffs[bb * 4 + mm])
                    .sum();
                s -= u[b] * row_dot + v[m] * col_dot - u[b] * v[m] * both;
                xi_hat.coeffs[b * 4 + m] = s;
            }
        }
        let d_mu = rep.moment_polarized(&zeta, &xi_hat)?.scale(2.0);
        let mu_hat = rep.moment(&xi_hat)?;
        let mut res: f64 = 0.0;
        for a in 0..3 {
            // d_ζμ(ξ̂) ⊥ u in the 𝔤 index
            let along: f64 = (0..3).map(|b| d_mu.coeffs[(a, b)] * u[b]).sum();
            res = res.max(along.abs());
            // μ(ξ̂) ∥ u in the 𝔤 index
            let proj: f64 = (0..3).map(|b| mu_hat.coeffs[(a, b)] * u[b]).sum();
            for b in 0..3 {
                res = res.max((mu_hat.coeffs[(a, b)] - proj * u[b]).abs());
            }
        }
        worst.update(res, || {
            let mut w = zeta.coeffs.as_slice().to_vec();
            w.extend_from_slice(xi_hat.coeffs.as_slice());
            w
        });
    }
    Ok(IdentityCheck::from_run("dmu-orthogonality", "su2-adjoint", samples, seed, tolerance, worst.into_pair()))
}

/// Residual of the Dirac constraint Σ γ(e_i)ψ_i for a triple of spinors.
pub fn dirac_constraint_residual(rep: &QuatRep, psis: &[Spinor; 3]) -> Result<f64, RepError> {
    let mut acc = nalgebra::DVector::zeros(rep.dim_s);
    for (i, psi) in psis.iter().enumerate() {
        rep.check(psi)?;
        acc += &rep.gamma[i] * &psi.coeffs;
    }
    Ok(acc.norm())
}

/// Completes (ψ₁, ψ₂) to a Dirac-kernel triple via ψ₃ = γ(e₃)(γ(e₁)ψ₁ + γ(e₂)ψ₂).
pub fn dirac_kernel_triple(rep: &QuatRep, psi1: Spinor, psi2: Spinor) -> Result<[Spinor; 3], RepError> {
    rep.check(&psi1)?;
    rep.check(&psi2)?;
    let s = &rep.gamma[0] * &psi1.coeffs + &rep.gamma[1] * &psi2.coeffs;
    let psi3 = Spinor { rep: rep.tag, coeffs: &rep.gamma[2] * s };
    Ok([psi1, psi2, psi3])
}

/// Pointwise compatibility of the moment map with the Dirac operator: for
/// Φ(x) = φ + Σ x_i ψ_i with Σ γ(e_i)ψ_i = 0 and a trivial connection, the
/// codifferential of x ↦ μ(Φ(x)) at 0 — the curl of its 1-form-indexed
/// coefficients under e₁ ↔ dx₂∧dx₃ — equals −ρ*(ψ_k φ*) componentwise,
/// with ρ*(ψφ*)_b = ⟨ρ(ξ_b)φ, ψ⟩. The derivative field is evaluated by
/// central differences; the moment field is quadratic in x, so the stencil
/// is exact up to rounding.
pub fn check_dirac_moment_compatibility(rep: &QuatRep, samples: usize, seed: u64, tolerance: f64) -> Result<IdentityCheck, RepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = rep.dim_g();
    let mut worst = Worst::new();
    let h = 1e-4;
    for _ in 0..samples {
        let phi = rep.random_unit_spinor(&mut rng);
        let p1 = rep.random_unit_spinor(&mut rng);
        let p2 = rep.random_unit_spinor(&mut rng);
        let psis = dirac_kernel_triple(rep, p1, p2)?;
        debug_assert!(dirac_constraint_residual(rep, &psis)?.abs() < 1e-12);

        // ∂_j μ(Φ(x))|₀ by central differences along each axis.
        let mut d_mu = Vec::with_capacity(3);
        for psi in &psis {
            let plus = rep.moment(&phi.add(&psi.scale(h)))?;
            let minus = rep.moment(&phi.add(&psi.scale(-h)))?;
            d_mu.push(plus.sub(&minus).scale(1.0 / (2.0 * h)));
        }

        let mut res: f64 = 0.0;
        for k in 0..3 {
            let (j1, a1, j2, a2) = match k {
                0 => (1, 2, 2, 1), // (∇×M)₁ = ∂₂M₃ − ∂₃M₂
                1 => (2, 0, 0, 2),
                _ => (0, 1, 1, 0),
            };
            for b in 0..g {
                let curl = d_mu[j1].coeffs[(a1, b)] - d_mu[j2].coeffs[(a2, b)];
                let rho_star = (&rep.rho[b] * &phi.coeffs).dot(&psis[k].coeffs);
                res = res.max((curl + rho_star).abs());
            }
        }
        worst.update(res, || {
            let mut w = phi.coeffs.as_slice().to_vec();
            for psi in &psis {
                w.extend_from_slice(psi.coeffs.as_slice());
            }
            w
        });
    }
    Ok(IdentityCheck::from_run("dirac-moment-compatibility", &rep.name, samples, seed, tolerance, worst.into_pair()))
}

/// All checks that apply to the given representation.
pub fn run_suite(rep: &QuatRep, samples: usize, seed: u64, tolerance: f64) -> Result<Vec<IdentityCheck>, RepError> {
    let mut out = vec![
        check_mu_gamma_identity(rep, samples, seed, tolerance)?,
        check_dirac_moment_compatibility(rep, samples, seed, tolerance)?,
    ];
    if matches!(rep.tag, crate::rep::RepTag::Adjoint(_)) {
        out.push(check_commutator_norm(rep, samples, seed, tolerance)?);
    }
    if rep.tag == crate::rep::RepTag::Adjoint(2) {
        out.push(check_dmu_orthogonality(samples, seed, tolerance)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reps() -> Vec<QuatRep> {
        vec![
            QuatRep::classical(),
            QuatRep::adjoint_su2(),
            QuatRep::adjoint_su3(),
            QuatRep::adhm12(),
            QuatRep::multispinor(2),
        ]
    }

    #[test]
    fn mu_gamma_identity_small_runs() {
        for rep in reps() {
            let c = check_mu_gamma_identity(&rep, 300, 7, 1e-10).unwrap();
            assert!(c.pass, "{}: residual {}", rep.name, c.worst_residual);
        }
    }

    #[test]
    fn mu_gamma_zero_spinor() {
        let rep = QuatRep::classical();
        let mu = rep.moment(&rep.zero_spinor()).unwrap();
        assert_eq!(mu.norm(), 0.0);
    }

    #[test]
    fn commutator_norm_examples() {
        let rep = QuatRep::adjoint_su2();
        // rank one: both sides zero
        let mut coeffs = vec![0.0; 12];
        coeffs[0] = 1.0; // τ₀ ⊗ 1
        let xi = rep.spinor(&coeffs);
        assert!(rep.moment(&xi).unwrap().norm() < 1e-14);

        // 𝛏 = τ₁⊗i + τ₂⊗j: both sides equal 4
        let mut coeffs = vec![0.0; 12];
        coeffs[4 + 1] = 1.0;
        coeffs[8 + 2] = 1.0;
        let xi = rep.spinor(&coeffs);
        let lhs = rep.moment(&xi).unwrap().norm().powi(2);
        assert!((lhs - 4.0).abs() < 1e-12);

        let c = check_commutator_norm(&rep, 500, 3, 1e-10).unwrap();
        assert!(c.pass, "residual {}", c.worst_residual);
        let rep3 = QuatRep::adjoint_su3();
        let c3 = check_commutator_norm(&rep3, 500, 3, 1e-10).unwrap();
        assert!(c3.pass, "residual {}", c3.worst_residual);
    }

    #[test]
    fn dmu_orthogonality_passes() {
        let c = check_dmu_orthogonality(500, 5, 1e-10).unwrap();
        assert!(c.pass, "residual {}", c.worst_residual);
    }

    #[test]
    fn dmu_orthogonality_example_tau0_tau1j() {
        let rep = QuatRep::adjoint_su2();
        let mut zeta = rep.zero_spinor();
        zeta.coeffs[0] = 1.0; // τ₀ ⊗ 1
        let mut xi_hat = rep.zero_spinor();
        xi_hat.coeffs[4 + 2] = 1.0; // τ₁ ⊗ j
        let d_mu = rep.moment_polarized(&zeta, &xi_hat).unwrap().scale(2.0);
        // no τ₀ component anywhere
        for a in 0..3 {
            assert!(d_mu.coeffs[(a, 0)].abs() < 1e-14);
        }
        assert!(d_mu.norm() > 1.0); // the j-row carries 2τ₂
    }

    #[test]
    fn dirac_compatibility_passes_and_rejects_bad_triples() {
        for rep in reps() {
            let c = check_dirac_moment_compatibility(&rep, 200, 11, 1e-8).unwrap();
            assert!(c.pass, "{}: residual {}", rep.name, c.worst_residual);
        }
        // ψ_i = (iφ, jφ, kφ) violates the constraint: Σ γ_i ψ_i = −3φ
        let rep = QuatRep::classical();
        let phi = rep.spinor(&[1.0, 0.0, 0.0, 0.0]);
        let psis = [
            rep.gamma_im(crate::quat::ImQuat::I, &phi).unwrap(),
            rep.gamma_im(crate::quat::ImQuat::J, &phi).unwrap(),
            rep.gamma_im(crate::quat::ImQuat::K, &phi).unwrap(),
        ];
        let r = dirac_constraint_residual(&rep, &psis).unwrap();
        assert!((r - 3.0).abs() < 1e-14);
    }

    #[test]
    fn worst_residual_monotone_in_samples() {
        let rep = QuatRep::adjoint_su2();
        let a = check_mu_gamma_identity(&rep, 100, 17, 1e-10).unwrap();
        let b = check_mu_gamma_identity(&rep, 400, 17, 1e-10).unwrap();
        assert!(b.worst_residual >= a.worst_residual);
        let a2 = check_mu_gamma_identity(&rep, 100, 17, 1e-10).unwrap();
        assert_eq!(a.worst_residual, a2.worst_residual, "deterministic given (seed, samples)");
    }

    #[test]
    fn corrupted_generator_fails_every_check() {
        let mut rep = QuatRep::adjoint_su2();
        rep.rho[1][(3, 7)] += 1e-3;
        let samples = 400;
        assert!(!check_mu_gamma_identity(&rep, samples, 3, 1e-8).unwrap().pass);
        assert!(!check_commutator_norm(&rep, samples, 3, 1e-8).unwrap().pass);
        assert!(!check_dirac_moment_compatibility(&rep, samples, 3, 1e-8).unwrap().pass);
        // the orthogonality check builds its own representation; corrupt via
        // a direct moment comparison instead
        let clean = QuatRep::adjoint_su2();
        let xi = clean.random_unit_spinor(&mut rand_chacha::ChaCha8Rng::seed_from_u64(2));
        let bad = rep.moment(&xi).unwrap();
        let good = clean.moment(&xi).unwrap();
        assert!(bad.sub(&good).norm() > 1e-8);
    }

    #[test]
    fn suite_collects_applicable_checks() {
        let su2 = run_suite(&QuatRep::adjoint_su2(), 50, 1, 1e-8).unwrap();
        assert_eq!(su2.len(), 4);
        let cls = run_suite(&QuatRep::classical(), 50, 1, 1e-8).unwrap();
        assert_eq!(cls.len(), 2);
    }
}
