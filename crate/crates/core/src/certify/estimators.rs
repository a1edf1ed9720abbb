//! Constrained estimates of the compactness constants.
//!
//! Each estimator combines stratified sampling near the relevant cone with
//! projected-gradient multistarts, re-evaluates its estimate at the winning
//! witness, and reruns itself with doubled sample and multistart budgets to
//! record a stability ratio. Estimates are suprema (or infima) over
//! constraint sets on spinor spheres; none of them is a rigorous bound.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cone::{cone_project, XiMatrix};
use super::optimize::{projected_ascent, spread, AscentConfig};
use super::CertifyError;
use crate::rep::{standard_normal, QuatRep, Spinor};

/// One entry of a parameter sweep (band width δ_μ or ball radius R).
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub parameter: f64,
    pub estimate: f64,
    pub stability_ratio: f64,
    pub witness_coeffs: Vec<f64>,
}

/// Result of one certification run.
#[derive(Debug, Clone, Serialize)]
pub struct CertReport {
    pub rep: String,
    pub estimator: String,
    pub constraint: String,
    pub estimate: f64,
    pub witness_coeffs: Vec<f64>,
    pub samples: usize,
    pub multistarts: usize,
    pub seed: u64,
    /// estimate at doubled budgets divided by the reported estimate.
    pub stability_ratio: f64,
    pub multistart_spread: f64,
    pub sweep: Vec<SweepPoint>,
    pub flags: Vec<String>,
}

fn random_unit<R: Rng>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| standard_normal(rng));
        let nv = v.norm();
        if nv > 1e-6 {
            return v / nv;
        }
    }
}

/// |μ(φ)| / |Γ_φ μ(φ)|, with the convention that a vanishing moment gives 0.
///
/// Signals `DivisionByZero` when the denominator vanishes while the moment
/// does not: a counterexample candidate for the pointwise criterion.
pub fn criterion_ratio(rep: &QuatRep, phi: &Spinor) -> Result<f64, CertifyError> {
    let scale = phi.norm();
    let mu = rep.moment(phi)?;
    if mu.norm() <= 1e-13 * scale * scale {
        return Ok(0.0);
    }
    let gamma_mu = rep.gamma_phi(phi, &mu)?;
    if gamma_mu.norm() <= 1e-13 * scale * mu.norm() {
        return Err(CertifyError::DivisionByZero { mu_norm: mu.norm(), gamma_norm: gamma_mu.norm() });
    }
    Ok(mu.norm() / gamma_mu.norm())
}

fn ratio_objective(rep: &QuatRep, x: &DVector<f64>) -> f64 {
    let phi = Spinor { rep: rep.tag, coeffs: x.clone() };
    let scale = phi.norm();
    let mu = match rep.moment(&phi) {
        Ok(m) => m,
        Err(_) => return 0.0,
    };
    if mu.norm() <= 1e-13 * scale * scale {
        return 0.0;
    }
    let gamma_mu = rep.gamma_phi(&phi, &mu).unwrap();
    let gn = gamma_mu.norm();
    if gn <= 1e-300 {
        return f64::INFINITY;
    }
    scale * mu.norm() / gn
}

/// Feasibility projection for the band {|𝛏| = 1, |μ(𝛏)| ≤ δ_μ} over the
/// su(2) adjoint representation: renormalize, then pull toward the cone
/// along a segment until the band constraint holds.
fn project_su2_band(rep: &QuatRep, delta_mu: f64, x: &DVector<f64>) -> Option<DVector<f64>> {
    let n = x.norm();
    if n < 1e-9 {
        return None;
    }
    let mut y = x / n;
    let mu_norm = |v: &DVector<f64>| rep.moment(&Spinor { rep: rep.tag, coeffs: v.clone() }).unwrap().norm();
    if mu_norm(&y) <= delta_mu {
        return Some(y);
    }
    let xi = XiMatrix::from_fn(|b, m| y[b * 4 + m]);
    let dec = cone_project(&xi).ok()?;
    if dec.zeta.norm() < 1e-9 {
        return None;
    }
    let zeta = dec.zeta / dec.zeta.norm();
    let mut anchor = DVector::zeros(12);
    for b in 0..3 {
        for m in 0..4 {
            anchor[b * 4 + m] = zeta[(b, m)];
        }
    }
    // bisect the blend parameter toward the cone point
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let cand = (&y * (1.0 - mid) + &anchor * mid).normalize();
        if mu_norm(&cand) <= delta_mu * (1.0 - 1e-9) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    y = (&y * (1.0 - hi) + &anchor * hi).normalize();
    if mu_norm(&y) <= delta_mu {
        Some(y)
    } else {
        None
    }
}

struct SupRun {
    estimate: f64,
    witness: DVector<f64>,
    spread: f64,
}

/// Shared driver: stratified samples -> top-k multistarts -> max.
fn run_sup<F, P, S>(objective: F, project: P, mut sample: S, samples: usize, multistarts: usize) -> SupRun
where
    F: Fn(&DVector<f64>) -> f64,
    P: Fn(&DVector<f64>) -> Option<DVector<f64>>,
    S: FnMut(usize) -> DVector<f64>,
{
    let mut scored: Vec<(f64, DVector<f64>)> = Vec::new();
    for i in 0..samples {
        let raw = sample(i);
        if let Some(x) = project(&raw) {
            let v = objective(&x);
            if v.is_finite() {
                scored.push((v, x));
            }
        }
    }
    scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let starts = scored.iter().take(multistarts.max(1)).cloned().collect::<Vec<_>>();
    let mut finals = Vec::new();
    let mut best: Option<(f64, DVector<f64>)> = None;
    for (_, x0) in &starts {
        let (x, v) = projected_ascent(&objective, &project, x0, AscentConfig::default());
        finals.push(v);
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, x));
        }
    }
    let (estimate, witness) = best.unwrap_or((0.0, DVector::zeros(1)));
    SupRun { estimate, witness, spread: spread(&finals) }
}

fn su2_band_sampler(delta_mu: f64, seed: u64) -> impl FnMut(usize) -> DVector<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    move |i| {
        if i % 4 == 3 {
            // occasional unconstrained draw; the projection pulls it in
            return random_unit(&mut rng, 12);
        }
        let u = random_unit(&mut rng, 3);
        let v = random_unit(&mut rng, 4);
        let mut x = DVector::zeros(12);
        for b in 0..3 {
            for m in 0..4 {
                x[b * 4 + m] = u[b] * v[m];
            }
        }
        let dir = random_unit(&mut rng, 12);
        let t: f64 = rng.gen::<f64>() * delta_mu.min(0.25);
        (&x + &dir * t).normalize()
    }
}

fn su2_run(rep: &QuatRep, delta_mu: f64, samples: usize, multistarts: usize, seed: u64) -> SupRun {
    let objective = |x: &DVector<f64>| ratio_objective(rep, x);
    let project = |x: &DVector<f64>| project_su2_band(rep, delta_mu, x);
    run_sup(objective, project, su2_band_sampler(delta_mu, seed), samples, multistarts)
}

/// ĉ = sup { |𝛏||μ(𝛏)| / |Γ_𝛏μ(𝛏)| : |𝛏| = 1, |μ(𝛏)| ≤ δ_μ } on su(2) ⊗ H.
pub fn certify_su2_criterion(delta_mu: f64, samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    assert!(delta_mu > 0.0 && delta_mu < 1.0, "delta_mu must lie in (0, 1)");
    let rep = QuatRep::adjoint_su2();
    let base = su2_run(&rep, delta_mu, samples, multistarts, seed);
    if base.spread > 0.25 {
        return Err(CertifyError::NonConvergence { spread: base.spread });
    }
    let doubled = su2_run(&rep, delta_mu, samples * 2, multistarts * 2, seed);
    let estimate = ratio_objective(&rep, &base.witness);
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "su2-criterion".to_string(),
        constraint: format!("|xi| = 1, |mu(xi)| <= {delta_mu}"),
        estimate,
        witness_coeffs: base.witness.as_slice().to_vec(),
        samples,
        multistarts,
        seed,
        stability_ratio: doubled.estimate / estimate,
        multistart_spread: base.spread,
        sweep: Vec::new(),
        flags: Vec::new(),
    })
}

/// Band-criterion constant sup |φ||μ(φ)|/|Γ_φμ(φ)| on {|φ| = 1, |μ| ≤ δ_μ}
/// for an arbitrary representation, with a reject-only feasibility
/// projection (no cone structure assumed).
pub fn certify_criterion_generic(rep: &QuatRep, delta_mu: f64, samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    assert!(delta_mu > 0.0 && delta_mu < 1.0);
    // Feasibility by descent toward μ⁻¹(0): the gradient of ½|μ(φ)|² is
    // Γ_φμ(φ), which the pairing bound keeps nonzero while μ(φ) ≠ 0, so
    // the flow always reaches the band.
    let project = |x: &DVector<f64>| {
        let n = x.norm();
        if n < 1e-9 {
            return None;
        }
        let mut y = x / n;
        for _ in 0..120 {
            let phi = Spinor { rep: rep.tag, coeffs: y.clone() };
            let mu = rep.moment(&phi).unwrap();
            let mn = mu.norm();
            if mn <= delta_mu * (1.0 - 1e-9) {
                return Some(y);
            }
            let grad = rep.gamma_phi(&phi, &mu).unwrap();
            let gn2 = grad.norm().powi(2);
            if gn2 < 1e-300 {
                return None;
            }
            let mut eta = mn * mn / gn2;
            let mut advanced = false;
            for _ in 0..30 {
                let trial = (&y - &grad.coeffs * eta).normalize();
                let trial_mu = rep.moment(&Spinor { rep: rep.tag, coeffs: trial.clone() }).unwrap().norm();
                if trial_mu < mn {
                    y = trial;
                    advanced = true;
                    break;
                }
                eta *= 0.5;
            }
            if !advanced {
                return None;
            }
        }
        None
    };
    let run = |samples: usize, multistarts: usize| -> SupRun {
        let objective = |x: &DVector<f64>| ratio_objective(rep, x);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = rep.dim_s;
        let sample = move |_i: usize| random_unit(&mut rng, dim);
        run_sup(objective, |x| project(x), sample, samples, multistarts)
    };
    let base = run(samples, multistarts);
    if base.spread > 0.25 {
        return Err(CertifyError::NonConvergence { spread: base.spread });
    }
    let doubled = run(samples * 2, multistarts * 2);
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "criterion".to_string(),
        constraint: format!("|phi| = 1, |mu(phi)| <= {delta_mu}"),
        estimate: base.estimate,
        witness_coeffs: base.witness.as_slice().to_vec(),
        samples,
        multistarts,
        seed,
        stability_ratio: if base.estimate > 0.0 { doubled.estimate / base.estimate } else { 1.0 },
        multistart_spread: base.spread,
        sweep: Vec::new(),
        flags: Vec::new(),
    })
}

/// δ_μ sweep of the su(2) criterion constant; larger bands are warm-started
/// with the winners of smaller ones, so the reported curve is monotone.
pub fn su2_criterion_delta_sweep(deltas: &[f64], samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    let rep = QuatRep::adjoint_su2();
    let mut sorted = deltas.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut sweep = Vec::new();
    let mut carry: Option<DVector<f64>> = None;
    let mut last = (0.0, Vec::new(), 0.0);
    for &dm in &sorted {
        let mut run = su2_run(&rep, dm, samples, multistarts, seed);
        if let Some(w) = &carry {
            if let Some(p) = project_su2_band(&rep, dm, w) {
                let objective = |x: &DVector<f64>| ratio_objective(&rep, x);
                let project = |x: &DVector<f64>| project_su2_band(&rep, dm, x);
                let (x, v) = projected_ascent(&objective, &project, &p, AscentConfig::default());
                if v > run.estimate {
                    run.estimate = v;
                    run.witness = x;
                }
            }
        }
        let doubled = su2_run(&rep, dm, samples * 2, multistarts * 2, seed);
        sweep.push(SweepPoint {
            parameter: dm,
            estimate: run.estimate,
            stability_ratio: doubled.estimate.max(run.estimate) / run.estimate,
            witness_coeffs: run.witness.as_slice().to_vec(),
        });
        carry = Some(run.witness.clone());
        last = (run.estimate, run.witness.as_slice().to_vec(), run.spread);
    }
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "su2-criterion-sweep".to_string(),
        constraint: format!("|xi| = 1, |mu(xi)| <= delta for delta in {sorted:?}"),
        estimate: last.0,
        witness_coeffs: last.1,
        samples,
        multistarts,
        seed,
        stability_ratio: 1.0,
        multistart_spread: last.2,
        sweep,
        flags: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// ADHM(1,2) estimators. Spinor layout: Ψ in coords 0..8 (H ⊗ C²), 𝛏 in
// coords 8..20 (su(2) ⊗ H over the unit-normalized su(2) basis), the inert
// center slot in 20..24.
// ---------------------------------------------------------------------------

const PSI_DIM: usize = 8;
const XI_DIM: usize = 12;

fn embed_psi(rep: &QuatRep, psi: &DVector<f64>) -> Spinor {
    let mut s = rep.zero_spinor();
    for d in 0..PSI_DIM {
        s.coeffs[d] = psi[d];
    }
    s
}

fn embed_xi(rep: &QuatRep, xi: &DVector<f64>) -> Spinor {
    let mut s = rep.zero_spinor();
    for d in 0..XI_DIM {
        s.coeffs[PSI_DIM + d] = xi[d];
    }
    s
}

fn embed_pair(rep: &QuatRep, x: &DVector<f64>) -> Spinor {
    let mut s = rep.zero_spinor();
    for d in 0..PSI_DIM + XI_DIM {
        s.coeffs[d] = x[d];
    }
    s
}

fn xi_part_matrix(x: &DVector<f64>, offset: usize) -> XiMatrix {
    XiMatrix::from_fn(|b, m| x[offset + b * 4 + m])
}

/// −⟨μ(Ψ), μ(𝛏)⟩ / (|μ(Ψ)||μ(𝛏)|); sentinel −2 on degenerate inputs.
fn sigma_objective(rep: &QuatRep, x: &DVector<f64>) -> f64 {
    let psi = embed_psi(rep, &x.rows(0, PSI_DIM).clone_owned());
    let xi = embed_xi(rep, &x.rows(PSI_DIM, XI_DIM).clone_owned());
    let mu_psi = rep.moment(&psi).unwrap();
    let mu_xi = rep.moment(&xi).unwrap();
    let (np, nx) = (mu_psi.norm(), mu_xi.norm());
    if np < 1e-9 || nx < 1e-9 {
        return -2.0;
    }
    -mu_psi.dot(&mu_xi) / (np * nx)
}

/// Boundary-stratum variant: the 𝛏 moment direction is replaced by
/// d_ζμ(ξ̂) = 2μ(ζ, ξ̂) for ζ on the cone and ξ̂ normal to it, the limit
/// of moment directions along collapsing sequences.
fn sigma_boundary_objective(rep: &QuatRep, x: &DVector<f64>) -> f64 {
    // layout: Ψ (8) | u (3) | v (4) | η (12)
    let psi = embed_psi(rep, &x.rows(0, PSI_DIM).clone_owned());
    let u = x.rows(8, 3).clone_owned();
    let v = x.rows(11, 4).clone_owned();
    let mut zeta = DVector::zeros(XI_DIM);
    for b in 0..3 {
        for m in 0..4 {
            zeta[b * 4 + m] = u[b] * v[m];
        }
    }
    let eta = x.rows(15, XI_DIM).clone_owned();
    let xi_hat = project_normal(&u, &v, &eta);
    let mu_psi = rep.moment(&psi).unwrap();
    let d = rep
        .moment_polarized(&embed_xi(rep, &zeta), &embed_xi(rep, &xi_hat))
        .unwrap()
        .scale(2.0);
    let (np, nd) = (mu_psi.norm(), d.norm());
    if np < 1e-9 || nd < 1e-9 {
        return -2.0;
    }
    -mu_psi.dot(&d) / (np * nd)
}

/// Projects η onto the normal space of the rank-one cone at u⊗v:
/// rows orthogonal to u, columns orthogonal to v.
fn project_normal(u: &DVector<f64>, v: &DVector<f64>, eta: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(XI_DIM);
    let mut both = 0.0;
    for b in 0..3 {
        for m in 0..4 {
            both += u[b] * v[m] * eta[b * 4 + m];
        }
    }
    for b in 0..3 {
        for m in 0..4 {
            let row_dot: f64 = (0..3).map(|bb| u[bb] * eta[bb * 4 + m]).sum();
            let col_dot: f64 = (0..4).map(|mm| v[mm] * eta[b * 4 + mm]).sum();
            out[b * 4 + m] = eta[b * 4 + m] - u[b] * row_dot - v[m] * col_dot + u[b] * v[m] * both;
        }
    }
    out
}

fn sigma_run(rep: &QuatRep, samples: usize, multistarts: usize, seed: u64) -> (SupRun, &'static str) {
    // interior family
    let objective = |x: &DVector<f64>| sigma_objective(rep, x);
    let project = |x: &DVector<f64>| {
        let mut y = x.clone();
        let np = y.rows(0, PSI_DIM).norm();
        let nx = y.rows(PSI_DIM, XI_DIM).norm();
        if np < 1e-9 || nx < 1e-9 {
            return None;
        }
        for d in 0..PSI_DIM {
            y[d] /= np;
        }
        for d in PSI_DIM..PSI_DIM + XI_DIM {
            y[d] /= nx;
        }
        Some(y)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = move |_i: usize| {
        let mut x = DVector::zeros(PSI_DIM + XI_DIM);
        let psi = random_unit(&mut rng, PSI_DIM);
        let xi = random_unit(&mut rng, XI_DIM);
        for d in 0..PSI_DIM {
            x[d] = psi[d];
        }
        for d in 0..XI_DIM {
            x[PSI_DIM + d] = xi[d];
        }
        x
    };
    let interior = run_sup(objective, project, sample, samples, multistarts);

    // boundary strata
    let objective_b = |x: &DVector<f64>| sigma_boundary_objective(rep, x);
    let project_b = |x: &DVector<f64>| {
        let mut y = x.clone();
        let np = y.rows(0, PSI_DIM).norm();
        let nu = y.rows(8, 3).norm();
        let nv = y.rows(11, 4).norm();
        let ne = y.rows(15, XI_DIM).norm();
        if np < 1e-9 || nu < 1e-9 || nv < 1e-9 || ne < 1e-9 {
            return None;
        }
        for d in 0..PSI_DIM {
            y[d] /= np;
        }
        for d in 8..11 {
            y[d] /= nu;
        }
        for d in 11..15 {
            y[d] /= nv;
        }
        for d in 15..15 + XI_DIM {
            y[d] /= ne;
        }
        Some(y)
    };
    let mut rng_b = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let sample_b = move |_i: usize| {
        let mut x = DVector::zeros(15 + XI_DIM);
        let parts: [(usize, usize); 4] = [(0, PSI_DIM), (8, 3), (11, 4), (15, XI_DIM)];
        for (off, len) in parts {
            let v = random_unit(&mut rng_b, len);
            for d in 0..len {
                x[off + d] = v[d];
            }
        }
        x
    };
    let boundary = run_sup(objective_b, project_b, sample_b, samples, multistarts);

    if boundary.estimate > interior.estimate {
        (boundary, "boundary-stratum")
    } else {
        (interior, "interior")
    }
}

/// σ̂ = sup −⟨μ(Ψ), μ(𝛏)⟩ / (|μ(Ψ)||μ(𝛏)|) over the ADHM(1,2) spinor
/// space, including the collapsed boundary strata of moment directions.
pub fn estimate_sigma_adhm12(samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    let rep = QuatRep::adhm12();
    let (base, family) = sigma_run(&rep, samples, multistarts, seed);
    if base.spread > 0.25 {
        return Err(CertifyError::NonConvergence { spread: base.spread });
    }
    let (doubled, _) = sigma_run(&rep, samples * 2, multistarts * 2, seed);
    let estimate = base.estimate;
    let mut flags = vec![format!("winner: {family}")];
    if estimate >= 1.0 {
        flags.push("sigma-not-strictly-below-one".to_string());
    }
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "sigma".to_string(),
        constraint: "Psi != 0, mu(xi) != 0, plus collapsed strata".to_string(),
        estimate,
        witness_coeffs: base.witness.as_slice().to_vec(),
        samples,
        multistarts,
        seed,
        stability_ratio: doubled.estimate / estimate,
        multistart_spread: base.spread,
        sweep: Vec::new(),
        flags,
    })
}

/// c_split = √(2/(1−σ)): |μ(Ψ)| + |μ(𝛏)| ≤ c_split·|μ(Ψ,𝛏)| follows from
/// the σ bound by expanding |μ(Ψ) + μ(𝛏)|².
pub fn split_constant_from_sigma(sigma: f64) -> f64 {
    assert!(sigma < 1.0, "split constant requires sigma < 1");
    (2.0 / (1.0 - sigma)).sqrt()
}

/// Counts violations of |μ(Ψ)| + |μ(𝛏)| ≤ c_split·|μ(Ψ,𝛏)| on fresh samples.
/// Returns (violations, worst observed ratio).
pub fn validate_split_bound(c_split: f64, samples: usize, seed: u64) -> (usize, f64) {
    let rep = QuatRep::adhm12();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let psi = random_unit(&mut rng, PSI_DIM) * (0.2 + 1.8 * rng.gen::<f64>());
        let xi = random_unit(&mut rng, XI_DIM) * (0.2 + 1.8 * rng.gen::<f64>());
        let mut x = DVector::zeros(PSI_DIM + XI_DIM);
        for d in 0..PSI_DIM {
            x[d] = psi[d];
        }
        for d in 0..XI_DIM {
            x[PSI_DIM + d] = xi[d];
        }
        let s = embed_pair(&rep, &x);
        let total = rep.moment(&s).unwrap().norm();
        let lhs = rep.moment(&embed_psi(&rep, &psi)).unwrap().norm()
            + rep.moment(&embed_xi(&rep, &xi)).unwrap().norm();
        if total < 1e-14 {
            continue;
        }
        let ratio = lhs / total;
        worst = worst.max(ratio);
        if lhs > c_split * total {
            violations += 1;
        }
    }
    (violations, worst)
}

fn min_mu_run(rep: &QuatRep, radius: f64, samples: usize, multistarts: usize, seed: u64) -> SupRun {
    // maximize the negated norm
    let objective = |x: &DVector<f64>| {
        let s = embed_pair(rep, x);
        -rep.moment(&s).unwrap().norm()
    };
    let project = |x: &DVector<f64>| {
        let mut y = x.clone();
        let np = y.rows(0, PSI_DIM).norm();
        if np < 1e-9 {
            return None;
        }
        for d in 0..PSI_DIM {
            y[d] /= np;
        }
        let nx = y.rows(PSI_DIM, XI_DIM).norm();
        if radius == 0.0 {
            for d in PSI_DIM..PSI_DIM + XI_DIM {
                y[d] = 0.0;
            }
        } else if nx > radius {
            for d in PSI_DIM..PSI_DIM + XI_DIM {
                y[d] *= radius / nx;
            }
        }
        Some(y)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = move |_i: usize| {
        let mut x = DVector::zeros(PSI_DIM + XI_DIM);
        let psi = random_unit(&mut rng, PSI_DIM);
        for d in 0..PSI_DIM {
            x[d] = psi[d];
        }
        if radius > 0.0 {
            let r: f64 = rng.gen::<f64>().powf(1.0 / XI_DIM as f64) * radius;
            let xi = random_unit(&mut rng, XI_DIM) * r;
            for d in 0..XI_DIM {
                x[PSI_DIM + d] = xi[d];
            }
        }
        x
    };
    let run = run_sup(objective, project, sample, samples, multistarts);
    SupRun { estimate: -run.estimate, witness: run.witness, spread: run.spread }
}

/// inf |μ(Ψ,𝛏)| over {|Ψ| = 1, |𝛏| ≤ R} for R in {0, 1, 10}.
pub fn min_mu_on_unit_psi(samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    let rep = QuatRep::adhm12();
    let radii = [0.0, 1.0, 10.0];
    let mut sweep = Vec::new();
    for &r in &radii {
        let base = min_mu_run(&rep, r, samples, multistarts, seed);
        if base.spread > 0.25 {
            return Err(CertifyError::NonConvergence { spread: base.spread });
        }
        let doubled = min_mu_run(&rep, r, samples * 2, multistarts * 2, seed);
        sweep.push(SweepPoint {
            parameter: r,
            estimate: base.estimate,
            stability_ratio: doubled.estimate / base.estimate,
            witness_coeffs: base.witness.as_slice().to_vec(),
        });
    }
    let binding = sweep.iter().cloned().reduce(|a, b| if b.estimate < a.estimate { b } else { a }).unwrap();
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "min-mu".to_string(),
        constraint: "|Psi| = 1, |xi| <= R for R in {0, 1, 10}".to_string(),
        estimate: binding.estimate,
        witness_coeffs: binding.witness_coeffs.clone(),
        samples,
        multistarts,
        seed,
        stability_ratio: binding.stability_ratio,
        multistart_spread: 0.0,
        sweep,
        flags: Vec::new(),
    })
}

/// Objective of the quadratic estimate: |μ(Ψ,𝛏)|² over
/// ⟨μ(Ψ,𝛏), μ(Ψ)⟩ + |Γ_𝛏 μ(Ψ,𝛏)|², on {|Ψ|² + |𝛏|² = 1, |μ| ≤ δ_μ}.
fn quad_objective(rep: &QuatRep, x: &DVector<f64>, negative_den: &mut bool) -> f64 {
    let s = embed_pair(rep, x);
    let mu = rep.moment(&s).unwrap();
    let num = mu.norm().powi(2);
    if num < 1e-24 {
        return 0.0;
    }
    let mu_psi = rep.moment(&embed_psi(rep, &x.rows(0, PSI_DIM).clone_owned())).unwrap();
    let xi = embed_xi(rep, &x.rows(PSI_DIM, XI_DIM).clone_owned());
    let gamma = rep.gamma_phi(&xi, &mu).unwrap();
    let den = mu.dot(&mu_psi) + gamma.norm().powi(2);
    if den <= 0.0 {
        *negative_den = true;
        return -1.0;
    }
    num / den
}

fn quad_project(rep: &QuatRep, delta_mu: f64, x: &DVector<f64>) -> Option<DVector<f64>> {
    let n = x.rows(0, PSI_DIM + XI_DIM).norm();
    if n < 1e-9 {
        return None;
    }
    let y = x.clone() / n;
    let mu_norm = |v: &DVector<f64>| rep.moment(&embed_pair(rep, v)).unwrap().norm();
    if mu_norm(&y) <= delta_mu {
        return Some(y);
    }
    // anchor: shrink Ψ, replace 𝛏 by its cone projection
    let xi = xi_part_matrix(&y, PSI_DIM);
    let zeta = cone_project(&xi).ok()?.zeta;
    let mut anchor = DVector::zeros(PSI_DIM + XI_DIM);
    for d in 0..PSI_DIM {
        anchor[d] = 0.05 * y[d];
    }
    for b in 0..3 {
        for m in 0..4 {
            anchor[PSI_DIM + b * 4 + m] = zeta[(b, m)];
        }
    }
    if anchor.norm() < 1e-9 {
        return None;
    }
    anchor /= anchor.norm();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let cand = (&y * (1.0 - mid) + &anchor * mid).normalize();
        if mu_norm(&cand) <= delta_mu * (1.0 - 1e-9) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let out = (&y * (1.0 - hi) + &anchor * hi).normalize();
    if mu_norm(&out) <= delta_mu {
        Some(out)
    } else {
        None
    }
}

fn quad_run(rep: &QuatRep, delta_mu: f64, samples: usize, multistarts: usize, seed: u64) -> (SupRun, bool) {
    let negative_den = std::cell::Cell::new(false);
    let objective = |x: &DVector<f64>| {
        let mut flag = false;
        let v = quad_objective(rep, x, &mut flag);
        if flag {
            negative_den.set(true);
        }
        v
    };
    let project = |x: &DVector<f64>| quad_project(rep, delta_mu, x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sample = move |i: usize| {
        let mut x = DVector::zeros(PSI_DIM + XI_DIM);
        // bias toward small Ψ with 𝛏 near the cone: the band constraint
        // forces this shape anyway
        let t: f64 = if i % 3 == 0 { 0.5 } else { 0.15 * rng.gen::<f64>() };
        let psi = random_unit(&mut rng, PSI_DIM) * t;
        let u = random_unit(&mut rng, 3);
        let v = random_unit(&mut rng, 4);
        for d in 0..PSI_DIM {
            x[d] = psi[d];
        }
        for b in 0..3 {
            for m in 0..4 {
                x[PSI_DIM + b * 4 + m] = u[b] * v[m];
            }
        }
        let dir = random_unit(&mut rng, XI_DIM) * (0.2 * rng.gen::<f64>());
        for d in 0..XI_DIM {
            x[PSI_DIM + d] += dir[d];
        }
        x
    };
    let run = run_sup(objective, project, sample, samples, multistarts);
    (run, negative_den.get())
}

/// ĉ_quad = sup |μ(Ψ,𝛏)|² / (⟨μ(Ψ,𝛏),μ(Ψ)⟩ + |Γ_𝛏μ(Ψ,𝛏)|²) on the band.
pub fn certify_quadratic_estimate(delta_mu: f64, samples: usize, multistarts: usize, seed: u64) -> Result<CertReport, CertifyError> {
    assert!(delta_mu > 0.0 && delta_mu < 1.0);
    let rep = QuatRep::adhm12();
    let (base, neg_base) = quad_run(&rep, delta_mu, samples, multistarts, seed);
    if base.spread > 0.25 {
        return Err(CertifyError::NonConvergence { spread: base.spread });
    }
    let (doubled, neg_doubled) = quad_run(&rep, delta_mu, samples * 2, multistarts * 2, seed);
    let mut flags = Vec::new();
    if neg_base || neg_doubled {
        flags.push("negative-denominator-counterexample-candidate".to_string());
    }
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "quadratic".to_string(),
        constraint: format!("|Psi|^2 + |xi|^2 = 1, |mu(Psi,xi)| <= {delta_mu}"),
        estimate: base.estimate,
        witness_coeffs: base.witness.as_slice().to_vec(),
        samples,
        multistarts,
        seed,
        stability_ratio: doubled.estimate / base.estimate,
        multistart_spread: base.spread,
        sweep: Vec::new(),
        flags,
    })
}

/// Searches su(3) ⊗ H for blow-up of the criterion ratio near the singular
/// strata of the cone: directions commuting with a degenerate Cartan
/// element stay invisible to Γ while still contributing to μ.
pub fn su3_failure_search(samples: usize, multistarts: usize, seed: u64, su2_c_hat: f64) -> Result<CertReport, CertifyError> {
    let rep = QuatRep::adjoint_su3();
    let dim = rep.dim_s;
    let delta_mu = 0.05;
    let objective = |x: &DVector<f64>| ratio_objective(&rep, x);
    let project = |x: &DVector<f64>| {
        let n = x.norm();
        if n < 1e-9 {
            return None;
        }
        let y = x / n;
        let mu = rep.moment(&Spinor { rep: rep.tag, coeffs: y.clone() }).unwrap();
        if mu.norm() <= delta_mu {
            Some(y)
        } else {
            None
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // strata seeds: D₂⊗1 + t(X₁₂⊗i + Y₁₂⊗j) + noise; D₂ (basis index 1)
    // commutes with the whole upper 2×2 block.
    let sample = move |i: usize| {
        if i % 2 == 0 {
            let t = 0.1 * 0.75f64.powi((i / 2 % 16) as i32);
            let mut x = DVector::zeros(dim);
            x[4] = 1.0; // D₂ ⊗ 1
            x[2 * 4 + 1] = t; // X₁₂ ⊗ i
            x[3 * 4 + 2] = t; // Y₁₂ ⊗ j
            let noise = random_unit(&mut rng, dim) * (0.02 * t);
            x + noise
        } else {
            random_unit(&mut rng, dim)
        }
    };
    let base = run_sup(objective, project, sample, samples, multistarts);
    let mut flags = Vec::new();
    let threshold = 10.0 * su2_c_hat;
    if base.estimate > threshold {
        flags.push(format!("ratio-exceeds-10x-su2-constant ({:.3} > {:.3})", base.estimate, threshold));
    }
    // a witness with Γ_𝛏μ(𝛏) ≈ 0 and μ(𝛏) ≠ 0 would also settle it
    let w = Spinor { rep: rep.tag, coeffs: base.witness.clone() };
    if let Err(CertifyError::DivisionByZero { .. }) = criterion_ratio(&rep, &w) {
        flags.push("gamma-annihilates-nonzero-moment-witness".to_string());
    }
    Ok(CertReport {
        rep: rep.name.clone(),
        estimator: "su3-failure".to_string(),
        constraint: format!("|xi| = 1, |mu(xi)| <= {delta_mu}"),
        estimate: base.estimate,
        witness_coeffs: base.witness.as_slice().to_vec(),
        samples,
        multistarts,
        seed,
        stability_ratio: 1.0,
        multistart_spread: base.spread,
        sweep: Vec::new(),
        flags,
    })
}
