//! Acceptance suite: one test per gate, each printing a pass/fail line.
//!
//! Numbers 1-9 cover the library; the CLI determinism gate (10) lives in
//! the command-line crate's own acceptance target.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use swmoment::certify::*;
use swmoment::identity::*;
use swmoment::lattice::*;
use swmoment::rep::*;

fn line(id: &str, pass: bool, detail: &str) {
    println!("ACCEPTANCE {id} {} {detail}", if pass { "pass" } else { "FAIL" });
}

fn builtin_reps() -> Vec<QuatRep> {
    vec![
        QuatRep::classical(),
        QuatRep::adjoint_su2(),
        QuatRep::adjoint_su3(),
        QuatRep::adhm12(),
        QuatRep::multispinor(2),
    ]
}

#[test]
fn acceptance_01_identity_suite() {
    const SAMPLES: usize = 10_000;
    const TOL: f64 = 1e-8;
    let mut all = true;
    for rep in builtin_reps() {
        for check in run_suite(&rep, SAMPLES, 2024, TOL).unwrap() {
            let ok = check.pass;
            all &= ok;
            line(
                "1",
                ok,
                &format!("{} on {}: worst residual {:.3e} (tol {TOL:.0e}, {} samples)", check.name, check.rep, check.worst_residual, check.samples),
            );
        }
    }
    assert!(all, "identity suite must pass at {TOL} over {SAMPLES} samples");
}

#[test]
fn acceptance_02_cross_implementation_oracles() {
    // bracket-formula moment vs representation-theoretic moment
    let mut worst_adj: f64 = 0.0;
    for (rep, n) in [(QuatRep::adjoint_su2(), 100_000usize), (QuatRep::adjoint_su3(), 10_000)] {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for _ in 0..n {
            let xi = rep.random_unit_spinor(&mut rng);
            let a = rep.moment(&xi).unwrap();
            let b = adjoint_mu_explicit(&rep.alg, &xi);
            worst_adj = worst_adj.max(a.sub(&b).norm());
        }
    }
    let ok_adj = worst_adj <= 1e-10;
    line("2", ok_adj, &format!("adjoint bracket formula vs moment: worst {worst_adj:.3e} (tol 1e-10)"));

    // Hermitian matrix form vs 𝛾(μ) through the C² identification
    let rep = QuatRep::classical();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst_cls: f64 = 0.0;
    for _ in 0..100_000 {
        let q = rep.random_unit_spinor(&mut rng);
        let m = classical_matrix_form(&q);
        let cm = complexify_classical_operator(&rep.gamma_alg_matrix(&rep.moment(&q).unwrap()));
        for r in 0..2 {
            for c in 0..2 {
                worst_cls = worst_cls.max((m[r][c].0 - cm[r][c].0).abs().max((m[r][c].1 - cm[r][c].1).abs()));
            }
        }
    }
    let ok_cls = worst_cls <= 1e-10;
    line("2", ok_cls, &format!("classical matrix form vs gamma(mu): worst {worst_cls:.3e} (tol 1e-10)"));

    // singular-value formula for |μ|² vs the moment norm
    let su2 = QuatRep::adjoint_su2();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst_svd: f64 = 0.0;
    for _ in 0..100_000 {
        let xi = su2.random_unit_spinor(&mut rng);
        let m = spinor_to_xi(&xi);
        let via_svd = mu_norm_from_singular_values(&m);
        let via_rep = su2.moment(&xi).unwrap().norm();
        if via_rep > 1e-12 {
            worst_svd = worst_svd.max((via_svd - via_rep).abs() / via_rep);
        }
    }
    let ok_svd = worst_svd <= 1e-9;
    line("2", ok_svd, &format!("singular-value |mu| oracle: worst relative {worst_svd:.3e} (tol 1e-9)"));

    assert!(ok_adj && ok_cls && ok_svd);
}

fn pi_torus_deviation(k: usize, samples: usize) -> (f64, f64, f64) {
    let rep = QuatRep::uk_spinors(k);
    let torus: Vec<Vec<f64>> = (0..k)
        .map(|m| {
            let mut t = vec![0.0; rep.dim_g()];
            t[m] = 1.0;
            t
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(300 + k as u64);
    let mut worst: f64 = 0.0;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..samples {
        let psi = rep.random_unit_spinor(&mut rng);
        let mu = rep.moment(&psi).unwrap();
        let proj = pi_torus(&rep, &torus, &mu).unwrap();
        let target = 0.5 * psi.norm().powi(2);
        worst = worst.max((proj.norm() - target).abs());
        let ratio = proj.norm() / target;
        min_ratio = min_ratio.min(ratio);
        max_ratio = max_ratio.max(ratio);
    }
    (worst, min_ratio, max_ratio)
}

#[test]
fn acceptance_03_pi_torus_k1() {
    let (worst, _, _) = pi_torus_deviation(1, 10_000);
    let ok = worst <= 1e-10;
    line("3", ok, &format!("k=1: | |pi_t mu| - |Psi|^2/2 | worst {worst:.3e} (tol 1e-10)"));
    assert!(ok);
}

/// The k ≥ 2 equality | |π_tμ(Ψ)| | = ½|Ψ|² is genuinely unattainable: for
/// the slot decomposition Ψ = (Ψ₁, ..., Ψ_k) adapted to the torus, the
/// projected moment is the orthogonal tuple (μ(Ψ₁), ..., μ(Ψ_k)) with
/// |μ(Ψ_m)| = ½|Ψ_m|², so |π_tμ(Ψ)| = ½·√(Σ|Ψ_m|⁴), which equals
/// ½·Σ|Ψ_m|² only when a single slot carries all the mass. The sharp
/// two-sided bounds ½|Ψ|²/√k ≤ |π_tμ(Ψ)| ≤ ½|Ψ|² do hold and are
/// verified below before the literal gate is asserted (and fails).
#[test]
fn acceptance_03_pi_torus_k2_k3() {
    let mut ok_all = true;
    for k in [2usize, 3] {
        let (worst, min_ratio, max_ratio) = pi_torus_deviation(k, 10_000);
        // the true bounds, tight on both sides
        let lower = 1.0 / (k as f64).sqrt();
        assert!(min_ratio >= lower - 1e-10, "k={k}: lower bound violated: {min_ratio}");
        assert!(max_ratio <= 1.0 + 1e-10, "k={k}: upper bound violated: {max_ratio}");
        let ok = worst <= 1e-10;
        ok_all &= ok;
        line(
            "3",
            ok,
            &format!(
                "k={k}: | |pi_t mu| - |Psi|^2/2 | worst {worst:.3e} (tol 1e-10); measured ratio range [{min_ratio:.6}, {max_ratio:.6}], true bounds [{lower:.6}, 1]"
            ),
        );
    }
    assert!(
        ok_all,
        "the k >= 2 torus-projection equality cannot hold: |pi_t mu(Psi)| = (1/2)*sqrt(sum |Psi_m|^4) != (1/2)*sum |Psi_m|^2 \
         unless one slot carries all mass; only the bounds (1/2)|Psi|^2/sqrt(k) <= |pi_t mu| <= (1/2)|Psi|^2 hold (verified above)"
    );
}

#[test]
fn acceptance_04_su2_criterion_and_su3_failure() {
    let report = certify_su2_criterion(0.05, 2000, 12, 7).unwrap();
    let finite = report.estimate.is_finite() && report.estimate > 0.0;
    let spread_ok = report.multistart_spread < 0.25;
    let drift = (report.stability_ratio - 1.0).abs();
    let stable = drift < 0.10;
    line(
        "4",
        finite && spread_ok && stable,
        &format!("su2 criterion constant {:.6} (spread {:.3}, doubling drift {:.3})", report.estimate, report.multistart_spread, drift),
    );

    let su3 = su3_failure_search(2000, 12, 7, report.estimate).unwrap();
    let exceeded = su3.estimate > 10.0 * report.estimate || su3.flags.iter().any(|f| f.contains("annihilates"));
    line("4", exceeded, &format!("su3 search max {:.3} vs 10x su2 constant {:.3}; flags {:?}", su3.estimate, 10.0 * report.estimate, su3.flags));

    assert!(finite && spread_ok && stable && exceeded);
}

#[test]
fn acceptance_05_sigma_and_split_constant() {
    let report = estimate_sigma_adhm12(2000, 12, 7).unwrap();
    let below = report.estimate < 0.999;
    let spread_ok = report.multistart_spread < 0.25;
    let drift = (report.stability_ratio - 1.0).abs();
    let stable = drift < 0.10;
    line(
        "5",
        below && spread_ok && stable,
        &format!("sigma {:.6} < 0.999 (spread {:.3}, doubling drift {:.3})", report.estimate, report.multistart_spread, drift),
    );

    let c_split = split_constant_from_sigma(report.estimate);
    let (violations, worst) = validate_split_bound(c_split, 100_000, 424242);
    let ok_split = violations == 0;
    line("5", ok_split, &format!("split constant {:.4}: {} violations on 1e5 fresh samples (worst ratio {:.4})", c_split, violations, worst));
    assert!(below && spread_ok && stable && ok_split);
}

#[test]
fn acceptance_06_min_mu_positive_and_stable() {
    let report = min_mu_on_unit_psi(1500, 10, 7).unwrap();
    let mut ok = true;
    for p in &report.sweep {
        let positive = p.estimate > 1e-3;
        let drift = (p.stability_ratio - 1.0).abs();
        let stable = drift < 0.10;
        ok &= positive && stable;
        line("6", positive && stable, &format!("min |mu| at R={}: {:.6} (doubling drift {:.3})", p.parameter, p.estimate, drift));
    }
    assert!(ok);
}

fn harmonic(degree: usize) -> impl Fn([f64; 3]) -> f64 {
    move |p: [f64; 3]| match degree {
        0 => 1.0,
        1 => p[0],
        2 => p[0] * p[0] - p[1] * p[1],
        _ => p[0].powi(3) - 3.0 * p[0] * p[1] * p[1],
    }
}

const ORACLE_RADII: [f64; 4] = [0.45, 0.55, 0.65, 0.75];

fn frequency_error_at(half: usize, degree: usize) -> f64 {
    let dom = Domain::new([0.0; 3], 1.0, 1.0 / half as f64).unwrap();
    let f = LatticeField::scalar_from_fn(dom, harmonic(degree));
    let prof = frequency_profile(&f, [0.0; 3], &ORACLE_RADII).unwrap();
    prof.n.iter().map(|n| (n.unwrap() - degree as f64).abs()).fold(0.0f64, f64::max)
}

#[test]
fn acceptance_07_frequency_oracle() {
    let mut ok_all = true;
    for degree in 0..=3usize {
        let dom = Domain::new([0.0; 3], 1.0, 1.0 / 64.0).unwrap();
        let f = LatticeField::scalar_from_fn(dom, harmonic(degree));
        let prof = frequency_profile(&f, [0.0; 3], &ORACLE_RADII).unwrap();
        let worst_n = prof.n.iter().map(|n| (n.unwrap() - degree as f64).abs()).fold(0.0f64, f64::max);
        let tol_n = if degree == 0 { 1e-10 } else { 0.02 * degree as f64 };
        let ok_n = worst_n <= tol_n;
        let mono = monotonicity_report(&prof).unwrap();
        let want_e = 2.0 * degree as f64;
        let worst_e = mono.pairs.iter().map(|(_, _, e)| (e - want_e).abs()).fold(0.0f64, f64::max);
        let tol_e = 0.04 * want_e.max(1.0);
        let ok_e = worst_e <= tol_e;
        ok_all &= ok_n && ok_e;
        line(
            "7",
            ok_n && ok_e,
            &format!("degree {degree}: |N - d| {worst_n:.4e} (tol {tol_n:.1e}), |exp - 2d| {worst_e:.4e} (tol {tol_e:.1e})"),
        );
    }

    // quadrature convergence: the error at least halves from h to h/2
    for degree in [2usize, 3] {
        let e32 = frequency_error_at(32, degree);
        let e64 = frequency_error_at(64, degree);
        let ok = e64 <= 0.6 * e32 + 1e-12;
        ok_all &= ok;
        line("7", ok, &format!("degree {degree} N-error halves: {e32:.4e} -> {e64:.4e}"));
    }

    // rescaling invariance: (Φ, ε) -> (λΦ, λε) leaves N unchanged
    let rep = QuatRep::adjoint_su2();
    let dom = Domain::new([0.0; 3], 1.0, 1.0 / 16.0).unwrap();
    let field_fn = |p: [f64; 3]| {
        let mut v = vec![0.0; 12];
        v[0] = 1.0 + p[0];
        v[5] = p[1]; // τ₁ ⊗ i with a linear coefficient: μ ≠ 0
        v[10] = 0.5 * p[2];
        v
    };
    let base = LatticeField::from_fn(dom.clone(), rep.clone(), 0.37, field_fn, None);
    let lambda = 1.7;
    let scaled = LatticeField::from_fn(dom, rep, 0.37 * lambda, move |p| field_fn(p).iter().map(|v| v * lambda).collect(), None);
    let radii = [0.4, 0.5, 0.6, 0.7];
    let p1 = frequency_profile(&base, [0.0; 3], &radii).unwrap();
    let p2 = frequency_profile(&scaled, [0.0; 3], &radii).unwrap();
    let mut worst_scale: f64 = 0.0;
    for i in 0..radii.len() {
        worst_scale = worst_scale.max((p1.n[i].unwrap() - p2.n[i].unwrap()).abs());
    }
    let ok_scale = worst_scale <= 1e-10;
    ok_all &= ok_scale;
    line("7", ok_scale, &format!("rescaling invariance of N: worst {worst_scale:.3e} (tol 1e-10)"));

    assert!(ok_all);
}

#[test]
fn acceptance_08_weitzenbock_convergence() {
    let rep = QuatRep::classical();
    let mut defects = Vec::new();
    for half in [16usize, 32, 64] {
        let dom = Domain::new([0.0; 3], 1.0, 1.0 / half as f64).unwrap();
        let f = LatticeField::from_fn(dom, rep.clone(), 1.0, |p| {
            vec![(p[0] + 0.3 * p[1]).sin(), (p[2] * 1.1).cos(), 0.0, 0.1 * (p[1].sin())]
        }, None);
        defects.push(weitzenbock_defect(&f).unwrap());
    }
    let s1 = (defects[0] / defects[1]).log2();
    let s2 = (defects[1] / defects[2]).log2();
    let ok_order = s1 >= 1.9 && s2 >= 1.9;
    line("8", ok_order, &format!("defect orders over h-halvings: {s1:.3}, {s2:.3} (need >= 1.9)"));

    let dom = Domain::new([0.0; 3], 1.0, 1.0 / 16.0).unwrap();
    let quad = LatticeField::from_fn(dom, rep, 1.0, |p| {
        vec![p[0] * p[0] - p[1] * p[2], 1.0 + p[2], 0.5 * p[1] * p[1], p[0]]
    }, None);
    let d = weitzenbock_defect(&quad).unwrap();
    let ok_quad = d <= 1e-10;
    line("8", ok_quad, &format!("degree-2 polynomial defect {d:.3e} (tol 1e-10)"));

    assert!(ok_order && ok_quad);
}

#[test]
fn acceptance_09_regularity_scale_and_covering() {
    // closed form for a constant density
    let dom = Domain::new([0.0; 3], 1.0, 1.0 / 16.0).unwrap();
    let dbar = 2.0;
    let density = ScalarLattice::from_fn(dom.clone(), |_| dbar);
    let c_f = 0.05;
    let want = (3.0 * c_f / (4.0 * std::f64::consts::PI * dbar)).powf(0.25);
    let got = regularity_scale(&density, c_f, 0.9, [0.0; 3]);
    let ok_reg = (got - want).abs() <= dom.spacing / 2.0 + 1e-12;
    line("9", ok_reg, &format!("constant-density regularity scale {got:.5} vs closed form {want:.5} (one grid step {:.5})", dom.spacing / 2.0));

    // 100 random mixtures: hypothesis => conclusion with zero violations
    let mut violations = 0;
    let mut engaged_runs = 0;
    for seed in 0..100u64 {
        let f = gaussian_mixture_field(dom.clone(), [0.0; 3], 1.0, 2 + (seed % 4) as usize, seed);
        let scan = CoveringScan::new(&f, [0.0; 3], 1.0, 2);
        let delta = 1.0 / (16.0 * scan_covering_number(&scan) as f64);
        let lambda = scan.largest_engaged_scale(delta, 8.0);
        for l in [lambda, 0.5 * lambda, 2.0 * lambda] {
            if l <= 0.0 {
                continue;
            }
            let v = scan.verdict(delta, l);
            if v.hypothesis_holds {
                engaged_runs += 1;
                if !v.conclusion_holds {
                    violations += 1;
                }
            }
        }
    }
    let ok_cov = violations == 0 && engaged_runs >= 100;
    line("9", ok_cov, &format!("gaussian mixtures: {engaged_runs} hypothesis-true runs, {violations} conclusion violations"));

    // constructed violator is flagged
    let spike = annulus_spike_field(dom, [0.0; 3], 0.5, 0.9);
    let v = covering_check(&spike, 0.05, [0.0; 3], 1.0);
    let ok_flag = !v.hypothesis_holds && v.worst_pair.is_some();
    line("9", ok_flag, &format!("annulus violator flagged: hypothesis_holds = {}, worst pair present = {}", v.hypothesis_holds, v.worst_pair.is_some()));

    assert!(ok_reg && ok_cov && ok_flag);
}

fn scan_covering_number(scan: &CoveringScan) -> usize {
    scan.verdict(1.0, 1.0).covering_number
}

/// Module-invariant spot check folded into the acceptance run: the
/// adjoint contract of Γ at 10^4 samples per representation.
#[test]
fn acceptance_gamma_adjoint_contract_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for rep in builtin_reps() {
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let phi = rep.random_unit_spinor(&mut rng);
            let psi = rep.random_unit_spinor(&mut rng);
            let zeta = MomentValue {
                coeffs: nalgebra::DMatrix::from_fn(3, rep.dim_g(), |_, _| {
                    use rand::Rng;
                    rng.gen::<f64>() - 0.5
                }),
            };
            let lhs = rep.gamma_phi(&phi, &zeta).unwrap().dot(&psi);
            let rhs = 2.0 * zeta.dot(&rep.moment_polarized(&phi, &psi).unwrap());
            worst = worst.max((lhs - rhs).abs());
        }
        assert!(worst <= 1e-10, "{}: adjoint contract residual {worst:.3e}", rep.name);
    }
}

/// Dirac residual against the analytic operator converges at second order.
#[test]
fn acceptance_dirac_residual_convergence() {
    let rep = QuatRep::classical();
    let mut errs = Vec::new();
    for half in [8usize, 16, 32] {
        let dom = Domain::new([0.0; 3], 1.0, 1.0 / half as f64).unwrap();
        let field = LatticeField::from_fn(dom.clone(), rep.clone(), 1.0, |p| vec![p[0].sin(), 0.0, (0.7 * p[1]).cos(), 0.0], None);
        let (dirac, _) = residual_sw(&field).unwrap();
        // analytic: DΦ = γ(e₁)∂₁Φ + γ(e₂)∂₂Φ
        let d = dom.dim();
        let mut worst: f64 = 0.0;
        for ix in 1..d - 1 {
            for iy in 1..d - 1 {
                for iz in 1..d - 1 {
                    let p = dom.node_pos(ix, iy, iz);
                    let d1 = rep.gamma_im(swmoment::quat::ImQuat::I, &rep.spinor(&[p[0].cos(), 0.0, 0.0, 0.0])).unwrap();
                    let d2 = rep.gamma_im(swmoment::quat::ImQuat::J, &rep.spinor(&[0.0, 0.0, -0.7 * (0.7 * p[1]).sin(), 0.0])).unwrap();
                    let analytic = d1.add(&d2).norm();
                    worst = worst.max((dirac.values[dom.index(ix, iy, iz)] - analytic).abs());
                }
            }
        }
        errs.push(worst);
    }
    let s1 = (errs[0] / errs[1]).log2();
    let s2 = (errs[1] / errs[2]).log2();
    assert!(s1 >= 1.9 && s2 >= 1.9, "orders {s1:.3}, {s2:.3}");
}
