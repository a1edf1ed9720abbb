//! Batch entry point: reproducible certification and lattice-analysis runs.
//!
//! Exit codes: 0 when every check in the run passes, 1 when a check fails
//! its tolerance, 2 on configuration errors, 3 when an optimizer does not
//! converge (a partial report is still written). Reports are JSON with a
//! single volatile `timestamp_unix_secs` field; profile output is CSV with
//! the fixed column order radius, m, d, n.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use swmoment::certify::{self, CertReport, CertifyError};
use swmoment::identity;
use swmoment::lattice::{
    annulus_spike_field, covering_check, frequency_profile, gaussian_mixture_field,
    monotonicity_report, profile_to_csv, read_field, rep_by_name, residual_flat_gc, residual_sw,
    CoveringScan, Domain, LatticeField, ScalarLattice,
};
use swmoment::rep::QuatRep;

#[derive(Parser)]
#[command(
    name = "swmoment",
    version,
    about = "Moment-map algebra certification and lattice frequency analysis",
    after_help = "Exit codes: 0 all checks pass; 1 a check failed; 2 bad configuration; 3 optimizer non-convergence (partial report written).\n\
                  CSV columns are always: radius,m,d,n. Reports are byte-stable across runs except for timestamp_unix_secs.\n\
                  SWMOMENT_THREADS caps worker parallelism (this build computes sequentially, so any value >= 1 is honored)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a representation descriptor (dimensions and generator matrices)
    Describe {
        /// classical | su2-adjoint | su3-adjoint | adhm12 | multispinor-N | uk-K
        #[arg(long)]
        rep: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized pointwise-identity checks for one representation
    Identities {
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate a compactness constant by constrained optimization
    Certify(CertifyArgs),
    /// Frequency profile (m, D, N) of a lattice field
    Frequency(FrequencyArgs),
    /// Ball-covering decay check of a nonnegative density
    Covering(CoveringArgs),
    /// Pointwise equation residuals of a lattice field
    Residual(ResidualArgs),
}

#[derive(Args)]
struct CertifyArgs {
    /// su2-adjoint | su3-adjoint | adhm12 | multispinor-N
    #[arg(long)]
    rep: String,
    /// criterion | criterion-sweep | sigma | min-mu | quadratic | su3-failure
    #[arg(long)]
    estimator: String,
    #[arg(long, default_value_t = 0.05)]
    delta_mu: f64,
    /// comma-separated band widths for criterion-sweep
    #[arg(long, default_value = "0.01,0.05,0.1")]
    deltas: String,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    #[arg(long, default_value_t = 12)]
    multistarts: usize,
    #[arg(long)]
    seed: u64,
    /// reference su(2) constant for the su3-failure threshold (computed if absent)
    #[arg(long)]
    c_hat: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrequencyArgs {
    /// lattice field file; mutually exclusive with --preset
    #[arg(long)]
    field: Option<PathBuf>,
    /// harmonic-0 | harmonic-1 | harmonic-2 | harmonic-3 | adjoint-wave
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0 / 32.0)]
    h: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    /// base point, comma separated
    #[arg(long, default_value = "0,0,0")]
    center: String,
    #[arg(long, default_value = "0.45,0.55,0.65,0.75")]
    radii: String,
    #[arg(long)]
    seed: u64,
    /// CSV destination (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// optional JSON report with the monotonicity summary
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CoveringArgs {
    #[arg(long)]
    field: Option<PathBuf>,
    /// gaussian-mixture | annulus-spike | constant
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0 / 16.0)]
    h: f64,
    #[arg(long, default_value_t = 3)]
    bumps: usize,
    /// decay threshold; defaults to 1/(16·N_c) with N_c measured
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResidualArgs {
    #[arg(long)]
    field: Option<PathBuf>,
    /// cone-constant | linear-spinor | random-smooth
    #[arg(long)]
    preset: Option<String>,
    /// sw | flat-gc
    #[arg(long, default_value = "sw")]
    system: String,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 0.1)]
    h: f64,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    command: String,
    pass: bool,
    timestamp_unix_secs: u64,
    #[serde(flatten)]
    payload: T,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn now_secs() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn emit(out: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, content),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn emit_report<T: Serialize>(out: &Option<PathBuf>, command: &str, pass: bool, payload: T) -> std::io::Result<()> {
    let report = Report { command: command.to_string(), pass, timestamp_unix_secs: now_secs(), payload };
    emit(out, &serde_json::to_string_pretty(&report).expect("report serialization"))
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad {what} entry {t:?}: {e}")))
        .collect()
}

fn threads_cap_ok() -> Result<(), String> {
    match std::env::var("SWMOMENT_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!("SWMOMENT_THREADS must be a positive integer, got {v:?}")),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = threads_cap_ok() {
        return usage_error(&msg);
    }
    match cli.command {
        Command::Describe { rep, out } => {
            let Some(rep) = rep_by_name(&rep) else {
                return usage_error(&format!("unknown representation {rep:?}"));
            };
            match emit_report(&out, "describe", true, rep.describe()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        Command::Identities { rep, samples, seed, tolerance, out } => {
            if samples == 0 || tolerance <= 0.0 {
                return usage_error("samples and tolerance must be positive");
            }
            let Some(rep) = rep_by_name(&rep) else {
                return usage_error(&format!("unknown representation {rep:?}"));
            };
            let checks = match identity::run_suite(&rep, samples, seed, tolerance) {
                Ok(c) => c,
                Err(e) => return usage_error(&format!("{e}")),
            };
            let pass = checks.iter().all(|c| c.pass);
            #[derive(Serialize)]
            struct Payload {
                rep: String,
                samples: usize,
                seed: u64,
                tolerance: f64,
                checks: Vec<identity::IdentityCheck>,
            }
            let payload = Payload { rep: rep.name.clone(), samples, seed, tolerance, checks };
            match emit_report(&out, "identities", pass, payload) {
                Ok(()) => {
                    if pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        Command::Certify(args) => run_certify(args),
        Command::Frequency(args) => run_frequency(args),
        Command::Covering(args) => run_covering(args),
        Command::Residual(args) => run_residual(args),
    }
}

fn certify_pass(report: &CertReport) -> bool {
    let stable = (report.stability_ratio - 1.0).abs() < 0.10;
    let spread_ok = report.multistart_spread <= 0.25;
    let base = report.estimate.is_finite() && spread_ok && stable;
    match report.estimator.as_str() {
        "sigma" => base && report.estimate < 0.999,
        "min-mu" => {
            report.sweep.iter().all(|p| p.estimate > 0.0 && (p.stability_ratio - 1.0).abs() < 0.10)
                && report.estimate > 0.0
        }
        "quadratic" => base && !report.flags.iter().any(|f| f.contains("negative-denominator")),
        "su3-failure" => report.flags.iter().any(|f| f.contains("exceeds") || f.contains("annihilates")),
        _ => base && report.estimate > 0.0,
    }
}

fn run_certify(args: CertifyArgs) -> ExitCode {
    if args.samples == 0 || args.multistarts == 0 {
        return usage_error("samples and multistarts must be positive");
    }
    if !(args.delta_mu > 0.0 && args.delta_mu < 1.0) {
        return usage_error("delta-mu must lie in (0, 1)");
    }
    let (rep_name, estimator) = (args.rep.as_str(), args.estimator.as_str());
    let result: Result<CertReport, CertifyError> = match (rep_name, estimator) {
        ("su2-adjoint", "criterion") => certify::certify_su2_criterion(args.delta_mu, args.samples, args.multistarts, args.seed),
        ("su2-adjoint", "criterion-sweep") => {
            let deltas = match parse_floats(&args.deltas, "deltas") {
                Ok(d) if !d.is_empty() && d.iter().all(|&x| x > 0.0 && x < 1.0) => d,
                Ok(_) => return usage_error("deltas must lie in (0, 1)"),
                Err(e) => return usage_error(&e),
            };
            certify::su2_criterion_delta_sweep(&deltas, args.samples, args.multistarts, args.seed)
        }
        (_, "criterion") => {
            let Some(rep) = rep_by_name(rep_name) else {
                return usage_error(&format!("unknown representation {rep_name:?}"));
            };
            certify::certify_criterion_generic(&rep, args.delta_mu, args.samples, args.multistarts, args.seed)
        }
        ("adhm12", "sigma") => certify::estimate_sigma_adhm12(args.samples, args.multistarts, args.seed),
        ("adhm12", "min-mu") => certify::min_mu_on_unit_psi(args.samples, args.multistarts, args.seed),
        ("adhm12", "quadratic") => certify::certify_quadratic_estimate(args.delta_mu, args.samples, args.multistarts, args.seed),
        ("su3-adjoint", "su3-failure") => {
            let c_hat = match args.c_hat {
                Some(c) if c > 0.0 => Ok(c),
                Some(_) => return usage_error("c-hat must be positive"),
                None => certify::certify_su2_criterion(args.delta_mu, args.samples, args.multistarts, args.seed).map(|r| r.estimate),
            };
            match c_hat {
                Ok(c) => certify::su3_failure_search(args.samples, args.multistarts, args.seed, c),
                Err(e) => Err(e),
            }
        }
        _ => return usage_error(&format!("estimator {estimator:?} is not defined for representation {rep_name:?}")),
    };
    match result {
        Ok(report) => {
            let pass = certify_pass(&report);
            match emit_report(&args.out, "certify", pass, report) {
                Ok(()) => {
                    if pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => usage_error(&format!("cannot write output: {e}")),
            }
        }
        Err(CertifyError::NonConvergence { spread }) => {
            #[derive(Serialize)]
            struct Partial {
                rep: String,
                estimator: String,
                multistart_spread: f64,
                converged: bool,
            }
            let partial = Partial {
                rep: args.rep.clone(),
                estimator: args.estimator.clone(),
                multistart_spread: spread,
                converged: false,
            };
            let _ = emit_report(&args.out, "certify", false, partial);
            eprintln!("error: non-convergence (multistart spread {spread:.3})");
            ExitCode::from(3)
        }
        Err(e) => usage_error(&format!("{e}")),
    }
}

fn harmonic_preset(degree: usize) -> impl Fn([f64; 3]) -> f64 {
    move |p: [f64; 3]| match degree {
        0 => 1.0,
        1 => p[0],
        2 => p[0] * p[0] - p[1] * p[1],
        _ => p[0].powi(3) - 3.0 * p[0] * p[1] * p[1],
    }
}

fn frequency_field(args: &FrequencyArgs) -> Result<LatticeField, String> {
    if args.field.is_some() && args.preset.is_some() {
        return Err("--field and --preset are mutually exclusive".into());
    }
    if let Some(path) = &args.field {
        return read_field(path).map_err(|e| format!("{e}"));
    }
    let preset = args.preset.as_deref().unwrap_or("harmonic-1");
    let domain = Domain::new([0.0; 3], args.r, args.h).map_err(|e| format!("{e}"))?;
    match preset {
        "harmonic-0" | "harmonic-1" | "harmonic-2" | "harmonic-3" => {
            let degree = preset.trim_start_matches("harmonic-").parse::<usize>().unwrap();
            Ok(LatticeField::scalar_from_fn(domain, harmonic_preset(degree)))
        }
        "adjoint-wave" => {
            let rep = QuatRep::adjoint_su2();
            let s = (args.seed % 97) as f64 / 97.0 + 0.5;
            Ok(LatticeField::from_fn(domain, rep, args.epsilon, move |p| {
                let mut v = vec![0.0; 12];
                v[0] = 1.0 + s * p[0];
                v[5] = p[1];
                v[10] = 0.5 * p[2];
                v
            }, None))
        }
        other => Err(format!("unknown preset {other:?}")),
    }
}

fn run_frequency(args: FrequencyArgs) -> ExitCode {
    let center = match parse_floats(&args.center, "center") {
        Ok(c) if c.len() == 3 => [c[0], c[1], c[2]],
        Ok(_) => return usage_error("center needs exactly three coordinates"),
        Err(e) => return usage_error(&e),
    };
    let radii = match parse_floats(&args.radii, "radii") {
        Ok(r) if !r.is_empty() && r.iter().all(|&x| x > 0.0) => r,
        Ok(_) => return usage_error("radii must be positive"),
        Err(e) => return usage_error(&e),
    };
    let field = match frequency_field(&args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let profile = match frequency_profile(&field, center, &radii) {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("{e}")),
    };
    if let Err(e) = emit(&args.out, profile_to_csv(&profile).trim_end()) {
        return usage_error(&format!("cannot write output: {e}"));
    }
    if let Some(report_path) = &args.report {
        #[derive(Serialize)]
        struct Payload {
            profile: swmoment::lattice::FrequencyProfile,
            monotonicity: Option<swmoment::lattice::MonotonicityReport>,
        }
        let monotonicity = monotonicity_report(&profile).ok();
        let payload = Payload { profile, monotonicity };
        if let Err(e) = emit_report(&Some(report_path.clone()), "frequency", true, payload) {
            return usage_error(&format!("cannot write report: {e}"));
        }
    }
    ExitCode::SUCCESS
}

fn covering_field(args: &CoveringArgs) -> Result<ScalarLattice, String> {
    if args.field.is_some() && args.preset.is_some() {
        return Err("--field and --preset are mutually exclusive".into());
    }
    if let Some(path) = &args.field {
        let f = read_field(path).map_err(|e| format!("{e}"))?;
        if f.value_dim != 1 {
            return Err("covering check needs a scalar density field".into());
        }
        if f.values.iter().any(|&v| v < 0.0) {
            return Err("density must be nonnegative".into());
        }
        return Ok(ScalarLattice { domain: f.domain, values: f.values });
    }
    let domain = Domain::new([0.0; 3], args.r, args.h).map_err(|e| format!("{e}"))?;
    match args.preset.as_deref().unwrap_or("gaussian-mixture") {
        "gaussian-mixture" => Ok(gaussian_mixture_field(domain, [0.0; 3], args.r, args.bumps.max(1), args.seed)),
        "annulus-spike" => Ok(annulus_spike_field(domain, [0.0; 3], args.r / 2.0, 0.9)),
        "constant" => Ok(ScalarLattice::from_fn(domain, |_| 1.0)),
        other => Err(format!("unknown preset {other:?}")),
    }
}

fn run_covering(args: CoveringArgs) -> ExitCode {
    let density = match covering_field(&args) {
        Ok(d) => d,
        Err(e) => return usage_error(&e),
    };
    let r = args.r.min(density.domain.radius);
    let verdict = match args.delta {
        Some(d) if d > 0.0 => covering_check(&density, d, density.domain.center, r),
        Some(_) => return usage_error("delta must be positive"),
        None => {
            let scan = CoveringScan::new(&density, density.domain.center, r, 2);
            let probe = scan.verdict(1.0, 1.0);
            scan.verdict(1.0 / (16.0 * probe.covering_number as f64), 1.0)
        }
    };
    // a run fails only when the implication itself is violated
    let pass = !(verdict.hypothesis_holds && !verdict.conclusion_holds);
    match emit_report(&args.out, "covering", pass, verdict) {
        Ok(()) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => usage_error(&format!("cannot write output: {e}")),
    }
}

fn residual_field(args: &ResidualArgs) -> Result<LatticeField, String> {
    if args.field.is_some() && args.preset.is_some() {
        return Err("--field and --preset are mutually exclusive".into());
    }
    if let Some(path) = &args.field {
        return read_field(path).map_err(|e| format!("{e}"));
    }
    let domain = Domain::new([0.0; 3], args.r, args.h).map_err(|e| format!("{e}"))?;
    match args.preset.as_deref().unwrap_or("cone-constant") {
        "cone-constant" => {
            let rep = QuatRep::adjoint_su2();
            Ok(LatticeField::from_fn(domain, rep, args.epsilon, |_| {
                let mut v = vec![0.0; 12];
                v[0] = 1.0;
                v
            }, None))
        }
        "linear-spinor" => {
            let rep = QuatRep::classical();
            Ok(LatticeField::from_fn(domain, rep, args.epsilon, |p| vec![p[0], 0.0, 0.0, 0.0], None))
        }
        "random-smooth" => {
            let rep = QuatRep::adjoint_su2();
            let g = rep.dim_g();
            let phase = (args.seed % 13) as f64 / 13.0;
            let conn = move |p: [f64; 3]| {
                let mut a = vec![0.0; 3 * g];
                a[0] = 0.2 * (p[1] + phase).sin();
                a[g + 1] = 0.1 * p[2];
                a
            };
            Ok(LatticeField::from_fn(domain, rep, args.epsilon, move |p| {
                let mut v = vec![0.0; 12];
                v[0] = (p[0] + phase).cos();
                v[5] = 0.4 * p[1];
                v[10] = 0.2 * p[2] * p[0];
                v
            }, Some(&conn)))
        }
        other => Err(format!("unknown preset {other:?}")),
    }
}

fn run_residual(args: ResidualArgs) -> ExitCode {
    let field = match residual_field(&args) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    match args.system.as_str() {
        "sw" => match residual_sw(&field) {
            Ok((dirac, curvature)) => {
                #[derive(Serialize)]
                struct Payload {
                    system: &'static str,
                    dirac_sup: f64,
                    curvature_sup: f64,
                }
                let payload = Payload { system: "sw", dirac_sup: dirac.max_abs(), curvature_sup: curvature.max_abs() };
                match emit_report(&args.out, "residual", true, payload) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => usage_error(&format!("cannot write output: {e}")),
                }
            }
            Err(e) => usage_error(&format!("{e}")),
        },
        "flat-gc" => match residual_flat_gc(&field) {
            Ok([r1, r2, r3]) => {
                #[derive(Serialize)]
                struct Payload {
                    system: &'static str,
                    coulomb_sup: f64,
                    curl_sup: f64,
                    curvature_sup: f64,
                }
                let payload = Payload { system: "flat-gc", coulomb_sup: r1.max_abs(), curl_sup: r2.max_abs(), curvature_sup: r3.max_abs() };
                match emit_report(&args.out, "residual", true, payload) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => usage_error(&format!("cannot write output: {e}")),
                }
            }
            Err(e) => usage_error(&format!("{e}")),
        },
        other => usage_error(&format!("unknown system {other:?} (use sw or flat-gc)")),
    }
}
