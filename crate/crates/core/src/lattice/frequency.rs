//! The frequency function on lattice fields.
//!
//! m(r) is the mean of |Φ|² over the sphere of radius r (Lebedev quadrature
//! with trilinear interpolation), D(r) the scale-normalized energy
//! (1/4πr)·∫_{B_r} |∇_AΦ|² + 2ε⁻²|μ(Φ)|² by a Riemann ball sum, and
//! N = D/m wherever m > 0.

use serde::Serialize;

use super::{LatticeError, LatticeField};

/// 26-point Lebedev rule: octahedron vertices, edge midpoints, cube
/// vertices. Exact for polynomials up to degree 7; weights sum to 1.
fn lebedev_26() -> Vec<([f64; 3], f64)> {
    let mut pts = Vec::with_capacity(26);
    let w1 = 1.0 / 21.0;
    let w2 = 4.0 / 105.0;
    let w3 = 27.0 / 840.0;
    for a in 0..3 {
        for s in [-1.0, 1.0] {
            let mut p = [0.0; 3];
            p[a] = s;
            pts.push((p, w1));
        }
    }
    let r = 0.5f64.sqrt();
    for a in 0..3 {
        let b = (a + 1) % 3;
        for sa in [-1.0, 1.0] {
            for sb in [-1.0, 1.0] {
                let mut p = [0.0; 3];
                p[a] = sa * r;
                p[b] = sb * r;
                pts.push((p, w2));
            }
        }
    }
    let t = (1.0f64 / 3.0).sqrt();
    for sx in [-1.0, 1.0] {
        for sy in [-1.0, 1.0] {
            for sz in [-1.0, 1.0] {
                pts.push(([sx * t, sy * t, sz * t], w3));
            }
        }
    }
    pts
}

/// 74-point Lebedev rule (degree 13). One weight class is negative, which
/// is fine for the smooth integrands used here.
fn lebedev_74() -> Vec<([f64; 3], f64)> {
    let mut pts = lebedev_26();
    // reweight the shared orbits
    let (w1, w2, w3) = (0.000_513_067_179_733_846_4, 0.016_604_069_565_742_04, -0.029_586_038_961_038_96);
    for (i, (_, w)) in pts.iter_mut().enumerate() {
        *w = if i < 6 {
            w1
        } else if i < 18 {
            w2
        } else {
            w3
        };
    }
    // (±l, ±l, ±m) orbits, 2l² + m² = 1
    let l: f64 = 0.480_384_461_415_261_4;
    let m = (1.0 - 2.0 * l * l).sqrt();
    let wb = 0.026_576_207_082_934_68;
    for mpos in 0..3 {
        for s0 in [-1.0, 1.0] {
            for s1 in [-1.0, 1.0] {
                for s2 in [-1.0, 1.0] {
                    let mut p = [s0 * l, s1 * l, s2 * m];
                    p.swap(2, mpos);
                    pts.push((p, wb));
                }
            }
        }
    }
    // (±p, ±q, 0) orbits, p² + q² = 1
    let p0: f64 = 0.320_772_648_980_776_4;
    let q0 = (1.0 - p0 * p0).sqrt();
    let wc = 0.016_522_170_993_715_71;
    for zero_pos in 0..3 {
        for swap in 0..2 {
            for sp in [-1.0, 1.0] {
                for sq in [-1.0, 1.0] {
                    let (a, b) = if swap == 0 { (sp * p0, sq * q0) } else { (sp * q0, sq * p0) };
                    let mut p = [a, b, 0.0];
                    p.swap(2, zero_pos);
                    pts.push((p, wc));
                }
            }
        }
    }
    // the published 16-digit weights sum to 1 + 2e-11; renormalize so a
    // constant integrand averages to itself exactly
    let total: f64 = pts.iter().map(|(_, w)| w).sum();
    for (_, w) in pts.iter_mut() {
        *w /= total;
    }
    pts
}

/// Frequency data over a list of radii.
#[derive(Debug, Clone, Serialize)]
pub struct FrequencyProfile {
    pub radii: Vec<f64>,
    pub m: Vec<f64>,
    pub d: Vec<f64>,
    /// None where m vanishes.
    pub n: Vec<Option<f64>>,
    pub quadrature_points: usize,
    pub spacing: f64,
}

/// Computes (m, D, N) at the given radii around x.
///
/// Radii must lie in (4h, R − 2h] and the balls must stay one node away
/// from the grid boundary so the gradient stencil is defined everywhere.
pub fn frequency_profile(field: &LatticeField, x: [f64; 3], radii: &[f64]) -> Result<FrequencyProfile, LatticeError> {
    let dom = &field.domain;
    let h = dom.spacing;
    let lo = 4.0 * h;
    let hi = dom.radius - 2.0 * h;
    let safe = (dom.half as f64 - 1.0) * h;
    for &r in radii {
        if !(r > lo && r <= hi + 1e-12) {
            return Err(LatticeError::RadiusOutOfRange { r, lo, hi });
        }
        for a in 0..3 {
            if (x[a] - dom.center[a]).abs() + r > safe + 1e-12 {
                return Err(LatticeError::BallOutsideGrid { center: x, r });
            }
        }
    }

    let rule = if dom.radius / h >= 32.0 { lebedev_74() } else { lebedev_26() };
    let nsq = field.norm_sq_field();
    let energy = field.energy_density();

    let mut m = Vec::with_capacity(radii.len());
    let mut d = Vec::with_capacity(radii.len());
    let mut n = Vec::with_capacity(radii.len());
    for &r in radii {
        let mut mr = 0.0;
        for (u, w) in &rule {
            let p = [x[0] + r * u[0], x[1] + r * u[1], x[2] + r * u[2]];
            mr += w * nsq.interpolate(p);
        }
        let dr = energy.ball_integral(x, r) / (4.0 * std::f64::consts::PI * r);
        m.push(mr);
        d.push(dr);
        n.push(if mr > 1e-300 { Some(dr / mr) } else { None });
    }
    Ok(FrequencyProfile { radii: radii.to_vec(), m, d, n, quadrature_points: rule.len(), spacing: h })
}

/// Pairwise monotonicity data extracted from a profile.
#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityReport {
    /// (s, r, doubling exponent log(m(r)/m(s))/log(r/s)) for each s < r.
    pub pairs: Vec<(f64, f64, f64)>,
    /// smallest C with N(s) ≤ (1 + C·r²)·N(r) + C·r² over all pairs
    pub c_monotonicity: f64,
    /// smallest C with 2N(s) − C·r² ≤ exponent ≤ 2N(r) + C·r²
    pub c_doubling: f64,
    pub min_exponent: f64,
    pub max_exponent: f64,
}

pub fn monotonicity_report(profile: &FrequencyProfile) -> Result<MonotonicityReport, LatticeError> {
    if profile.radii.len() < 4 {
        return Err(LatticeError::TooFewRadii { need: 4, got: profile.radii.len() });
    }
    let n: Vec<f64> = profile
        .n
        .iter()
        .zip(&profile.radii)
        .map(|(v, &r)| v.ok_or(LatticeError::UndefinedFrequency(r)))
        .collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    let mut c_mono: f64 = 0.0;
    let mut c_doub: f64 = 0.0;
    let mut min_e = f64::INFINITY;
    let mut max_e = f64::NEG_INFINITY;
    for i in 0..profile.radii.len() {
        for j in (i + 1)..profile.radii.len() {
            let (s, r) = (profile.radii[i], profile.radii[j]);
            let (ns, nr) = (n[i], n[j]);
            c_mono = c_mono.max((ns - nr) / (r * r * (nr + 1.0)));
            let e = (profile.m[j] / profile.m[i]).ln() / (r / s).ln();
            pairs.push((s, r, e));
            min_e = min_e.min(e);
            max_e = max_e.max(e);
            c_doub = c_doub.max((2.0 * ns - e) / (r * r));
            c_doub = c_doub.max((e - 2.0 * nr) / (r * r));
        }
    }
    Ok(MonotonicityReport {
        pairs,
        c_monotonicity: c_mono.max(0.0),
        c_doubling: c_doub.max(0.0),
        min_exponent: min_e,
        max_exponent: max_e,
    })
}
