//! Regularity scales of densities and the ball-covering decay checker.
//!
//! For a nonnegative density f on a ball B_r(x), the checker tests the
//! implication "s·∫_{B_s(y)} f ≤ 1 implies (s/4)·∫_{B_{s/4}(y)} f ≤ δ"
//! over a grid of pairs (y, s), then evaluates the interior bound
//! (r/2)·∫_{B_{r/2}(x)} f ≤ 1. The threshold δ is a free input; both
//! readings of the proof-side inequality (δ against 1/(16·N_c) and against
//! N_c/16, with N_c the measured covering number of the ball by
//! eighth-radius balls) are reported alongside.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Domain, ScalarLattice};

/// sup { r ∈ [0, r0] : r·∫_{B_r(x)} f ≤ c_f } on the half-spacing radius
/// grid. The integrand is nonnegative, so the constraint is monotone and
/// bisection over the grid radii is exact.
pub fn regularity_scale(density: &ScalarLattice, c_f: f64, r0: f64, x: [f64; 3]) -> f64 {
    assert!(density.values.iter().all(|&v| v >= 0.0), "density must be nonnegative");
    let h2 = density.domain.spacing / 2.0;
    let kmax = (r0 / h2).floor() as usize;
    let value = |k: usize| {
        let r = k as f64 * h2;
        r * density.ball_integral(x, r)
    };
    // constraint never binds up to r0 itself: the sup is r0
    if r0 * density.ball_integral(x, r0) <= c_f {
        return r0;
    }
    if value(kmax) <= c_f {
        return (kmax as f64 * h2).min(r0);
    }
    // largest k with value(k) <= c_f; k = 0 always qualifies (r = 0)
    let (mut lo, mut hi) = (0usize, kmax);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if value(mid) <= c_f {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo as f64 * h2).min(r0)
}

/// The density's own regularity scale sup { s ≥ 0 : s·∫_{B_s(y)∩B_r(x)} f ≤ 1 }
/// on the half-spacing grid, clamped to r.
pub fn covering_regularity_scale(density: &ScalarLattice, x: [f64; 3], r: f64, y: [f64; 3]) -> f64 {
    let h2 = density.domain.spacing / 2.0;
    let kmax = (r / h2).floor() as usize;
    let clipped = clip_to_ball(density, x, r);
    let mut best = 0.0;
    for k in 0..=kmax {
        let s = k as f64 * h2;
        if s * clipped.ball_integral(y, s) <= 1.0 {
            best = s;
        } else {
            break;
        }
    }
    best
}

fn clip_to_ball(density: &ScalarLattice, x: [f64; 3], r: f64) -> ScalarLattice {
    let dom = density.domain.clone();
    let d = dom.dim();
    let mut values = vec![0.0; dom.n_nodes()];
    for ix in 0..d {
        for iy in 0..d {
            for iz in 0..d {
                let p = dom.node_pos(ix, iy, iz);
                let dist2 = (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2) + (p[2] - x[2]).powi(2);
                if dist2 <= r * r + 1e-12 {
                    values[dom.index(ix, iy, iz)] = density.values[dom.index(ix, iy, iz)];
                }
            }
        }
    }
    ScalarLattice { domain: dom, values }
}

/// Greedy covering number of the grid points of B_r(x) by balls of radius
/// r/8 centered at grid points.
pub fn measure_covering_number(domain: &Domain, x: [f64; 3], r: f64) -> usize {
    let d = domain.dim();
    let mut members: Vec<(usize, usize, usize)> = Vec::new();
    for ix in 0..d {
        for iy in 0..d {
            for iz in 0..d {
                let p = domain.node_pos(ix, iy, iz);
                let dist2 = (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2) + (p[2] - x[2]).powi(2);
                if dist2 <= r * r + 1e-12 {
                    members.push((ix, iy, iz));
                }
            }
        }
    }
    let small = r / 8.0;
    let mut covered = vec![false; members.len()];
    let mut count = 0;
    for i in 0..members.len() {
        if covered[i] {
            continue;
        }
        count += 1;
        let c = domain.node_pos(members[i].0, members[i].1, members[i].2);
        for (j, m) in members.iter().enumerate() {
            if covered[j] {
                continue;
            }
            let p = domain.node_pos(m.0, m.1, m.2);
            let dist2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + (p[2] - c[2]).powi(2);
            if dist2 <= small * small + 1e-12 {
                covered[j] = true;
            }
        }
    }
    count
}

/// One tested pair of the hypothesis scan.
#[derive(Debug, Clone, Serialize)]
pub struct WorstPair {
    pub y: [f64; 3],
    pub s: f64,
    /// s·∫_{B_s(y)} f
    pub premise_value: f64,
    /// (s/4)·∫_{B_{s/4}(y)} f
    pub quarter_value: f64,
}

/// Verdict of the covering check.
#[derive(Debug, Clone, Serialize)]
pub struct CoveringVerdict {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    /// (r/2)·∫_{B_{r/2}(x)} f
    pub conclusion_value: f64,
    pub tested_pairs: usize,
    /// pairs whose premise held
    pub engaged_pairs: usize,
    pub worst_pair: Option<WorstPair>,
    pub delta: f64,
    pub covering_number: usize,
    /// δ threshold read as 1/(16·N_c)
    pub delta_reading_inverse: f64,
    /// δ threshold read as N_c/16
    pub delta_reading_direct: f64,
}

/// Precomputed ball integrals over the (y, s) test grid; scanning at a
/// different density scale or δ is then a cheap pass over the pairs.
pub struct CoveringScan {
    pub x: [f64; 3],
    pub r: f64,
    /// (y, s, ∫_{B_s(y)} f, ∫_{B_{s/4}(y)} f) without the radius factors
    pairs: Vec<([f64; 3], f64, f64, f64)>,
    half_integral: f64,
    covering_number: usize,
}

impl CoveringScan {
    /// Tests y over a stride-thinned node grid and s over eighths of r,
    /// keeping only pairs with B_s(y) ⊂ B_r(x) and s ≥ 4h.
    pub fn new(density: &ScalarLattice, x: [f64; 3], r: f64, y_stride: usize) -> Self {
        let dom = &density.domain;
        let h = dom.spacing;
        let d = dom.dim();
        let s_list: Vec<f64> = (2..=6).map(|k| r * k as f64 / 8.0).filter(|&s| s >= 4.0 * h).collect();
        let mut pairs = Vec::new();
        for &s in &s_list {
            let offsets = dom.ball_offsets(s);
            let offsets_quarter = dom.ball_offsets(s / 4.0);
            let reach = r - s;
            for ix in (0..d).step_by(y_stride.max(1)) {
                for iy in (0..d).step_by(y_stride.max(1)) {
                    for iz in (0..d).step_by(y_stride.max(1)) {
                        let y = dom.node_pos(ix, iy, iz);
                        let dist2 = (y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2) + (y[2] - x[2]).powi(2);
                        if dist2 > reach * reach + 1e-12 {
                            continue;
                        }
                        let mut full = 0.0;
                        for &(dx, dy, dz) in &offsets {
                            let (jx, jy, jz) = (ix as i64 + dx, iy as i64 + dy, iz as i64 + dz);
                            if jx < 0 || jy < 0 || jz < 0 || jx >= d as i64 || jy >= d as i64 || jz >= d as i64 {
                                continue;
                            }
                            full += density.values[dom.index(jx as usize, jy as usize, jz as usize)];
                        }
                        let mut quarter = 0.0;
                        for &(dx, dy, dz) in &offsets_quarter {
                            let (jx, jy, jz) = (ix as i64 + dx, iy as i64 + dy, iz as i64 + dz);
                            if jx < 0 || jy < 0 || jz < 0 || jx >= d as i64 || jy >= d as i64 || jz >= d as i64 {
                                continue;
                            }
                            quarter += density.values[dom.index(jx as usize, jy as usize, jz as usize)];
                        }
                        let h3 = h * h * h;
                        pairs.push((y, s, full * h3, quarter * h3));
                    }
                }
            }
        }
        let half_integral = density.ball_integral(x, r / 2.0);
        let covering_number = measure_covering_number(dom, x, r);
        CoveringScan { x, r, pairs, half_integral, covering_number }
    }

    /// Evaluates the implication at density scale λ·f and threshold δ.
    pub fn verdict(&self, delta: f64, lambda: f64) -> CoveringVerdict {
        let mut hypothesis_holds = true;
        let mut engaged = 0;
        let mut worst: Option<WorstPair> = None;
        for &(y, s, full, quarter) in &self.pairs {
            let premise = s * lambda * full;
            let consequent = (s / 4.0) * lambda * quarter;
            if premise <= 1.0 {
                engaged += 1;
                if worst.as_ref().is_none_or(|w| consequent > w.quarter_value) {
                    worst = Some(WorstPair { y, s, premise_value: premise, quarter_value: consequent });
                }
                if consequent > delta {
                    hypothesis_holds = false;
                }
            }
        }
        let conclusion_value = (self.r / 2.0) * lambda * self.half_integral;
        CoveringVerdict {
            hypothesis_holds,
            conclusion_holds: conclusion_value <= 1.0,
            conclusion_value,
            tested_pairs: self.pairs.len(),
            engaged_pairs: engaged,
            worst_pair: worst,
            delta,
            covering_number: self.covering_number,
            delta_reading_inverse: 1.0 / (16.0 * self.covering_number as f64),
            delta_reading_direct: self.covering_number as f64 / 16.0,
        }
    }

    /// Largest λ ≤ hi for which the hypothesis holds with all premises
    /// engaged, by bisection from the all-premises-true regime.
    pub fn largest_engaged_scale(&self, delta: f64, hi: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = hi;
        // ensure hi is in the "fails or disengages" regime
        for _ in 0..60 {
            let v = self.verdict(delta, hi);
            if v.hypothesis_holds && v.engaged_pairs == v.tested_pairs {
                return hi;
            }
            let mid = 0.5 * (lo + hi);
            let vm = self.verdict(delta, mid);
            if vm.hypothesis_holds && vm.engaged_pairs == vm.tested_pairs {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Single-shot covering check with a stride-2 scan grid.
pub fn covering_check(density: &ScalarLattice, delta: f64, x: [f64; 3], r: f64) -> CoveringVerdict {
    CoveringScan::new(density, x, r, 2).verdict(delta, 1.0)
}

/// Nonnegative mixture of Gaussian bumps with centers in B_{0.8r}(x).
pub fn gaussian_mixture_field(domain: Domain, x: [f64; 3], r: f64, bumps: usize, seed: u64) -> ScalarLattice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = Vec::new();
    for _ in 0..bumps {
        let dir = loop {
            let v = [rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0];
            let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if n > 1e-6 && n <= 1.0 {
                break v;
            }
        };
        let c = [x[0] + 0.8 * r * dir[0], x[1] + 0.8 * r * dir[1], x[2] + 0.8 * r * dir[2]];
        let width = r * (0.05 + 0.3 * rng.gen::<f64>());
        let amp = 0.1 + rng.gen::<f64>();
        params.push((c, width, amp));
    }
    ScalarLattice::from_fn(domain, move |p| {
        params
            .iter()
            .map(|(c, w, a)| {
                let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2) + (p[2] - c[2]).powi(2);
                a * (-d2 / (2.0 * w * w)).exp()
            })
            .sum()
    })
}

/// A thin spherical shell of mass inside the quarter ball at y0, scaled so
/// that s0·∫_{B_{s0}} ≈ `premise` stays at or below 1 while the quarter
/// integral violates any δ below premise/4.
pub fn annulus_spike_field(domain: Domain, y0: [f64; 3], s0: f64, premise: f64) -> ScalarLattice {
    let shell_r = s0 / 8.0;
    let width = s0 / 40.0;
    let raw = ScalarLattice::from_fn(domain.clone(), move |p| {
        let d = ((p[0] - y0[0]).powi(2) + (p[1] - y0[1]).powi(2) + (p[2] - y0[2]).powi(2)).sqrt();
        (-((d - shell_r) / width).powi(2)).exp()
    });
    let mass = raw.ball_integral(y0, s0);
    let scale = premise / (s0 * mass.max(1e-300));
    ScalarLattice { domain, values: raw.values.iter().map(|v| v * scale).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_domain(halves: usize) -> Domain {
        Domain::new([0.0; 3], 1.0, 1.0 / halves as f64).unwrap()
    }

    #[test]
    fn regularity_scale_of_zero_density_is_r0() {
        let dom = unit_domain(16);
        let f = ScalarLattice::from_fn(dom, |_| 0.0);
        assert_eq!(regularity_scale(&f, 0.3, 0.7, [0.0; 3]), 0.7);
    }

    #[test]
    fn regularity_scale_matches_constant_density_closed_form() {
        let dom = unit_domain(16);
        let dbar = 2.0;
        let f = ScalarLattice::from_fn(dom, |_| dbar);
        let c_f = 0.05;
        // r·(4/3)πr³·D̄ = c_f
        let want = (3.0 * c_f / (4.0 * std::f64::consts::PI * dbar)).powf(0.25);
        let r0 = 0.9;
        let got = regularity_scale(&f, c_f, r0, [0.0; 3]);
        assert!((got - want).abs() <= f.domain.spacing / 2.0 + 1e-12, "got {got}, want {want}");
    }

    #[test]
    fn point_spike_shrinks_the_scale() {
        let dom = unit_domain(16);
        let dbar = 2.0;
        let flat = ScalarLattice::from_fn(dom.clone(), |_| dbar);
        let spiked = ScalarLattice::from_fn(dom, move |p| {
            let d2 = p.iter().map(|x| x * x).sum::<f64>();
            dbar + 40.0 * (-d2 / 0.005).exp()
        });
        let c_f = 0.05;
        let a = regularity_scale(&flat, c_f, 0.9, [0.0; 3]);
        let b = regularity_scale(&spiked, c_f, 0.9, [0.0; 3]);
        assert!(b < a, "spike: {b} vs flat: {a}");
    }

    #[test]
    fn zero_density_passes_hypothesis_and_conclusion() {
        let dom = unit_domain(16);
        let f = ScalarLattice::from_fn(dom, |_| 0.0);
        let v = covering_check(&f, 1e-4, [0.0; 3], 1.0);
        assert!(v.hypothesis_holds && v.conclusion_holds);
        assert_eq!(v.engaged_pairs, v.tested_pairs);
    }

    #[test]
    fn small_constant_passes_both() {
        let dom = unit_domain(16);
        // r∫_{B_r} f ≈ r⁴·(4π/3)·f̄ ≤ 1 everywhere needs f̄ modest, and the
        // tight δ needs it much smaller
        let v_delta = {
            let f = ScalarLattice::from_fn(dom.clone(), |_| 1.0);
            let scan = CoveringScan::new(&f, [0.0; 3], 1.0, 2);
            let delta = 1.0 / (16.0 * scan.covering_number as f64);
            let lambda = scan.largest_engaged_scale(delta, 10.0);
            assert!(lambda > 0.0);
            scan.verdict(delta, lambda)
        };
        assert!(v_delta.hypothesis_holds);
        assert!(v_delta.conclusion_holds);
    }

    #[test]
    fn annulus_spike_is_flagged() {
        let dom = unit_domain(16);
        let f = annulus_spike_field(dom, [0.0; 3], 0.5, 0.9);
        let v = covering_check(&f, 0.05, [0.0; 3], 1.0);
        assert!(!v.hypothesis_holds, "decay violation must be flagged");
        let w = v.worst_pair.expect("worst pair recorded");
        assert!(w.quarter_value > 0.05);
        assert!(w.premise_value <= 1.0);
    }

    #[test]
    fn regularity_scale_field_is_queryable() {
        let dom = unit_domain(16);
        let f = ScalarLattice::from_fn(dom, |_| 3.0);
        let r1 = covering_regularity_scale(&f, [0.0; 3], 1.0, [0.0; 3]);
        assert!(r1 > 0.0 && r1 < 1.0);
        // near the edge the clipped mass is smaller, so the scale larger
        let r2 = covering_regularity_scale(&f, [0.0; 3], 1.0, [0.9, 0.0, 0.0]);
        assert!(r2 >= r1);
    }

    #[test]
    fn covering_number_is_plausible() {
        let dom = unit_domain(16);
        let n = measure_covering_number(&dom, [0.0; 3], 1.0);
        // at least the volume ratio 8³, at most a small multiple of it
        assert!(n >= 512, "n = {n}");
        assert!(n <= 8000, "n = {n}");
    }

    #[test]
    fn gaussian_mixtures_never_violate_the_implication() {
        let dom = unit_domain(16);
        for seed in 0..10u64 {
            let f = gaussian_mixture_field(dom.clone(), [0.0; 3], 1.0, 3, seed);
            let scan = CoveringScan::new(&f, [0.0; 3], 1.0, 2);
            let delta = 1.0 / (16.0 * scan.covering_number as f64);
            let lambda = scan.largest_engaged_scale(delta, 4.0);
            let v = scan.verdict(delta, lambda.max(1e-6));
            if v.hypothesis_holds {
                assert!(v.conclusion_holds, "seed {seed}: hypothesis true but conclusion fails");
            }
        }
    }
}
