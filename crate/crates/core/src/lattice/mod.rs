//! Sampled fields on uniform grids over Euclidean balls and the discrete
//! analysis built on them: equation residuals, the frequency function,
//! regularity scales, and the ball-covering checker.

mod covering;
mod frequency;
mod io;
mod residual;

pub use covering::{
    annulus_spike_field, covering_check, covering_regularity_scale, gaussian_mixture_field,
    measure_covering_number, regularity_scale, CoveringScan, CoveringVerdict, WorstPair,
};
pub use frequency::{frequency_profile, monotonicity_report, FrequencyProfile, MonotonicityReport};
pub use io::{profile_to_csv, read_field, rep_by_name, write_field};
pub use residual::{residual_flat_gc, residual_sw, weitzenbock_defect};

use thiserror::Error;

use crate::rep::{MomentValue, QuatRep, Spinor};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("spacing must be positive, got {0}")]
    BadSpacing(f64),
    #[error("need radius/spacing >= 8, got {0:.3}")]
    GridTooCoarse(f64),
    #[error("radius {r} outside the admissible range ({lo:.6}, {hi:.6}]")]
    RadiusOutOfRange { r: f64, lo: f64, hi: f64 },
    #[error("ball of radius {r} around {center:?} leaves the stencil-safe region")]
    BallOutsideGrid { center: [f64; 3], r: f64 },
    #[error("operation requires a representation-valued field")]
    ScalarField,
    #[error("operation requires an adjoint-representation field")]
    NotAdjoint,
    #[error("domain too small for the stencil (need margin {need})")]
    StencilMargin { need: usize },
    #[error("frequency undefined: m vanishes at radius {0}")]
    UndefinedFrequency(f64),
    #[error("need at least {need} radii, got {got}")]
    TooFewRadii { need: usize, got: usize },
    #[error("field file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Rep(#[from] crate::rep::RepError),
}

/// A cube of (2n+1)³ nodes with spacing h covering the closed ball of
/// radius R around the center.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub center: [f64; 3],
    pub radius: f64,
    pub spacing: f64,
    /// nodes extend center ± half·spacing per axis
    pub half: usize,
}

impl Domain {
    pub fn new(center: [f64; 3], radius: f64, spacing: f64) -> Result<Self, LatticeError> {
        if spacing <= 0.0 {
            return Err(LatticeError::BadSpacing(spacing));
        }
        let ratio = radius / spacing;
        if ratio < 8.0 {
            return Err(LatticeError::GridTooCoarse(ratio));
        }
        let half = (ratio - 1e-12).ceil() as usize;
        Ok(Domain { center, radius, spacing, half })
    }

    pub fn dim(&self) -> usize {
        2 * self.half + 1
    }

    pub fn n_nodes(&self) -> usize {
        let d = self.dim();
        d * d * d
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        let d = self.dim();
        (ix * d + iy) * d + iz
    }

    pub fn node_pos(&self, ix: usize, iy: usize, iz: usize) -> [f64; 3] {
        let n = self.half as f64;
        [
            self.center[0] + (ix as f64 - n) * self.spacing,
            self.center[1] + (iy as f64 - n) * self.spacing,
            self.center[2] + (iz as f64 - n) * self.spacing,
        ]
    }

    /// Integer offsets (dx, dy, dz) with |offset|·h ≤ r.
    pub fn ball_offsets(&self, r: f64) -> Vec<(i64, i64, i64)> {
        let k = (r / self.spacing).floor() as i64;
        let r2 = (r / self.spacing) * (r / self.spacing);
        let mut out = Vec::new();
        for dx in -k..=k {
            for dy in -k..=k {
                for dz in -k..=k {
                    if (dx * dx + dy * dy + dz * dz) as f64 <= r2 + 1e-12 {
                        out.push((dx, dy, dz));
                    }
                }
            }
        }
        out
    }

    /// Grid indices of the node nearest to a point, or None outside the cube.
    pub fn nearest_node(&self, p: [f64; 3]) -> Option<(usize, usize, usize)> {
        let d = self.dim() as i64;
        let mut idx = [0usize; 3];
        for a in 0..3 {
            let t = ((p[a] - self.center[a]) / self.spacing + self.half as f64).round() as i64;
            if t < 0 || t >= d {
                return None;
            }
            idx[a] = t as usize;
        }
        Some((idx[0], idx[1], idx[2]))
    }
}

/// A scalar sample per node.
#[derive(Debug, Clone)]
pub struct ScalarLattice {
    pub domain: Domain,
    pub values: Vec<f64>,
}

impl ScalarLattice {
    pub fn from_fn(domain: Domain, f: impl Fn([f64; 3]) -> f64) -> Self {
        let d = domain.dim();
        let mut values = vec![0.0; domain.n_nodes()];
        for ix in 0..d {
            for iy in 0..d {
                for iz in 0..d {
                    values[domain.index(ix, iy, iz)] = f(domain.node_pos(ix, iy, iz));
                }
            }
        }
        ScalarLattice { domain, values }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Trilinear interpolation; the point must lie inside the node cube.
    pub fn interpolate(&self, p: [f64; 3]) -> f64 {
        let d = self.domain.dim();
        let mut cell = [0usize; 3];
        let mut frac = [0.0f64; 3];
        for a in 0..3 {
            let t = (p[a] - self.domain.center[a]) / self.domain.spacing + self.domain.half as f64;
            let mut i = t.floor();
            let max_cell = (d - 2) as f64;
            if i < 0.0 {
                i = 0.0;
            }
            if i > max_cell {
                i = max_cell;
            }
            cell[a] = i as usize;
            frac[a] = t - i;
        }
        let mut acc = 0.0;
        for cx in 0..2 {
            for cy in 0..2 {
                for cz in 0..2 {
                    let w = (if cx == 0 { 1.0 - frac[0] } else { frac[0] })
                        * (if cy == 0 { 1.0 - frac[1] } else { frac[1] })
                        * (if cz == 0 { 1.0 - frac[2] } else { frac[2] });
                    acc += w * self.values[self.domain.index(cell[0] + cx, cell[1] + cy, cell[2] + cz)];
                }
            }
        }
        acc
    }

    /// h³ · Σ f over nodes within distance r of x.
    pub fn ball_integral(&self, x: [f64; 3], r: f64) -> f64 {
        let h = self.domain.spacing;
        let d = self.domain.dim() as i64;
        let (cx, cy, cz) = match self.domain.nearest_node(x) {
            Some(c) => c,
            None => return 0.0,
        };
        let cpos = self.domain.node_pos(cx, cy, cz);
        let k = ((r + (x[0] - cpos[0]).abs().max((x[1] - cpos[1]).abs()).max((x[2] - cpos[2]).abs())) / h).ceil() as i64 + 1;
        let r2 = r * r;
        let mut acc = 0.0;
        for dx in -k..=k {
            let ix = cx as i64 + dx;
            if ix < 0 || ix >= d {
                continue;
            }
            for dy in -k..=k {
                let iy = cy as i64 + dy;
                if iy < 0 || iy >= d {
                    continue;
                }
                for dz in -k..=k {
                    let iz = cz as i64 + dz;
                    if iz < 0 || iz >= d {
                        continue;
                    }
                    let p = self.domain.node_pos(ix as usize, iy as usize, iz as usize);
                    let dist2 = (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2) + (p[2] - x[2]).powi(2);
                    if dist2 <= r2 + 1e-12 {
                        acc += self.values[self.domain.index(ix as usize, iy as usize, iz as usize)];
                    }
                }
            }
        }
        acc * h * h * h
    }
}

/// Spinor (or scalar) samples per node, optionally with a connection
/// one-form in temporal-free gauge on a trivialized bundle.
#[derive(Debug, Clone)]
pub struct LatticeField {
    pub domain: Domain,
    /// None for plain scalar fields (no gauge structure, μ ≡ 0).
    pub rep: Option<QuatRep>,
    pub value_dim: usize,
    /// node-major coefficients, value_dim per node
    pub values: Vec<f64>,
    /// node-major connection coefficients, 3·dim𝔤 per node: (dir·dim𝔤 + b)
    pub conn: Option<Vec<f64>>,
    pub epsilon: f64,
}

impl LatticeField {
    pub fn scalar_from_fn(domain: Domain, f: impl Fn([f64; 3]) -> f64) -> Self {
        let d = domain.dim();
        let mut values = vec![0.0; domain.n_nodes()];
        for ix in 0..d {
            for iy in 0..d {
                for iz in 0..d {
                    values[domain.index(ix, iy, iz)] = f(domain.node_pos(ix, iy, iz));
                }
            }
        }
        LatticeField { domain, rep: None, value_dim: 1, values, conn: None, epsilon: 1.0 }
    }

    pub fn from_fn(
        domain: Domain,
        rep: QuatRep,
        epsilon: f64,
        phi: impl Fn([f64; 3]) -> Vec<f64>,
        conn: Option<&dyn Fn([f64; 3]) -> Vec<f64>>,
    ) -> Self {
        assert!(epsilon > 0.0, "epsilon must be positive");
        let d = domain.dim();
        let vd = rep.dim_s;
        let g = rep.dim_g();
        let mut values = vec![0.0; domain.n_nodes() * vd];
        let mut conn_values = conn.map(|_| vec![0.0; domain.n_nodes() * 3 * g]);
        for ix in 0..d {
            for iy in 0..d {
                for iz in 0..d {
                    let p = domain.node_pos(ix, iy, iz);
                    let node = domain.index(ix, iy, iz);
                    let v = phi(p);
                    assert_eq!(v.len(), vd);
                    values[node * vd..(node + 1) * vd].copy_from_slice(&v);
                    if let (Some(cf), Some(cfn)) = (conn, conn_values.as_mut()) {
                        let a = cf(p);
                        assert_eq!(a.len(), 3 * g);
                        cfn[node * 3 * g..(node + 1) * 3 * g].copy_from_slice(&a);
                    }
                }
            }
        }
        LatticeField { domain, rep: Some(rep), value_dim: vd, values, conn: conn_values, epsilon }
    }

    pub fn value(&self, node: usize) -> &[f64] {
        &self.values[node * self.value_dim..(node + 1) * self.value_dim]
    }

    pub fn spinor_at(&self, node: usize) -> Option<Spinor> {
        self.rep.as_ref().map(|rep| rep.spinor(self.value(node)))
    }

    fn conn_dir(&self, node: usize, dir: usize) -> Option<&[f64]> {
        let g = self.rep.as_ref().map_or(0, |r| r.dim_g());
        self.conn.as_ref().map(|c| &c[(node * 3 + dir) * g..(node * 3 + dir) * g + g])
    }

    /// |Φ|² per node.
    pub fn norm_sq_field(&self) -> ScalarLattice {
        let values = (0..self.domain.n_nodes())
            .map(|node| self.value(node).iter().map(|v| v * v).sum::<f64>())
            .collect();
        ScalarLattice { domain: self.domain.clone(), values }
    }

    /// |∇_AΦ|² + 2ε⁻²|μ(Φ)|² per node (zero on the one-node boundary
    /// margin, which stays outside every admissible integration ball).
    pub fn energy_density(&self) -> ScalarLattice {
        let d = self.domain.dim();
        let vd = self.value_dim;
        let h = self.domain.spacing;
        let mut values = vec![0.0; self.domain.n_nodes()];
        let inv_eps2 = 1.0 / (self.epsilon * self.epsilon);
        for ix in 1..d - 1 {
            for iy in 1..d - 1 {
                for iz in 1..d - 1 {
                    let node = self.domain.index(ix, iy, iz);
                    let mut acc = 0.0;
                    for dir in 0..3 {
                        let (pn, mn) = self.axis_neighbors(ix, iy, iz, dir);
                        let vp = self.value(pn);
                        let vm = self.value(mn);
                        match (&self.rep, self.conn_dir(node, dir)) {
                            (Some(rep), Some(a)) => {
                                let phi = rep.spinor(self.value(node));
                                let rho_phi = rep.rho_apply(a, &phi).unwrap();
                                for c in 0..vd {
                                    let g = (vp[c] - vm[c]) / (2.0 * h) + rho_phi.coeffs[c];
                                    acc += g * g;
                                }
                            }
                            _ => {
                                for c in 0..vd {
                                    let g = (vp[c] - vm[c]) / (2.0 * h);
                                    acc += g * g;
                                }
                            }
                        }
                    }
                    if let Some(rep) = &self.rep {
                        let mu = rep.moment(&rep.spinor(self.value(node))).unwrap();
                        acc += 2.0 * inv_eps2 * mu.norm().powi(2);
                    }
                    values[node] = acc;
                }
            }
        }
        ScalarLattice { domain: self.domain.clone(), values }
    }

    fn axis_neighbors(&self, ix: usize, iy: usize, iz: usize, dir: usize) -> (usize, usize) {
        match dir {
            0 => (self.domain.index(ix + 1, iy, iz), self.domain.index(ix - 1, iy, iz)),
            1 => (self.domain.index(ix, iy + 1, iz), self.domain.index(ix, iy - 1, iz)),
            _ => (self.domain.index(ix, iy, iz + 1), self.domain.index(ix, iy, iz - 1)),
        }
    }

    /// Discrete curvature two-form at an interior node, as a moment-type
    /// value under e₁ ↔ dx₂∧dx₃ (cyclic): row a holds F_{bc} for (a,b,c)
    /// cyclic.
    pub fn curvature_at(&self, ix: usize, iy: usize, iz: usize) -> Option<MomentValue> {
        let rep = self.rep.as_ref()?;
        let g = rep.dim_g();
        let h = self.domain.spacing;
        let node = self.domain.index(ix, iy, iz);
        self.conn.as_ref()?;
        let a_at = |n: usize, dir: usize| self.conn_dir(n, dir).unwrap().to_vec();
        let mut rows = Vec::with_capacity(3);
        for (a, b, c) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
            let _ = a;
            let (pb, mb) = self.axis_neighbors(ix, iy, iz, b);
            let (pc, mc) = self.axis_neighbors(ix, iy, iz, c);
            // F_{bc} = ∂_b A_c − ∂_c A_b + [A_b, A_c]
            let da: Vec<f64> = (0..g)
                .map(|e| (a_at(pb, c)[e] - a_at(mb, c)[e] - a_at(pc, b)[e] + a_at(mc, b)[e]) / (2.0 * h))
                .collect();
            let br = rep.alg.bracket(&a_at(node, b), &a_at(node, c)).unwrap();
            rows.push((0..g).map(|e| da[e] + br[e]).collect::<Vec<f64>>());
        }
        let coeffs = nalgebra::DMatrix::from_fn(3, g, |r, cc| rows[r][cc]);
        Some(MomentValue { coeffs })
    }
}
