//! Quaternionic representations and their hyperkähler moment maps.
//!
//! A `QuatRep` is a real inner-product space S with isometric operators
//! I, J, K satisfying the quaternion relations, together with a gauge
//! algebra 𝔤 acting by skew intertwiners ρ(ξ_b). From these it derives
//!
//!   γ(v)φ        Clifford action of v ∈ Im H,
//!   𝛾(v⊗ξ)φ      = γ(v)ρ(ξ)φ,
//!   μ(φ)         the moment map, μ_{a,b}(φ) = ½⟨γ(e_a)ρ(ξ_b)φ, φ⟩,
//!   μ(φ,ψ)       its symmetric bilinear polarization,
//!   Γ_φ ζ        = 𝛾(ζ)φ.
//!
//! Moment values live in Im H ⊗ 𝔤, stored as a 3 × dim 𝔤 coefficient
//! array over the orthonormal 𝔤 basis; the adjoint contract is
//! ⟨Γ_φ ζ, ψ⟩ = 2⟨ζ, μ(φ,ψ)⟩, so Γ_φ is the adjoint of d_φμ.

use nalgebra::{Complex, DMatrix, DVector};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::lie::{skew_inner, su_basis_matrices, uk_basis_matrices, LieAlg};
use crate::quat::{ImQuat, Quat};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("spinor belongs to representation {got:?}, expected {expected:?}")]
    RepMismatch { expected: RepTag, got: RepTag },
    #[error("coefficient length {got} does not match dim S = {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("torus family is not orthonormal (gram defect {defect:.3e})")]
    TorusNotOrthonormal { defect: f64 },
    #[error("torus vector has length {got}, algebra dimension is {expected}")]
    TorusDimension { expected: usize, got: usize },
}

/// Identity of a built-in representation; spinors carry it so that
/// cross-representation misuse is caught at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RepTag {
    Classical,
    Adjoint(u8),
    UkSpinor(u8),
    MultiSpinor(u8),
    Adhm { r: u8, k: u8 },
}

/// An element of S in coefficients over the orthonormal basis of its
/// representation.
#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    pub rep: RepTag,
    pub coeffs: DVector<f64>,
}

impl Spinor {
    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn dot(&self, other: &Spinor) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn scale(&self, t: f64) -> Spinor {
        Spinor { rep: self.rep, coeffs: &self.coeffs * t }
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        Spinor { rep: self.rep, coeffs: &self.coeffs + &other.coeffs }
    }
}

/// An element of Im H ⊗ 𝔤: rows indexed by (i, j, k), columns by the
/// orthonormal 𝔤 basis. Also used for curvature values and 2-form tests.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub coeffs: DMatrix<f64>,
}

impl MomentValue {
    pub fn zeros(dim_g: usize) -> Self {
        MomentValue { coeffs: DMatrix::zeros(3, dim_g) }
    }

    pub fn dim_g(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn dot(&self, other: &MomentValue) -> f64 {
        self.coeffs.dot(&other.coeffs)
    }

    pub fn scale(&self, t: f64) -> MomentValue {
        MomentValue { coeffs: &self.coeffs * t }
    }

    pub fn add(&self, other: &MomentValue) -> MomentValue {
        MomentValue { coeffs: &self.coeffs + &other.coeffs }
    }

    pub fn sub(&self, other: &MomentValue) -> MomentValue {
        MomentValue { coeffs: &self.coeffs - &other.coeffs }
    }

    /// Flattened row-major coefficients (a·dim𝔤 + b).
    pub fn flat(&self) -> Vec<f64> {
        let g = self.dim_g();
        let mut out = Vec::with_capacity(3 * g);
        for a in 0..3 {
            for b in 0..g {
                out.push(self.coeffs[(a, b)]);
            }
        }
        out
    }

    pub fn from_flat(dim_g: usize, flat: &[f64]) -> Self {
        assert_eq!(flat.len(), 3 * dim_g);
        MomentValue { coeffs: DMatrix::from_fn(3, dim_g, |a, b| flat[a * dim_g + b]) }
    }

    /// Rotates the Im H index by a 3×3 rotation matrix.
    pub fn rotate_im(&self, rot: &DMatrix<f64>) -> MomentValue {
        MomentValue { coeffs: rot * &self.coeffs }
    }
}

/// 4×4 matrix of left multiplication by q on H in (w, x, y, z) coordinates.
pub fn left_mult_matrix(q: Quat) -> DMatrix<f64> {
    let cols = [q * Quat::ONE, q * Quat::I, q * Quat::J, q * Quat::K];
    DMatrix::from_fn(4, 4, |r, c| cols[c].to_array()[r])
}

/// 4×4 matrix of right multiplication by q on H.
pub fn right_mult_matrix(q: Quat) -> DMatrix<f64> {
    let cols = [Quat::ONE * q, Quat::I * q, Quat::J * q, Quat::K * q];
    DMatrix::from_fn(4, 4, |r, c| cols[c].to_array()[r])
}

/// A quaternionic Hermitian module with a gauge-algebra action.
#[derive(Debug, Clone)]
pub struct QuatRep {
    pub tag: RepTag,
    pub name: String,
    pub dim_s: usize,
    /// Clifford generators [I, J, K].
    pub gamma: [DMatrix<f64>; 3],
    /// Gauge algebra 𝔤; moment values have one column per basis element.
    pub alg: LieAlg,
    /// ρ(ξ_b) for the orthonormal 𝔤 basis.
    pub rho: Vec<DMatrix<f64>>,
    /// Extra symmetry generators excluded from the moment map columns.
    pub flavor: Vec<DMatrix<f64>>,
}

fn block_diag(blocks: usize, cell: &DMatrix<f64>) -> DMatrix<f64> {
    let n = cell.nrows();
    let mut m = DMatrix::zeros(blocks * n, blocks * n);
    for s in 0..blocks {
        m.view_mut((s * n, s * n), (n, n)).copy_from(cell);
    }
    m
}

/// Real 4k×4k matrix of the right complex action (ρ(g)Ψ)_n = Σ_m Ψ_m g_{nm}
/// on H^k, complex scalars acting by right multiplication by i.
fn right_complex_action(g: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let k = g.nrows();
    let r_i = right_mult_matrix(Quat::I);
    let id = DMatrix::<f64>::identity(4, 4);
    let mut m = DMatrix::zeros(4 * k, 4 * k);
    for n in 0..k {
        for c in 0..k {
            let e = g[(n, c)];
            if e.re == 0.0 && e.im == 0.0 {
                continue;
            }
            let cell = &id * e.re + &r_i * e.im;
            m.view_mut((4 * n, 4 * c), (4, 4)).copy_from(&cell);
        }
    }
    m
}

impl QuatRep {
    /// S = H with U(1) acting by right multiplication by i and γ by
    /// left multiplication.
    pub fn classical() -> Self {
        QuatRep {
            tag: RepTag::Classical,
            name: "classical".to_string(),
            dim_s: 4,
            gamma: [left_mult_matrix(Quat::I), left_mult_matrix(Quat::J), left_mult_matrix(Quat::K)],
            alg: LieAlg::u1(),
            rho: vec![right_mult_matrix(Quat::I)],
            flavor: Vec::new(),
        }
    }

    /// S = 𝔤 ⊗ H with ρ(ξ) = ad_ξ ⊗ id and I, J, K acting by left
    /// multiplication on the H factor. Coefficient layout: (b, m) ↦ 4b + m.
    pub fn adjoint(alg: &LieAlg, k_label: u8) -> Self {
        let g = alg.dim;
        let id_g = DMatrix::<f64>::identity(g, g);
        let gamma = [Quat::I, Quat::J, Quat::K].map(|q| kron(&id_g, &left_mult_matrix(q)));
        let rho = (0..g).map(|b| kron(&alg.ad_matrix(b), &DMatrix::identity(4, 4))).collect();
        QuatRep {
            tag: RepTag::Adjoint(k_label),
            name: format!("su{k_label}-adjoint"),
            dim_s: 4 * g,
            gamma,
            alg: alg.clone(),
            rho,
            flavor: Vec::new(),
        }
    }

    pub fn adjoint_su2() -> Self {
        Self::adjoint(&LieAlg::su(2).unwrap(), 2)
    }

    pub fn adjoint_su3() -> Self {
        Self::adjoint(&LieAlg::su(3).unwrap(), 3)
    }

    /// S = H ⊗_C C^k realized as H^k, U(k) acting C-linearly across slots.
    pub fn uk_spinors(k: usize) -> Self {
        let alg = LieAlg::uk(k).unwrap();
        let mats = uk_basis_matrices(k);
        let gamma = [Quat::I, Quat::J, Quat::K].map(|q| block_diag(k, &left_mult_matrix(q)));
        let rho = mats.iter().map(right_complex_action).collect();
        QuatRep {
            tag: RepTag::UkSpinor(k as u8),
            name: format!("uk-{k}"),
            dim_s: 4 * k,
            gamma,
            alg,
            rho,
            flavor: Vec::new(),
        }
    }

    /// S = H^n with U(1) acting diagonally by right multiplication by i.
    pub fn multispinor(n: usize) -> Self {
        let gamma = [Quat::I, Quat::J, Quat::K].map(|q| block_diag(n, &left_mult_matrix(q)));
        QuatRep {
            tag: RepTag::MultiSpinor(n as u8),
            name: format!("multispinor-{n}"),
            dim_s: 4 * n,
            gamma,
            alg: LieAlg::u1(),
            rho: vec![block_diag(n, &right_mult_matrix(Quat::I))],
            flavor: Vec::new(),
        }
    }

    /// S = Hom_C(C^r, H ⊗_C C^k) ⊕ u(k) ⊗ H with G = U(k).
    ///
    /// Layout: r·k "Hom" slots of H first (slot s·k + m for flavor column s
    /// and color m), then k² slots t_A ⊗ H where t_A runs over the su(k)
    /// part of u(k) first and the center i·Id/√k last. U(k) acts on the Hom
    /// part by the right complex action and on u(k) ⊗ H by ad ⊗ id; the
    /// center slot is therefore inert and the moment map cannot see it.
    /// For r ≥ 2 the su(r) flavor generators act on the flavor columns and
    /// are stored outside the moment columns.
    pub fn adhm(r: usize, k: usize) -> Self {
        let alg = LieAlg::uk(k).unwrap();
        let gauge_mats = uk_basis_matrices(k);
        let g = alg.dim;

        // Orthonormal basis of u(k) under −tr: su(k) part scaled to unit
        // norm, center last.
        let mut part_basis: Vec<DMatrix<Complex<f64>>> =
            su_basis_matrices(k).iter().map(|m| m * Complex::new(0.5f64.sqrt(), 0.0)).collect();
        let mut center = DMatrix::<Complex<f64>>::identity(k, k);
        center *= Complex::new(0.0, 1.0 / (k as f64).sqrt());
        part_basis.push(center);
        let n_part = part_basis.len();

        let hom_slots = r * k;
        let dim_s = 4 * hom_slots + 4 * n_part;

        let gamma = [Quat::I, Quat::J, Quat::K]
            .map(|q| block_diag(hom_slots + n_part, &left_mult_matrix(q)));

        let mut rho = Vec::with_capacity(g);
        for b in 0..g {
            let mut m = DMatrix::zeros(dim_s, dim_s);
            let hom_action = right_complex_action(&gauge_mats[b]);
            for s in 0..r {
                m.view_mut((4 * s * k, 4 * s * k), (4 * k, 4 * k)).copy_from(&hom_action);
            }
            // ad-action on the u(k) ⊗ H summand in the t_A basis.
            for a_idx in 0..n_part {
                let br = &gauge_mats[b] * &part_basis[a_idx] - &part_basis[a_idx] * &gauge_mats[b];
                for e_idx in 0..n_part {
                    let c = skew_inner(&br, &part_basis[e_idx], 1.0);
                    if c.abs() < 1e-14 {
                        continue;
                    }
                    let base = 4 * (hom_slots + e_idx);
                    let src = 4 * (hom_slots + a_idx);
                    for d in 0..4 {
                        m[(base + d, src + d)] += c;
                    }
                }
            }
            rho.push(m);
        }

        // su(r) flavor: C-linear mixing of the flavor columns, inert on the
        // u(k) ⊗ H summand. The Sp(1) flavor factor twists the Im H index
        // and has no slot-wise matrix here.
        let mut flavor = Vec::new();
        if r >= 2 {
            for f in su_basis_matrices(r) {
                let mut m = DMatrix::zeros(dim_s, dim_s);
                for n in 0..r {
                    for c in 0..r {
                        let e = f[(n, c)];
                        if e.re == 0.0 && e.im == 0.0 {
                            continue;
                        }
                        let cell = DMatrix::<f64>::identity(4, 4) * e.re
                            + right_mult_matrix(Quat::I) * e.im;
                        for col in 0..k {
                            m.view_mut((4 * (n * k + col), 4 * (c * k + col)), (4, 4))
                                .copy_from(&cell);
                        }
                    }
                }
                flavor.push(m);
            }
        }

        QuatRep {
            tag: RepTag::Adhm { r: r as u8, k: k as u8 },
            name: if (r, k) == (1, 2) { "adhm12".to_string() } else { format!("adhm{r}{k}") },
            dim_s,
            gamma,
            alg,
            rho,
            flavor,
        }
    }

    pub fn adhm12() -> Self {
        Self::adhm(1, 2)
    }

    pub fn dim_g(&self) -> usize {
        self.alg.dim
    }

    pub fn check(&self, phi: &Spinor) -> Result<(), RepError> {
        if phi.rep != self.tag {
            return Err(RepError::RepMismatch { expected: self.tag, got: phi.rep });
        }
        if phi.coeffs.len() != self.dim_s {
            return Err(RepError::DimensionMismatch { expected: self.dim_s, got: phi.coeffs.len() });
        }
        Ok(())
    }

    pub fn zero_spinor(&self) -> Spinor {
        Spinor { rep: self.tag, coeffs: DVector::zeros(self.dim_s) }
    }

    pub fn spinor(&self, coeffs: &[f64]) -> Spinor {
        assert_eq!(coeffs.len(), self.dim_s);
        Spinor { rep: self.tag, coeffs: DVector::from_column_slice(coeffs) }
    }

    pub fn random_unit_spinor<R: Rng>(&self, rng: &mut R) -> Spinor {
        loop {
            let v = DVector::from_fn(self.dim_s, |_, _| standard_normal(rng));
            let n = v.norm();
            if n > 1e-6 {
                return Spinor { rep: self.tag, coeffs: v / n };
            }
        }
    }

    /// γ(v)φ.
    pub fn gamma_im(&self, v: ImQuat, phi: &Spinor) -> Result<Spinor, RepError> {
        self.check(phi)?;
        let mut out = &self.gamma[0] * &phi.coeffs * v.x;
        out += &self.gamma[1] * &phi.coeffs * v.y;
        out += &self.gamma[2] * &phi.coeffs * v.z;
        Ok(Spinor { rep: self.tag, coeffs: out })
    }

    /// μ(φ) with μ_{a,b}(φ) = ½⟨γ(e_a)ρ(ξ_b)φ, φ⟩.
    pub fn moment(&self, phi: &Spinor) -> Result<MomentValue, RepError> {
        self.check(phi)?;
        let g = self.dim_g();
        let mut coeffs = DMatrix::zeros(3, g);
        for b in 0..g {
            let rb = &self.rho[b] * &phi.coeffs;
            for a in 0..3 {
                coeffs[(a, b)] = 0.5 * (&self.gamma[a] * &rb).dot(&phi.coeffs);
            }
        }
        Ok(MomentValue { coeffs })
    }

    /// Symmetric bilinear polarization; μ(φ,φ) = μ(φ) and d_φμ(ψ) = 2μ(φ,ψ).
    pub fn moment_polarized(&self, phi: &Spinor, psi: &Spinor) -> Result<MomentValue, RepError> {
        self.check(phi)?;
        self.check(psi)?;
        let g = self.dim_g();
        let mut coeffs = DMatrix::zeros(3, g);
        for b in 0..g {
            let r_phi = &self.rho[b] * &phi.coeffs;
            let r_psi = &self.rho[b] * &psi.coeffs;
            for a in 0..3 {
                let t = (&self.gamma[a] * &r_phi).dot(&psi.coeffs)
                    + (&self.gamma[a] * &r_psi).dot(&phi.coeffs);
                coeffs[(a, b)] = 0.25 * t;
            }
        }
        Ok(MomentValue { coeffs })
    }

    /// 𝛾(ζ)φ = Σ_{a,b} ζ_{a,b} γ(e_a)ρ(ξ_b)φ.
    pub fn gamma_alg(&self, zeta: &MomentValue, phi: &Spinor) -> Result<Spinor, RepError> {
        self.check(phi)?;
        let g = self.dim_g();
        assert_eq!(zeta.dim_g(), g, "moment value has wrong 𝔤 dimension");
        let mut acc = [DVector::zeros(self.dim_s), DVector::zeros(self.dim_s), DVector::zeros(self.dim_s)];
        for b in 0..g {
            let col = zeta.coeffs.column(b);
            if col[0] == 0.0 && col[1] == 0.0 && col[2] == 0.0 {
                continue;
            }
            let rb = &self.rho[b] * &phi.coeffs;
            for a in 0..3 {
                if col[a] != 0.0 {
                    acc[a].axpy(col[a], &rb, 1.0);
                }
            }
        }
        let mut out = &self.gamma[0] * &acc[0];
        out += &self.gamma[1] * &acc[1];
        out += &self.gamma[2] * &acc[2];
        Ok(Spinor { rep: self.tag, coeffs: out })
    }

    /// Γ_φζ = 𝛾(ζ)φ, linear in ζ.
    pub fn gamma_phi(&self, phi: &Spinor, zeta: &MomentValue) -> Result<Spinor, RepError> {
        self.gamma_alg(zeta, phi)
    }

    /// Γ_φ as a dim S × 3·dim 𝔤 matrix; column a·dim𝔤 + b is γ(e_a)ρ(ξ_b)φ.
    pub fn gamma_phi_matrix(&self, phi: &Spinor) -> Result<DMatrix<f64>, RepError> {
        self.check(phi)?;
        let g = self.dim_g();
        let mut m = DMatrix::zeros(self.dim_s, 3 * g);
        for b in 0..g {
            let rb = &self.rho[b] * &phi.coeffs;
            for a in 0..3 {
                m.set_column(a * g + b, &(&self.gamma[a] * &rb));
            }
        }
        Ok(m)
    }

    /// 𝛾(ζ) as a dense operator on S.
    pub fn gamma_alg_matrix(&self, zeta: &MomentValue) -> DMatrix<f64> {
        let g = self.dim_g();
        let mut m = DMatrix::zeros(self.dim_s, self.dim_s);
        for b in 0..g {
            for a in 0..3 {
                let c = zeta.coeffs[(a, b)];
                if c != 0.0 {
                    m += (&self.gamma[a] * &self.rho[b]) * c;
                }
            }
        }
        m
    }

    /// Left multiplication by a quaternion (w + xI + yJ + zK).
    pub fn left_mul(&self, q: Quat, phi: &Spinor) -> Result<Spinor, RepError> {
        self.check(phi)?;
        let mut out = phi.coeffs.clone() * q.w;
        out += &self.gamma[0] * &phi.coeffs * q.x;
        out += &self.gamma[1] * &phi.coeffs * q.y;
        out += &self.gamma[2] * &phi.coeffs * q.z;
        Ok(Spinor { rep: self.tag, coeffs: out })
    }

    /// ρ applied to an algebra coefficient vector.
    pub fn rho_apply(&self, xi: &[f64], phi: &Spinor) -> Result<Spinor, RepError> {
        self.check(phi)?;
        assert_eq!(xi.len(), self.dim_g());
        let mut out = DVector::zeros(self.dim_s);
        for (b, &c) in xi.iter().enumerate() {
            if c != 0.0 {
                out += &self.rho[b] * &phi.coeffs * c;
            }
        }
        Ok(Spinor { rep: self.tag, coeffs: out })
    }

    /// exp(t·ρ(ξ)) as a dense (orthogonal) operator.
    pub fn exp_rho(&self, xi: &[f64], t: f64) -> DMatrix<f64> {
        assert_eq!(xi.len(), self.dim_g());
        let mut a = DMatrix::zeros(self.dim_s, self.dim_s);
        for (b, &c) in xi.iter().enumerate() {
            if c != 0.0 {
                a += &self.rho[b] * (c * t);
            }
        }
        expm(&a)
    }

    pub fn describe(&self) -> RepDescriptor {
        RepDescriptor {
            name: self.name.clone(),
            dim_s: self.dim_s,
            dim_g: self.dim_g(),
            lie_algebra: self.alg.name.clone(),
            flavor_generators: self.flavor.len(),
            gamma: self.gamma.iter().map(matrix_rows).collect(),
            rho: self.rho.iter().map(matrix_rows).collect(),
        }
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect()).collect()
}

/// Serializable descriptor for the `describe` subcommand.
#[derive(Debug, Clone, Serialize)]
pub struct RepDescriptor {
    pub name: String,
    pub dim_s: usize,
    pub dim_g: usize,
    pub lie_algebra: String,
    pub flavor_generators: usize,
    pub gamma: Vec<Vec<Vec<f64>>>,
    pub rho: Vec<Vec<Vec<f64>>>,
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    let mut out = DMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            let v = a[(i, j)];
            if v != 0.0 {
                out.view_mut((i * br, j * bc), (br, bc)).copy_from(&(b * v));
            }
        }
    }
    out
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn expm(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let norm = a.norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a / 2f64.powi(s);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = DMatrix::<f64>::identity(n, n);
    for k in 1..=24 {
        term = &term * &b / k as f64;
        sum += &term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
    }
    let mut r = sum;
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller; two uniforms per draw keeps the stream layout simple.
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Orthogonal projection of the 𝔤 index onto the span of an orthonormal
/// family spanning (part of) a maximal torus.
pub fn pi_torus(rep: &QuatRep, torus: &[Vec<f64>], m: &MomentValue) -> Result<MomentValue, RepError> {
    let g = rep.dim_g();
    for t in torus {
        if t.len() != g {
            return Err(RepError::TorusDimension { expected: g, got: t.len() });
        }
    }
    let mut defect: f64 = 0.0;
    for (i, ti) in torus.iter().enumerate() {
        for (j, tj) in torus.iter().enumerate() {
            let dot: f64 = ti.iter().zip(tj).map(|(p, q)| p * q).sum();
            let want = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((dot - want).abs());
        }
    }
    if defect > 1e-10 {
        return Err(RepError::TorusNotOrthonormal { defect });
    }
    let mut out = DMatrix::zeros(3, g);
    for a in 0..3 {
        for t in torus {
            let c: f64 = (0..g).map(|b| m.coeffs[(a, b)] * t[b]).sum();
            for b in 0..g {
                out[(a, b)] += c * t[b];
            }
        }
    }
    Ok(MomentValue { coeffs: out })
}

/// Moment map of the adjoint representation evaluated through the bracket
/// formula `μ(𝛏) = ½[𝛏,𝛏]`: an implementation independent of `moment`.
///
/// Row i is `[ξ₂,ξ₃] + [ξ₀,ξ₁]`, row j is `[ξ₃,ξ₁] + [ξ₀,ξ₂]`, row k is
/// `[ξ₁,ξ₂] + [ξ₀,ξ₃]`, for 𝛏 = ξ₀⊗1 + ξ₁⊗i + ξ₂⊗j + ξ₃⊗k.
pub fn adjoint_mu_explicit(alg: &LieAlg, xi: &Spinor) -> MomentValue {
    let g = alg.dim;
    assert_eq!(xi.coeffs.len(), 4 * g, "spinor is not an adjoint-representation element");
    let comp = |m: usize| -> Vec<f64> { (0..g).map(|b| xi.coeffs[b * 4 + m]).collect() };
    let x0 = comp(0);
    let x1 = comp(1);
    let x2 = comp(2);
    let x3 = comp(3);
    let pair = |p: &[f64], q: &[f64], r: &[f64], s: &[f64]| -> Vec<f64> {
        let mut v = alg.bracket(p, q).unwrap();
        let w = alg.bracket(r, s).unwrap();
        for (vi, wi) in v.iter_mut().zip(w) {
            *vi += wi;
        }
        v
    };
    let rows = [pair(&x2, &x3, &x0, &x1), pair(&x3, &x1, &x0, &x2), pair(&x1, &x2, &x0, &x3)];
    MomentValue { coeffs: DMatrix::from_fn(3, g, |a, b| rows[a][b]) }
}

/// The classical spinor q = z + jw as the Hermitian endomorphism
/// q⟨q,·⟩_C − ½|q|²_C id of C², returned as `[[m00, m01], [m10, m11]]`
/// complex entries (row major, each entry (re, im)).
pub fn classical_matrix_form(q: &Spinor) -> [[(f64, f64); 2]; 2] {
    assert_eq!(q.rep, RepTag::Classical);
    let (a, b, c, d) = (q.coeffs[0], q.coeffs[1], q.coeffs[2], q.coeffs[3]);
    // q = z + jw with z = a + bi, w = c − di.
    let (zr, zi) = (a, b);
    let (wr, wi) = (c, -d);
    let z2 = zr * zr + zi * zi;
    let w2 = wr * wr + wi * wi;
    let zwc = (zr * wr + zi * wi, zi * wr - zr * wi); // z·conj(w)
    let zcw = (zwc.0, -zwc.1);
    [
        [(0.5 * (z2 - w2), 0.0), (zwc.0, zwc.1)],
        [(zcw.0, zcw.1), (0.5 * (w2 - z2), 0.0)],
    ]
}

/// Complex 2×2 matrix of a real operator on H that commutes with right
/// multiplication by i, in the basis {1, j} of H = C ⊕ jC.
pub fn complexify_classical_operator(op: &DMatrix<f64>) -> [[(f64, f64); 2]; 2] {
    assert_eq!(op.shape(), (4, 4));
    let col = |v: DVector<f64>| -> ((f64, f64), (f64, f64)) {
        // p = a + bi + cj + dk = z + jw with z = a + bi, w = c − di.
        ((v[0], v[1]), (v[2], -v[3]))
    };
    let c0 = col(op * DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0]));
    let c1 = col(op * DVector::from_column_slice(&[0.0, 0.0, 1.0, 0.0]));
    [[c0.0, c1.0], [c0.1, c1.1]]
}
