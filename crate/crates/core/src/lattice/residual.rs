//! Discrete equation residuals: the coupled Dirac/curvature system, the
//! flat complexified-flatness system, and the second-order operator defect.
//!
//! All derivatives are central differences; the two-form/one-form duality
//! is e₁ ↔ dx₂∧dx₃ (cyclic) throughout.

use nalgebra::DVector;

use super::{LatticeError, LatticeField, ScalarLattice};

/// Pointwise residual norms of the coupled system D_AΦ = 0,
/// ε²F_{Ad(A)} = μ(Φ) on interior nodes (margin 1; zero on the boundary).
pub fn residual_sw(field: &LatticeField) -> Result<(ScalarLattice, ScalarLattice), LatticeError> {
    let rep = field.rep.as_ref().ok_or(LatticeError::ScalarField)?;
    let dom = &field.domain;
    let d = dom.dim();
    if d < 3 {
        return Err(LatticeError::StencilMargin { need: 1 });
    }
    let h = dom.spacing;
    let vd = field.value_dim;
    let eps2 = field.epsilon * field.epsilon;
    let mut dirac = vec![0.0; dom.n_nodes()];
    let mut curv = vec![0.0; dom.n_nodes()];
    for ix in 1..d - 1 {
        for iy in 1..d - 1 {
            for iz in 1..d - 1 {
                let node = dom.index(ix, iy, iz);
                let phi = rep.spinor(field.value(node));
                // Dirac: Σ γ(e_i)(∂_i + ρ(A_i))Φ
                let mut acc = DVector::zeros(vd);
                for dir in 0..3 {
                    let (pn, mn) = field.axis_neighbors(ix, iy, iz, dir);
                    let vp = field.value(pn);
                    let vm = field.value(mn);
                    let mut dphi = DVector::from_fn(vd, |c, _| (vp[c] - vm[c]) / (2.0 * h));
                    if let Some(a) = field.conn_dir(node, dir) {
                        dphi += rep.rho_apply(a, &phi)?.coeffs;
                    }
                    acc += &rep.gamma[dir] * dphi;
                }
                dirac[node] = acc.norm();
                // curvature: ε²F − μ(Φ)
                let mu = rep.moment(&phi)?;
                let res = match field.curvature_at(ix, iy, iz) {
                    Some(f) => f.scale(eps2).sub(&mu),
                    None => mu.scale(-1.0),
                };
                curv[node] = res.norm();
            }
        }
    }
    Ok((
        ScalarLattice { domain: dom.clone(), values: dirac },
        ScalarLattice { domain: dom.clone(), values: curv },
    ))
}

/// Residual norms of the flat system `d*_A a = 0`, `*d_A a + d_A ξ = 0`,
/// `F_A = ½[a∧a] + *[ξ,a]` for an adjoint-representation field whose spinor
/// encodes (ξ, a₁, a₂, a₃) as the 1, i, j, k components.
pub fn residual_flat_gc(field: &LatticeField) -> Result<[ScalarLattice; 3], LatticeError> {
    let rep = field.rep.as_ref().ok_or(LatticeError::ScalarField)?;
    let g = rep.dim_g();
    if field.value_dim != 4 * g {
        return Err(LatticeError::NotAdjoint);
    }
    let dom = &field.domain;
    let d = dom.dim();
    let h = dom.spacing;
    let alg = &rep.alg;

    // component m of the adjoint spinor at a node as a 𝔤 coefficient vector
    let part = |node: usize, m: usize| -> Vec<f64> {
        let v = field.value(node);
        (0..g).map(|b| v[b * 4 + m]).collect()
    };
    let zero = vec![0.0; g];
    let conn = |node: usize, dir: usize| -> Vec<f64> {
        field.conn_dir(node, dir).map_or_else(|| zero.clone(), |a| a.to_vec())
    };
    let vnorm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let add = |a: &mut Vec<f64>, b: &[f64], s: f64| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += s * y;
        }
    };

    let mut res1 = vec![0.0; dom.n_nodes()];
    let mut res2 = vec![0.0; dom.n_nodes()];
    let mut res3 = vec![0.0; dom.n_nodes()];
    for ix in 1..d - 1 {
        for iy in 1..d - 1 {
            for iz in 1..d - 1 {
                let node = dom.index(ix, iy, iz);
                let xi = part(node, 0);
                // d*_A a = −Σ_i (∂_i a_i + [A_i, a_i])
                let mut div = vec![0.0; g];
                for dir in 0..3 {
                    let (pn, mn) = field.axis_neighbors(ix, iy, iz, dir);
                    let ap = part(pn, dir + 1);
                    let am = part(mn, dir + 1);
                    for b in 0..g {
                        div[b] -= (ap[b] - am[b]) / (2.0 * h);
                    }
                    let br = alg.bracket(&conn(node, dir), &part(node, dir + 1)).unwrap();
                    add(&mut div, &br, -1.0);
                }
                res1[node] = vnorm(&div);

                // (*d_A a)_k + (d_A ξ)_k for (i, j, k) cyclic
                let mut sq2 = 0.0;
                let mut sq3 = 0.0;
                for (i, j, k) in [(0usize, 1usize, 2usize), (1, 2, 0), (2, 0, 1)] {
                    let (pi, mi) = field.axis_neighbors(ix, iy, iz, i);
                    let (pj, mj) = field.axis_neighbors(ix, iy, iz, j);
                    let (pk, mk) = field.axis_neighbors(ix, iy, iz, k);
                    let mut curl = vec![0.0; g];
                    let ajp = part(pi, j + 1);
                    let ajm = part(mi, j + 1);
                    let aip = part(pj, i + 1);
                    let aim = part(mj, i + 1);
                    for b in 0..g {
                        curl[b] = (ajp[b] - ajm[b]) / (2.0 * h) - (aip[b] - aim[b]) / (2.0 * h);
                    }
                    add(&mut curl, &alg.bracket(&conn(node, i), &part(node, j + 1)).unwrap(), 1.0);
                    add(&mut curl, &alg.bracket(&conn(node, j), &part(node, i + 1)).unwrap(), -1.0);
                    // + (d_A ξ)_k
                    let xp = part(pk, 0);
                    let xm = part(mk, 0);
                    let mut eq2 = curl.clone();
                    for b in 0..g {
                        eq2[b] += (xp[b] - xm[b]) / (2.0 * h);
                    }
                    add(&mut eq2, &alg.bracket(&conn(node, k), &xi).unwrap(), 1.0);
                    sq2 += eq2.iter().map(|v| v * v).sum::<f64>();

                    // F_{ij} − [a_i, a_j] − [ξ, a_k]
                    let mut da = vec![0.0; g];
                    let cp = conn(pi, j);
                    let cm = conn(mi, j);
                    let dp = conn(pj, i);
                    let dm = conn(mj, i);
                    for b in 0..g {
                        da[b] = (cp[b] - cm[b]) / (2.0 * h) - (dp[b] - dm[b]) / (2.0 * h);
                    }
                    add(&mut da, &alg.bracket(&conn(node, i), &conn(node, j)).unwrap(), 1.0);
                    add(&mut da, &alg.bracket(&part(node, i + 1), &part(node, j + 1)).unwrap(), -1.0);
                    add(&mut da, &alg.bracket(&xi, &part(node, k + 1)).unwrap(), -1.0);
                    sq3 += da.iter().map(|v| v * v).sum::<f64>();
                }
                res2[node] = sq2.sqrt();
                res3[node] = sq3.sqrt();
            }
        }
    }
    Ok([
        ScalarLattice { domain: dom.clone(), values: res1 },
        ScalarLattice { domain: dom.clone(), values: res2 },
        ScalarLattice { domain: dom.clone(), values: res3 },
    ])
}

/// Max-norm over margin-2 interior nodes of D²Φ − ∇*∇Φ for a trivial
/// connection, with D the central-difference Dirac operator applied twice
/// and ∇*∇ the compact second-difference Laplacian. Both are exact on
/// polynomials of degree ≤ 2, so the defect vanishes there and decays at
/// second order for smooth fields.
pub fn weitzenbock_defect(field: &LatticeField) -> Result<f64, LatticeError> {
    let rep = field.rep.as_ref().ok_or(LatticeError::ScalarField)?;
    let dom = &field.domain;
    let d = dom.dim();
    if d < 5 {
        return Err(LatticeError::StencilMargin { need: 2 });
    }
    let h = dom.spacing;
    let vd = field.value_dim;

    // first pass: DΦ on margin-1 nodes
    let mut dphi = vec![0.0; dom.n_nodes() * vd];
    for ix in 1..d - 1 {
        for iy in 1..d - 1 {
            for iz in 1..d - 1 {
                let node = dom.index(ix, iy, iz);
                let mut acc = DVector::zeros(vd);
                for dir in 0..3 {
                    let (pn, mn) = field.axis_neighbors(ix, iy, iz, dir);
                    let vp = field.value(pn);
                    let vm = field.value(mn);
                    let dv = DVector::from_fn(vd, |c, _| (vp[c] - vm[c]) / (2.0 * h));
                    acc += &rep.gamma[dir] * dv;
                }
                dphi[node * vd..(node + 1) * vd].copy_from_slice(acc.as_slice());
            }
        }
    }

    let mut worst: f64 = 0.0;
    for ix in 2..d - 2 {
        for iy in 2..d - 2 {
            for iz in 2..d - 2 {
                let node = dom.index(ix, iy, iz);
                let mut acc = DVector::zeros(vd);
                for dir in 0..3 {
                    let (pn, mn) = field.axis_neighbors(ix, iy, iz, dir);
                    let dv = DVector::from_fn(vd, |c, _| (dphi[pn * vd + c] - dphi[mn * vd + c]) / (2.0 * h));
                    acc += &rep.gamma[dir] * dv;
                }
                // ∇*∇ = −Δ with the compact stencil
                let center = field.value(node);
                let mut lap = DVector::zeros(vd);
                for dir in 0..3 {
                    let (pn, mn) = field.axis_neighbors(ix, iy, iz, dir);
                    let vp = field.value(pn);
                    let vm = field.value(mn);
                    for c in 0..vd {
                        lap[c] += (vp[c] - 2.0 * center[c] + vm[c]) / (h * h);
                    }
                }
                let defect = (acc + lap).norm();
                worst = worst.max(defect);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Domain;
    use crate::rep::QuatRep;

    #[test]
    fn constant_cone_section_solves_the_system() {
        // A = 0, Φ ≡ τ₀⊗1 in the su(2) adjoint representation: rank one,
        // so μ(Φ) = 0, and constants kill all derivatives.
        let rep = QuatRep::adjoint_su2();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        let mut v = vec![0.0; 12];
        v[0] = 1.0;
        let f = LatticeField::from_fn(dom, rep, 0.5, move |_| v.clone(), None);
        let (dir, cur) = residual_sw(&f).unwrap();
        assert!(dir.max_abs() < 1e-13);
        assert!(cur.max_abs() < 1e-13);
    }

    #[test]
    fn linear_field_dirac_residual_is_gamma_of_slope() {
        // Φ(x) = x₁·φ with A = 0: DΦ = γ(e₁)φ pointwise.
        let rep = QuatRep::classical();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        let f = LatticeField::from_fn(dom, rep, 1.0, |p| vec![p[0], 0.0, 0.0, 0.0], None);
        let (dir, _) = residual_sw(&f).unwrap();
        let node = dir.domain.index(5, 5, 5);
        assert!((dir.values[node] - 1.0).abs() < 1e-12, "|γ(e₁)φ| = |φ| = 1");
    }

    #[test]
    fn constant_commuting_connection_is_flat() {
        // Φ = 0, A_i all proportional to the same generator: F = [A_i,A_j] = 0.
        let rep = QuatRep::adjoint_su2();
        let g = rep.dim_g();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        let conn = move |_: [f64; 3]| {
            let mut a = vec![0.0; 3 * g];
            for dir in 0..3 {
                a[dir * g] = 0.7; // τ₀ in every direction
            }
            a
        };
        let f = LatticeField::from_fn(dom, rep, 1.0, |_| vec![0.0; 12], Some(&conn));
        let (_, cur) = residual_sw(&f).unwrap();
        assert!(cur.max_abs() < 1e-13);
    }

    #[test]
    fn flat_gc_residuals_vanish_for_commuting_data() {
        let rep = QuatRep::adjoint_su2();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        // a = τ₀ ⊗ (dx₁ + dx₂), ξ = 0, A = 0: every bracket vanishes and
        // the forms are constant.
        let f = LatticeField::from_fn(dom.clone(), rep.clone(), 1.0, |_| {
            let mut v = vec![0.0; 12];
            v[1] = 1.0; // a₁ = τ₀
            v[2] = 1.0; // a₂ = τ₀
            v
        }, None);
        let [r1, r2, r3] = residual_flat_gc(&f).unwrap();
        assert!(r1.max_abs() < 1e-13);
        assert!(r2.max_abs() < 1e-13);
        assert!(r3.max_abs() < 1e-13);

        // a = 0, ξ constant: residuals vanish as well
        let f = LatticeField::from_fn(dom, rep, 1.0, |_| {
            let mut v = vec![0.0; 12];
            v[4] = 0.3; // ξ = 0.3 τ₁
            v
        }, None);
        let [r1, r2, r3] = residual_flat_gc(&f).unwrap();
        assert!(r1.max_abs() < 1e-13 && r2.max_abs() < 1e-13 && r3.max_abs() < 1e-13);
    }

    #[test]
    fn flat_gc_random_smooth_data_has_order_one_residual() {
        let rep = QuatRep::adjoint_su2();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        let f = LatticeField::from_fn(dom, rep, 1.0, |p| {
            let mut v = vec![0.0; 12];
            v[0] = p[0].sin();
            v[1] = (p[1] * 1.3).cos();
            v[6] = p[2] * p[0];
            v[9] = 0.5 * p[1];
            v
        }, None);
        let [r1, r2, r3] = residual_flat_gc(&f).unwrap();
        let total = r1.max_abs() + r2.max_abs() + r3.max_abs();
        assert!(total > 0.1 && total < 50.0, "sanity: O(1) residual, got {total}");
    }

    #[test]
    fn weitzenbock_exact_on_quadratics() {
        let rep = QuatRep::classical();
        let dom = Domain::new([0.0; 3], 1.0, 0.1).unwrap();
        let f = LatticeField::from_fn(dom, rep, 1.0, |p| {
            vec![p[0] * p[0] - 2.0 * p[1] * p[2], p[0] + 1.0, p[2] * p[2], 0.5 * p[0] * p[1]]
        }, None);
        assert!(weitzenbock_defect(&f).unwrap() < 1e-10);
    }

    #[test]
    fn weitzenbock_second_order_on_sine() {
        let rep = QuatRep::classical();
        let mut defects = Vec::new();
        for half in [16usize, 32, 64] {
            let h = 1.0 / half as f64;
            let dom = Domain::new([0.0; 3], 1.0, h).unwrap();
            let f = LatticeField::from_fn(dom, rep.clone(), 1.0, |p| vec![p[0].sin(), 0.0, 0.0, 0.0], None);
            defects.push(weitzenbock_defect(&f).unwrap());
        }
        let s1 = (defects[0] / defects[1]).log2();
        let s2 = (defects[1] / defects[2]).log2();
        assert!(s1 > 1.9 && s2 > 1.9, "orders {s1:.3}, {s2:.3}");
    }

    #[test]
    fn zero_field_has_zero_defect() {
        let rep = QuatRep::classical();
        let dom = Domain::new([0.0; 3], 1.0, 0.125).unwrap();
        let f = LatticeField::from_fn(dom, rep, 1.0, |_| vec![0.0; 4], None);
        assert_eq!(weitzenbock_defect(&f).unwrap(), 0.0);
    }
}
