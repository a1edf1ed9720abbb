//! Projected gradient ascent with a numerically differentiated objective.
//!
//! The objectives certified here are smooth away from measure-zero strata,
//! so a plain ascent with central-difference gradients, a feasibility
//! projection after every trial step, and step halving is enough; the
//! multistart spread is the convergence audit.

use nalgebra::DVector;

#[derive(Debug, Clone, Copy)]
pub struct AscentConfig {
    pub max_iters: usize,
    pub init_step: f64,
    pub min_step: f64,
    pub fd_step: f64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig { max_iters: 200, init_step: 0.05, min_step: 1e-10, fd_step: 1e-6 }
    }
}

/// Maximizes `f` over the feasible set cut out by `project`, which must map
/// any nearby point back into the set (returning `None` when it cannot).
pub fn projected_ascent<F, P>(f: F, project: P, x0: &DVector<f64>, cfg: AscentConfig) -> (DVector<f64>, f64)
where
    F: Fn(&DVector<f64>) -> f64,
    P: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let mut x = match project(x0) {
        Some(p) => p,
        None => return (x0.clone(), f(x0)),
    };
    let mut fx = f(&x);
    let mut step = cfg.init_step;
    let n = x.len();
    for _ in 0..cfg.max_iters {
        // central-difference gradient
        let mut grad = DVector::zeros(n);
        for i in 0..n {
            let mut xp = x.clone();
            xp[i] += cfg.fd_step;
            let mut xm = x.clone();
            xm[i] -= cfg.fd_step;
            grad[i] = (f(&xp) - f(&xm)) / (2.0 * cfg.fd_step);
        }
        let gn = grad.norm();
        if gn < 1e-14 {
            break;
        }
        grad /= gn;

        let mut advanced = false;
        while step >= cfg.min_step {
            let trial = &x + &grad * step;
            if let Some(p) = project(&trial) {
                let fp = f(&p);
                if fp > fx + 1e-15 {
                    x = p;
                    fx = fp;
                    step = (step * 1.6).min(0.5);
                    advanced = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !advanced {
            break;
        }
    }
    (x, fx)
}

/// Relative spread (max − min)/max of a set of multistart outcomes.
pub fn spread(values: &[f64]) -> f64 {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if max.abs() < 1e-300 {
        0.0
    } else {
        (max - min) / max.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximizes_quadratic_on_sphere() {
        // max of x·diag(1,2,3)·x on the unit sphere is 3
        let f = |x: &DVector<f64>| x[0] * x[0] + 2.0 * x[1] * x[1] + 3.0 * x[2] * x[2];
        let project = |x: &DVector<f64>| {
            let n = x.norm();
            if n < 1e-12 {
                None
            } else {
                Some(x / n)
            }
        };
        let x0 = DVector::from_column_slice(&[0.8, 0.5, 0.33]);
        let (_, v) = projected_ascent(f, project, &x0, AscentConfig::default());
        assert!((v - 3.0).abs() < 1e-6, "got {v}");
    }

    #[test]
    fn spread_of_constant_is_zero() {
        assert_eq!(spread(&[2.0, 2.0, 2.0]), 0.0);
        assert!((spread(&[1.0, 2.0]) - 0.5).abs() < 1e-15);
    }
}
