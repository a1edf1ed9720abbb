//! Quaternion scalars and the imaginary subspace Im H.
//!
//! Coefficients are ordered (w, x, y, z) for w + x·i + y·j + z·k. The
//! Hamilton relations are i² = j² = k² = −1, ij = k, jk = i, ki = j.

use std::ops::{Add, Mul, Neg, Sub};

/// A quaternion with f64 coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quat {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quat {
    pub const ZERO: Quat = Quat::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quat = Quat::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quat = Quat::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quat = Quat::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quat = Quat::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quat { w, x, y, z }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quat::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quat::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sq(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Euclidean inner product on R^4.
    pub fn dot(self, other: Quat) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn scale(self, t: f64) -> Self {
        Quat::new(self.w * t, self.x * t, self.y * t, self.z * t)
    }

    /// Imaginary part as an element of Im H.
    pub fn im(self) -> ImQuat {
        ImQuat::new(self.x, self.y, self.z)
    }

    pub fn normalize(self) -> Self {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero quaternion");
        self.scale(1.0 / n)
    }
}

impl Mul for Quat {
    type Output = Quat;

    /// Hamilton product.
    fn mul(self, b: Quat) -> Quat {
        let a = self;
        Quat::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Add for Quat {
    type Output = Quat;
    fn add(self, b: Quat) -> Quat {
        Quat::new(self.w + b.w, self.x + b.x, self.y + b.y, self.z + b.z)
    }
}

impl Sub for Quat {
    type Output = Quat;
    fn sub(self, b: Quat) -> Quat {
        Quat::new(self.w - b.w, self.x - b.x, self.y - b.y, self.z - b.z)
    }
}

impl Neg for Quat {
    type Output = Quat;
    fn neg(self) -> Quat {
        self.scale(-1.0)
    }
}

/// A purely imaginary quaternion x·i + y·j + z·k.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImQuat {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ImQuat {
    pub const I: ImQuat = ImQuat::new(1.0, 0.0, 0.0);
    pub const J: ImQuat = ImQuat::new(0.0, 1.0, 0.0);
    pub const K: ImQuat = ImQuat::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        ImQuat { x, y, z }
    }

    /// Embeds into H with w = 0.
    pub fn to_quat(self) -> Quat {
        Quat::new(0.0, self.x, self.y, self.z)
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defining_relations() {
        assert_eq!(Quat::I * Quat::J, Quat::K);
        assert_eq!(Quat::J * Quat::K, Quat::I);
        assert_eq!(Quat::K * Quat::I, Quat::J);
        assert_eq!(Quat::I * Quat::I, -Quat::ONE);
        assert_eq!(Quat::J * Quat::J, -Quat::ONE);
        assert_eq!(Quat::K * Quat::K, -Quat::ONE);
    }

    #[test]
    fn identity_element() {
        let q = Quat::new(0.3, -1.2, 0.7, 2.0);
        assert_eq!(Quat::ONE * q, q);
        assert_eq!(q * Quat::ONE, q);
    }

    fn arb_quat() -> impl Strategy<Value = Quat> {
        let c = -10.0..10.0f64;
        (c.clone(), c.clone(), c.clone(), c).prop_map(|(w, x, y, z)| Quat::new(w, x, y, z))
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in arb_quat(), b in arb_quat()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
        }

        #[test]
        fn product_is_associative(a in arb_quat(), b in arb_quat(), c in arb_quat()) {
            let l = (a * b) * c;
            let r = a * (b * c);
            let scale = a.norm() * b.norm() * c.norm();
            prop_assert!((l - r).norm() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn norm_multiplicative_bulk() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let a = Quat::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let b = Quat::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            let err = ((a * b).norm() - a.norm() * b.norm()).abs();
            assert!(err <= 1e-12 * (a.norm() * b.norm()).max(1e-30));
        }
    }
}
