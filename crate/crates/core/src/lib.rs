//! Numerical core for generalized Seiberg-Witten moment-map analysis.
//!
//! The crate is organized around the pointwise algebra of quaternionic
//! representations and the discrete analysis built on top of it:
//!
//! * [`quat`] — quaternion arithmetic and Im H,
//! * [`lie`] — compact Lie algebras over fixed orthonormal bases,
//! * [`rep`] — representations, moment maps, and the Γ_Φ operator,
//! * [`identity`] — seeded randomized checks of the pointwise identities,
//! * [`certify`] — cone decompositions and constrained-optimization
//!   estimates of the compactness constants,
//! * [`lattice`] — fields on Euclidean grids: equation residuals, the
//!   frequency function, regularity scales, and the covering checker.

pub mod certify;
pub mod identity;
pub mod lattice;
pub mod lie;
pub mod quat;
pub mod rep;

pub use lie::LieAlg;
pub use quat::{ImQuat, Quat};
pub use rep::{MomentValue, QuatRep, RepTag, Spinor};
