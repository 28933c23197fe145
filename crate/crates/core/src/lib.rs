//! Lipschitz–Killing valuations on high-dimensional spheres, their kinematic
//! formulas, and the Gaussian kinematic formula obtained in the limit.

pub mod error;
pub mod gaussian_volumes;
pub mod kinematics;
pub mod lk_algebra;
pub mod quadrature;
pub mod scalar_ring;
pub mod signed_log;
pub mod simulation;

pub use error::{GkfError, Result};
pub use lk_algebra::{Basis, ModelSet, ValuationVector, Value};
pub use scalar_ring::{PiScalar, Rational};
