//! Exact computations with cones, their tensor products and the extendibility hierarchy.

pub mod cone;
pub mod error;
pub mod extend;
pub mod fixtures;
pub mod format;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod quantum;
pub mod scalar;
pub mod tensor;

pub use cone::{dualize, make_based, make_cone, BasedCone, Cone};
pub use error::{Error, Result};
pub use linalg::Vector;
pub use polytope::{HullCommutation, Polytope, SimplexFactorization};
pub use scalar::{QuadScalar, Rational, Scalar, Sign};
pub use tensor::{DenseTensor, Slot, Variance};
