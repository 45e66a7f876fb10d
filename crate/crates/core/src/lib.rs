//! Exact commutative algebra for local invariants of affine varieties at a
//! rational point: principal parts, differential powers of the maximal ideal,
//! Frobenius tests in prime characteristic and invariants of finite groups.

pub mod algebra;
pub mod charp;
pub mod diffops;
pub mod error;
pub mod groebner;
pub mod invariants;
pub mod linalg;
pub mod pparts;

pub use algebra::{Field, Monomial, MonomialOrder, Poly, Ring, Scalar};
pub use error::{Error, Result};
pub use groebner::{Dimension, Ideal, Submodule};
