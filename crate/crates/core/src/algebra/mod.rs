//! Coefficient fields, monomials, polynomials and divided-power calculus.

pub mod divided;
pub mod field;
pub mod monomial;
pub mod parse;
pub mod poly;

pub use divided::{apply_divided_power, jet_ring, taylor_coefficients, taylor_shift};
pub use field::{binomial, binomial_in_field, Field, Scalar};
pub use monomial::{monomials_of_degree, monomials_up_to, Monomial, MonomialOrder};
pub use parse::parse_poly;
pub use poly::{Poly, Ring, DEFAULT_BUDGET};
