//! Exact multivariate polynomials, monomial orders and Gröbner bases.

mod groebner;
mod ideal;
mod monomial;
pub mod parse;
mod polynomial;

pub use groebner::{groebner_basis, normal_form, GroebnerIdeal};
pub use ideal::{hilbert_function_of, ideal_intersection, ideal_product, ideal_sum};
pub use monomial::{monomials_of_degree, Monomial, MonomialOrder};
pub use parse::parse_polynomial;
pub(crate) use polynomial::render_term;
pub use polynomial::Polynomial;
