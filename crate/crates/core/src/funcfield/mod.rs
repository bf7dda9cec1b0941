//! Laurent polynomials and rational functions over `Q(zeta_m)` with the
//! involution `t -> 1/t` plus complex conjugation of coefficients.

mod laurent;
mod parse;
mod poly;
mod ratfunc;

pub use laurent::LaurentPoly;
pub use parse::parse_expression;
pub use poly::Poly;
pub(crate) use ratfunc::NumericPoly;
pub use ratfunc::RationalFunction;
