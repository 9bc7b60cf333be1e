//! Exact arithmetic: rationals, polynomials, truncated series, matrices.

pub mod linalg;
pub mod matrix;
pub mod monomial;
pub mod mpoly;
pub mod parse;
pub mod rational;
pub mod series;

pub use matrix::{Matrix, QMatrix};
pub use monomial::MonomialOrder;
pub use mpoly::{MPoly, Vars};
pub use parse::parse_poly;
pub use rational::Rational;
pub use series::{substitute_series, Arc, Coeff, Order, Ring, TruncSeries};
