//! Exact symbolic tools for jets and arcs on real algebraic sets.
//!
//! The crate is organised bottom-up:
//!
//! * [`algebra`]: rationals, polynomials, truncated series, matrices and a parser.
//! * [`groebner`]: Gröbner bases and ideal operations.
//! * [`jet`]: jet ideals, truncation, next-level fibers and obstruction systems.
//! * [`singular`]: the singular-locus ideal `H` and orders of arcs along it.
//! * [`arc_analysis`]: Jacobian orders, t-Smith invariants, fibers of a map on
//!   jets, and Hensel lifting of arcs.
//! * [`motivic`]: virtual Poincaré polynomials over normal-crossing divisor data.
//! * [`formats`]: the text input formats.

pub mod algebra;
pub mod arc_analysis;
pub mod error;
pub mod formats;
pub mod groebner;
pub mod jet;
pub mod motivic;
pub mod singular;

pub use algebra::{parse_poly, Arc, MPoly, Matrix, Order, QMatrix, Rational, TruncSeries, Vars};
pub use error::{Error, Result};
pub use groebner::{Ideal, Limits};
