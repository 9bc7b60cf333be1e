//! Gröbner bases and ideal operations.

mod basis;
mod ideal;

pub use basis::{groebner_basis, reduce_by, Limits};
pub use ideal::{Basis, Ideal};
