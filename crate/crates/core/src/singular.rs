//! The ideal `H` of a variety of dimension `d` and orders of arcs along it.
//!
//! `H` is the sum, over `(N − d)`-subsets `F` of the generators of `I`, of the
//! products `Δ(F) · ((F) : I)`, where `Δ(F)` is generated by the maximal minors
//! of the Jacobian of `F`. Its zero set is the complement of the points where
//! the variety is nonsingular of dimension `d`.

use crate::algebra::matrix::combinations;
use crate::algebra::monomial::MonomialOrder;
use crate::algebra::series::{Arc, Coeff, Order};
use crate::algebra::QMatrix;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::jet::substitute_all;

#[derive(Debug, Clone)]
pub struct HIdeal {
    /// `H`, generated by its reduced basis, with the basis cached.
    pub ideal: Ideal,
    /// Number of generator subsets summed over.
    pub subsets: usize,
    /// True unless the input is a single hypersurface equation, the only case
    /// where generator subsets are known to give the full sum over all of `I`.
    pub restricted: bool,
}

pub fn h_ideal(ideal: &Ideal, d: usize) -> Result<HIdeal> {
    let ambient = ideal.ambient();
    let n = ambient.len();
    if d >= n {
        return Err(Error::Precondition(format!(
            "dimension {d} must be below the ambient dimension {n}"
        )));
    }
    let c = n - d;
    let gens = ideal.gens();
    if gens.len() < c {
        return Err(Error::Precondition(format!(
            "codimension {c} needs at least {c} generators, found {}",
            gens.len()
        )));
    }
    let ring = ideal.vars();
    let subsets = combinations(gens.len(), c);
    let mut total: Option<Ideal> = None;
    for subset in &subsets {
        let fs: Vec<_> = subset.iter().map(|&i| gens[i].clone()).collect();
        let jac = QMatrix::jacobian(&fs, ring)?;
        let ambient_cols: Vec<usize> = (0..n).collect();
        let rows: Vec<usize> = (0..c).collect();
        let minors = jac.submatrix(&rows, &ambient_cols)?.minors(c)?;
        let delta = Ideal::with_params(ring, ideal.num_params(), minors)?.with_limits(ideal.limits());
        let sub = Ideal::with_params(ring, ideal.num_params(), fs)?.with_limits(ideal.limits());
        let colon = sub.colon(ideal)?;
        let term = if colon.is_unit()? { delta } else { delta.product(&colon)? };
        total = Some(match total {
            None => term,
            Some(t) => t.sum(&term)?,
        });
    }
    let total = total.expect("at least one subset");
    let basis = total.groebner_basis(MonomialOrder::DegRevLex)?;
    let h = Ideal::with_params(ring, ideal.num_params(), basis)?
        .with_limits(ideal.limits())
        .with_basis(MonomialOrder::DegRevLex)?;
    Ok(HIdeal {
        ideal: h,
        subsets: subsets.len(),
        restricted: !(gens.len() == 1 && c == 1),
    })
}

/// Minimum over generators of the order of vanishing along `γ`.
///
/// `AtLeast(K)` means every generator vanishes modulo `t^K`.
pub fn h_order<C: Coeff>(arc: &Arc<C>, h: &Ideal) -> Result<Order> {
    let subs = substitute_all(arc, h)?;
    Ok(subs
        .iter()
        .map(|s| s.order())
        .fold(Order::AtLeast(arc.cap() as u32), Order::min))
}
