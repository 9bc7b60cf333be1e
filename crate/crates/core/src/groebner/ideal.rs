use std::sync::Arc;

use crate::algebra::monomial::MonomialOrder;
use crate::algebra::{MPoly, Vars};
use crate::error::{Error, Result};

use super::basis::{groebner_basis, reduce_by, Limits};

/// A reduced Gröbner basis together with its order.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub order: MonomialOrder,
    pub polys: Vec<MPoly>,
}

/// An ideal of `ℚ[vars]`.
///
/// The last `params` variables are symbolic parameters: they belong to the
/// ring but are not ambient coordinates. A computed basis is attached to a
/// new value by [`Ideal::with_basis`]; existing values are never mutated.
#[derive(Debug, Clone)]
pub struct Ideal {
    vars: Vars,
    params: usize,
    gens: Vec<MPoly>,
    basis: Option<Arc<Basis>>,
    limits: Limits,
}

impl Ideal {
    pub fn new(vars: &Vars, gens: impl IntoIterator<Item = MPoly>) -> Result<Ideal> {
        Ideal::with_params(vars, 0, gens)
    }

    pub fn with_params(vars: &Vars, params: usize, gens: impl IntoIterator<Item = MPoly>) -> Result<Ideal> {
        if params > vars.len() {
            return Err(Error::InvalidData("more parameters than variables".into()));
        }
        let gens = gens
            .into_iter()
            .map(|g| g.to_ring(vars))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|g| !g.is_zero())
            .collect();
        Ok(Ideal {
            vars: vars.clone(),
            params,
            gens,
            basis: None,
            limits: Limits::default(),
        })
    }

    pub fn unit(vars: &Vars) -> Ideal {
        Ideal {
            vars: vars.clone(),
            params: 0,
            gens: vec![MPoly::one(vars)],
            basis: Some(Arc::new(Basis {
                order: MonomialOrder::DegRevLex,
                polys: vec![MPoly::one(vars)],
            })),
            limits: Limits::default(),
        }
    }

    pub fn with_limits(mut self, limits: Limits) -> Ideal {
        self.limits = limits;
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Number of trailing parameter variables.
    pub fn num_params(&self) -> usize {
        self.params
    }

    /// The ambient coordinates (all variables except parameters).
    pub fn ambient(&self) -> Vars {
        Vars::new(self.vars.names()[..self.vars.len() - self.params].iter().cloned())
    }

    pub fn param_vars(&self) -> Vars {
        Vars::new(self.vars.names()[self.vars.len() - self.params..].iter().cloned())
    }

    pub fn gens(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn cached_basis(&self) -> Option<&Basis> {
        self.basis.as_deref()
    }

    fn derived(&self, vars: &Vars, params: usize, gens: Vec<MPoly>) -> Result<Ideal> {
        Ok(Ideal::with_params(vars, params, gens)?.with_limits(self.limits))
    }

    /// Reduced basis under `order`, reusing the cache when it matches.
    pub fn groebner_basis(&self, order: MonomialOrder) -> Result<Vec<MPoly>> {
        if let Some(b) = &self.basis {
            if b.order == order {
                return Ok(b.polys.clone());
            }
        }
        groebner_basis(&self.gens, &self.vars, order, self.limits)
    }

    /// A copy carrying the reduced basis for `order`.
    pub fn with_basis(&self, order: MonomialOrder) -> Result<Ideal> {
        let polys = self.groebner_basis(order)?;
        let mut out = self.clone();
        out.basis = Some(Arc::new(Basis { order, polys }));
        Ok(out)
    }

    fn default_basis(&self) -> Result<Vec<MPoly>> {
        self.groebner_basis(MonomialOrder::DegRevLex)
    }

    pub fn normal_form(&self, f: &MPoly) -> Result<MPoly> {
        let f = f.to_ring(&self.vars)?;
        reduce_by(&f, &self.default_basis()?, MonomialOrder::DegRevLex, self.limits)
    }

    pub fn contains(&self, f: &MPoly) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_ideal(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn is_unit(&self) -> Result<bool> {
        Ok(self.default_basis()?.iter().any(|g| g.is_constant() && !g.is_zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    fn check_ring(&self, other: &Ideal) -> Result<()> {
        if !self.vars.same(&other.vars) {
            return Err(Error::VariableMismatch {
                expected: self.vars.to_string(),
                found: other.vars.to_string(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        self.derived(
            &self.vars,
            self.params,
            self.gens.iter().chain(&other.gens).cloned().collect(),
        )
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut gens = Vec::new();
        for f in &self.gens {
            for g in &other.gens {
                gens.push(f * g);
            }
        }
        self.derived(&self.vars, self.params, gens)
    }

    /// `I ∩ ℚ[kept]`, where kept are the variables not in `remove`.
    ///
    /// The result lives in the ring of kept variables (original relative order)
    /// and carries its reduced degree-reverse-lexicographic basis.
    pub fn eliminate(&self, remove: &[&str]) -> Result<Ideal> {
        for name in remove {
            if self.vars.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.to_string()));
            }
        }
        let removed: Vec<String> = self
            .vars
            .names()
            .iter()
            .filter(|n| remove.contains(&n.as_str()))
            .cloned()
            .collect();
        let kept_names: Vec<String> = self
            .vars
            .names()
            .iter()
            .filter(|n| !remove.contains(&n.as_str()))
            .cloned()
            .collect();
        let first_param = self.vars.len() - self.params;
        let kept_params = self.vars.names()[first_param..]
            .iter()
            .filter(|n| !remove.contains(&n.as_str()))
            .count();
        let kept = Vars::new(kept_names.iter().cloned());
        let work = Vars::new(removed.iter().chain(&kept_names).cloned());
        let gens = self
            .gens
            .iter()
            .map(|g| g.to_ring(&work))
            .collect::<Result<Vec<_>>>()?;
        let k = removed.len();
        let gb = groebner_basis(&gens, &work, MonomialOrder::Block(k), self.limits)?;
        let polys = gb
            .into_iter()
            .filter(|g| g.terms().all(|(e, _)| e[..k].iter().all(|&x| x == 0)))
            .map(|g| g.to_ring(&kept))
            .collect::<Result<Vec<_>>>()?;
        let mut out = self.derived(&kept, kept_params, polys.clone())?;
        out.basis = Some(Arc::new(Basis {
            order: MonomialOrder::DegRevLex,
            polys,
        }));
        Ok(out)
    }

    fn fresh_name(&self, stem: &str) -> String {
        let mut name = stem.to_string();
        while self.vars.index_of(&name).is_some() {
            name.push('_');
        }
        name
    }

    /// `I ∩ J`, eliminating `w` from `w·I + (1 − w)·J`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return self.derived(&self.vars, self.params, Vec::new());
        }
        let w = self.fresh_name("w");
        let ext = Vars::new(std::iter::once(w.clone()).chain(self.vars.names().iter().cloned()));
        let wv = MPoly::var_at(&ext, 0);
        let one_minus_w = &MPoly::one(&ext) - &wv;
        let mut gens = Vec::new();
        for f in &self.gens {
            gens.push(&wv * &f.to_ring(&ext)?);
        }
        for g in &other.gens {
            gens.push(&one_minus_w * &g.to_ring(&ext)?);
        }
        let lifted = self.derived(&ext, self.params, gens)?;
        let out = lifted.eliminate(&[w.as_str()])?;
        // Re-attach to the original variable list so ring identity is preserved.
        let polys = out
            .gens
            .iter()
            .map(|g| g.to_ring(&self.vars))
            .collect::<Result<Vec<_>>>()?;
        let mut res = self.derived(&self.vars, self.params, polys.clone())?;
        res.basis = Some(Arc::new(Basis {
            order: MonomialOrder::DegRevLex,
            polys,
        }));
        Ok(res)
    }

    /// `(I : g) = (I ∩ (g)) / g`.
    pub fn colon_poly(&self, g: &MPoly) -> Result<Ideal> {
        let g = g.to_ring(&self.vars)?;
        if g.is_zero() {
            return Ok(Ideal::unit(&self.vars).with_limits(self.limits).with_params_count(self.params));
        }
        let principal = self.derived(&self.vars, self.params, vec![g.clone()])?;
        let meet = self.intersect(&principal)?;
        let quotients = meet
            .gens
            .iter()
            .map(|h| {
                h.div_exact(&g).ok_or_else(|| {
                    Error::InvalidData("intersection generator not divisible by the divisor".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.derived(&self.vars, self.params, quotients)?
            .with_basis(MonomialOrder::DegRevLex)
    }

    /// `(I : J)` as the intersection of `(I : g)` over the generators `g` of `J`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        self.check_ring(other)?;
        let mut acc: Option<Ideal> = None;
        for g in &other.gens {
            let q = self.colon_poly(g)?;
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?,
            });
        }
        Ok(acc.unwrap_or_else(|| {
            Ideal::unit(&self.vars)
                .with_limits(self.limits)
                .with_params_count(self.params)
        }))
    }

    fn with_params_count(mut self, params: usize) -> Ideal {
        self.params = params;
        self
    }

    /// Krull dimension of `ℚ[vars]/I`, or −1 for the unit ideal.
    ///
    /// Computed as the size of a largest set of variables containing the
    /// support of no leading monomial of the degree-reverse-lexicographic basis.
    pub fn krull_dim(&self) -> Result<i64> {
        let gb = self.default_basis()?;
        if gb.iter().any(|g| g.is_constant()) {
            return Ok(-1);
        }
        let n = self.vars.len();
        if n > 64 {
            return Err(Error::ResourceLimit("dimension search limited to 64 variables".into()));
        }
        let mut supports: Vec<u64> = gb
            .iter()
            .map(|g| {
                let (lm, _) = g.leading(MonomialOrder::DegRevLex).expect("nonzero");
                lm.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect();
        supports.sort_unstable();
        supports.dedup();
        let mut best = 0usize;
        independent_search(0, 0, n, &supports, &mut best);
        Ok(best as i64)
    }
}

fn independent_search(i: usize, set: u64, n: usize, supports: &[u64], best: &mut usize) {
    let size = set.count_ones() as usize;
    if size + (n - i) <= *best {
        return;
    }
    if i == n {
        *best = size;
        return;
    }
    let with = set | (1 << i);
    if supports.iter().all(|&s| s & !with != 0) {
        independent_search(i + 1, with, n, supports, best);
    }
    independent_search(i + 1, set, n, supports, best);
}

impl PartialEq for Ideal {
    /// Structural equality of ring and generators; use [`Ideal::same_ideal`]
    /// for ideal equality.
    fn eq(&self, other: &Ideal) -> bool {
        self.vars.same(&other.vars) && self.params == other.params && self.gens == other.gens
    }
}
