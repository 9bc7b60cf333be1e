//! Jet-space presentations: jet ideals, truncation, next-level fibers and
//! obstruction systems.
//!
//! The `k`-th coefficient of ambient coordinate `x` is the jet variable `x_k`.
//! Jet variables are ordered by `k` first, then by ambient coordinate, and any
//! parameters of the base ideal follow them unchanged.

use num_traits::Zero;

use crate::algebra::linalg::solve_affine;
use crate::algebra::series::{substitute_series, Arc, Coeff, TruncSeries};
use crate::algebra::{MPoly, Rational, Vars};
use crate::error::{Error, Result};
use crate::groebner::Ideal;

pub fn jet_var_name(var: &str, k: usize) -> String {
    format!("{var}_{k}")
}

/// The jet ideal of `I` at level `n`.
#[derive(Debug, Clone)]
pub struct JetIdeal {
    pub level: usize,
    /// Jet variables followed by the parameters of the base ideal.
    pub ring: Vars,
    /// `equations[i][k]` is the `t^k` coefficient of generator `i` along the generic jet.
    pub coefficients: Vec<Vec<MPoly>>,
    /// The nonzero coefficients as an ideal of `ring`.
    pub equations: Ideal,
}

/// The generic `n`-jet over the jet ring, with parameters as constant series.
fn generic_jet(ideal: &Ideal, n: usize) -> (Vars, Arc<MPoly>) {
    let ambient = ideal.ambient();
    let params = ideal.param_vars();
    let mut names = Vec::new();
    for k in 0..=n {
        for v in ambient.names() {
            names.push(jet_var_name(v, k));
        }
    }
    names.extend(params.names().iter().cloned());
    let ring = Vars::new(names);
    let cap = n + 1;
    let dim = ambient.len();
    let mut comps = Vec::with_capacity(dim + params.len());
    for j in 0..dim {
        let coeffs = (0..=n).map(|k| MPoly::var_at(&ring, k * dim + j)).collect();
        comps.push(TruncSeries::new(coeffs, cap, &MPoly::zero(&ring)));
    }
    for p in 0..params.len() {
        comps.push(TruncSeries::constant(MPoly::var_at(&ring, cap * dim + p), cap));
    }
    (ring.clone(), Arc::new(comps).expect("jet has components"))
}

pub fn jet_ideal(ideal: &Ideal, n: usize) -> Result<JetIdeal> {
    if ideal.ambient().is_empty() {
        return Err(Error::InvalidData("ideal has no ambient variables".into()));
    }
    let (ring, jet) = generic_jet(ideal, n);
    let mut coefficients = Vec::with_capacity(ideal.gens().len());
    for f in ideal.gens() {
        let s = substitute_series(f, &jet)?;
        coefficients.push(s.coeffs().to_vec());
    }
    let gens: Vec<MPoly> = coefficients.iter().flatten().cloned().collect();
    let equations = Ideal::with_params(&ring, ideal.num_params(), gens)?.with_limits(ideal.limits());
    Ok(JetIdeal {
        level: n,
        ring,
        coefficients,
        equations,
    })
}

/// Krull dimension of the jet ideal at level `n`.
pub fn jet_dim(ideal: &Ideal, n: usize) -> Result<i64> {
    jet_ideal(ideal, n)?.equations.krull_dim()
}

fn check_components<C: Coeff>(arc: &Arc<C>, ideal: &Ideal) -> Result<()> {
    let n = ideal.ambient().len();
    if arc.dim() != n {
        return Err(Error::VariableMismatch {
            expected: format!("{n} jet components for {}", ideal.ambient()),
            found: format!("{} components", arc.dim()),
        });
    }
    Ok(())
}

/// Coefficient ring for substituting `arc` into the ideal: the ideal's
/// parameters together with the arc's own coefficient variables.
fn coefficient_ring<C: Coeff>(arc: &Arc<C>, ideal: &Ideal) -> Vars {
    ideal.param_vars().union(&arc.coeff_vars())
}

/// `arc` with polynomial coefficients over `ring`, extended by the parameters
/// of `ideal` as constant series.
fn extend_with_params<C: Coeff>(arc: &Arc<C>, ideal: &Ideal, ring: &Vars) -> Result<Arc<MPoly>> {
    let base = arc.to_poly_coeffs(ring)?;
    let mut comps = base.comps().to_vec();
    for name in ideal.param_vars().names() {
        comps.push(TruncSeries::constant(MPoly::var(ring, name)?, arc.cap()));
    }
    Arc::new(comps)
}

/// `f(γ)` for every generator, as polynomials in the coefficient ring.
pub(crate) fn substitute_all<C: Coeff>(arc: &Arc<C>, ideal: &Ideal) -> Result<Vec<TruncSeries<MPoly>>> {
    check_components(arc, ideal)?;
    let ring = coefficient_ring(arc, ideal);
    let ext = extend_with_params(arc, ideal, &ring)?;
    ideal.gens().iter().map(|f| substitute_series(f, &ext)).collect()
}

/// Whether every generator vanishes along `γ` modulo `t^cap`.
pub fn jet_membership<C: Coeff>(arc: &Arc<C>, ideal: &Ideal) -> Result<bool> {
    Ok(substitute_all(arc, ideal)?.iter().all(|s| s.is_zero()))
}

/// Reduction of an `m`-jet (cap `m + 1`) to level `n < m`.
pub fn truncate_jet<C: Coeff>(arc: &Arc<C>, n: usize) -> Result<Arc<C>> {
    let m = arc.cap() - 1;
    if n >= m {
        return Err(Error::OutOfRange(format!(
            "truncation level {n} must be below the jet level {m}"
        )));
    }
    Ok(arc.with_cap(n + 1))
}

/// Solutions `η ∈ ℚ^N` of `α + ∇f(γ(0))·η = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFiber {
    pub feasible: bool,
    pub basepoint: Option<Vec<Rational>>,
    /// Basis of the direction space: the kernel of the Jacobian at `γ(0)`.
    pub directions: Vec<Vec<Rational>>,
}

impl AffineFiber {
    /// Dimension of the fiber, `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.feasible.then_some(self.directions.len())
    }
}

/// Fiber of the truncation from level `n + 1` to level `n` over a numeric `n`-jet.
pub fn fiber_next_level(arc: &Arc<Rational>, ideal: &Ideal) -> Result<AffineFiber> {
    if ideal.num_params() > 0 {
        return Err(Error::Precondition(
            "next-level fibers need a parameter-free ideal".into(),
        ));
    }
    check_components(arc, ideal)?;
    if !jet_membership(arc, ideal)? {
        return Err(Error::NotInJetSpace(format!(
            "the {}-jet does not satisfy the ideal",
            arc.cap() - 1
        )));
    }
    let n = arc.cap() - 1;
    let ext = arc.with_cap(n + 2);
    let origin = arc.origin();
    let dim = arc.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for f in ideal.gens() {
        let alpha = substitute_series(f, &ext)?.coeff(n + 1).clone();
        rows.push((0..dim).map(|j| f.derivative(j).eval(&origin)).collect::<Vec<_>>());
        rhs.push(-alpha);
    }
    let zeros = vec![Rational::zero(); rows.len()];
    let directions = solve_affine(&rows, &zeros, dim)
        .expect("homogeneous systems are consistent")
        .kernel;
    Ok(match solve_affine(&rows, &rhs, dim) {
        Some(sol) => AffineFiber {
            feasible: true,
            basepoint: Some(sol.particular),
            directions,
        },
        None => AffineFiber {
            feasible: false,
            basepoint: None,
            directions,
        },
    })
}

/// One coefficient condition of an obstruction system.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub order: usize,
    pub generator: usize,
    pub poly: MPoly,
}

/// Conditions on the unknown coefficients of orders `n+1 ..= n+k` for an
/// `n`-jet to extend.
#[derive(Debug, Clone)]
pub struct ObstructionSystem {
    /// Unknowns followed by parameters.
    pub ring: Vars,
    pub unknowns: Vec<String>,
    pub conditions: Vec<Condition>,
    pub ideal: Ideal,
}

impl ObstructionSystem {
    /// Conditions of a given order, in generator order.
    pub fn at_order(&self, order: usize) -> Vec<&MPoly> {
        self.conditions
            .iter()
            .filter(|c| c.order == order)
            .map(|c| &c.poly)
            .collect()
    }

    /// Whether some condition is a nonzero constant.
    pub fn is_inconsistent(&self) -> bool {
        self.conditions.iter().any(|c| c.poly.is_constant())
    }
}

pub fn obstruction_system<C: Coeff>(arc: &Arc<C>, ideal: &Ideal, extra: usize) -> Result<ObstructionSystem> {
    if extra == 0 {
        return Err(Error::Precondition("at least one extra level is required".into()));
    }
    check_components(arc, ideal)?;
    if !jet_membership(arc, ideal)? {
        return Err(Error::NotInJetSpace(format!(
            "the {}-jet does not satisfy the ideal",
            arc.cap() - 1
        )));
    }
    let n = arc.cap() - 1;
    let ambient = ideal.ambient();
    let params = coefficient_ring(arc, ideal);
    let mut unknowns = Vec::new();
    for l in n + 1..=n + extra {
        for v in ambient.names() {
            let name = jet_var_name(v, l);
            if params.index_of(&name).is_some() {
                return Err(Error::InvalidData(format!(
                    "unknown `{name}` collides with a parameter"
                )));
            }
            unknowns.push(name);
        }
    }
    let ring = Vars::new(unknowns.iter().chain(params.names()).cloned());
    let cap = n + extra + 1;
    let base = arc.to_poly_coeffs(&ring)?.with_cap(cap);
    let dim = ambient.len();
    let mut comps = Vec::with_capacity(dim + ideal.num_params());
    for j in 0..dim {
        let mut s = base.comp(j).clone();
        for l in n + 1..=n + extra {
            let u = MPoly::var_at(&ring, (l - n - 1) * dim + j);
            s = crate::algebra::Ring::plus(&s, &TruncSeries::monomial(u, l, cap));
        }
        comps.push(s);
    }
    for name in ideal.param_vars().names() {
        comps.push(TruncSeries::constant(MPoly::var(&ring, name)?, cap));
    }
    let generic = Arc::new(comps)?;
    let mut conditions = Vec::new();
    for (i, f) in ideal.gens().iter().enumerate() {
        let s = substitute_series(f, &generic)?;
        for order in n + 1..cap {
            let poly = s.coeff(order).clone();
            if !poly.is_zero() {
                conditions.push(Condition {
                    order,
                    generator: i,
                    poly,
                });
            }
        }
    }
    let ideal_out = Ideal::with_params(
        &ring,
        params.len(),
        conditions.iter().map(|c| c.poly.clone()),
    )?
    .with_limits(ideal.limits());
    Ok(ObstructionSystem {
        ring,
        unknowns,
        conditions,
        ideal: ideal_out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::rational::int;

    fn cusp() -> Ideal {
        let v = Vars::new(["x", "y"]);
        Ideal::new(&v, [parse_poly("y^2 - x^3", &v).unwrap()]).unwrap()
    }

    fn jet(rows: &[&[i64]], cap: usize) -> Arc {
        Arc::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(),
            cap,
        )
        .unwrap()
    }

    #[test]
    fn jet_variable_layout() {
        let j = jet_ideal(&cusp(), 1).unwrap();
        assert_eq!(j.ring.to_string(), "(x_0, y_0, x_1, y_1)");
        assert_eq!(j.coefficients[0].len(), 2);
    }

    #[test]
    fn level_zero_presents_the_variety() {
        let j = jet_ideal(&cusp(), 0).unwrap();
        let expected = parse_poly("y_0^2 - x_0^3", &j.ring).unwrap();
        assert_eq!(j.equations.gens(), &[expected]);
    }

    #[test]
    fn membership_examples() {
        assert!(jet_membership(&jet(&[&[0], &[0, 1]], 2), &cusp()).unwrap());
        assert!(!jet_membership(&jet(&[&[1], &[0]], 1), &cusp()).unwrap());
        for cap in 1..12 {
            assert!(jet_membership(&jet(&[&[0, 0, 1], &[0, 0, 0, 1]], cap), &cusp()).unwrap());
        }
        assert!(matches!(
            jet_membership(&jet(&[&[0]], 1), &cusp()),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn truncation() {
        let g = jet(&[&[0, 0, 1], &[0, 0, 0, 1]], 4);
        assert_eq!(truncate_jet(&g, 2).unwrap(), jet(&[&[0, 0, 1], &[0, 0, 0]], 3));
        let g = jet(&[&[0, 1, 1], &[1]], 3);
        assert_eq!(truncate_jet(&g, 1).unwrap(), jet(&[&[0, 1], &[1]], 2));
        assert!(truncate_jet(&g, 2).is_err());
    }

    #[test]
    fn fibers() {
        let empty = fiber_next_level(&jet(&[&[0], &[0, 1]], 2), &cusp()).unwrap();
        assert!(!empty.feasible);
        let zero = fiber_next_level(&jet(&[&[0], &[0]], 2), &cusp()).unwrap();
        assert_eq!(zero.dim(), Some(2));
        let smooth = fiber_next_level(&jet(&[&[1], &[1]], 1), &cusp()).unwrap();
        assert_eq!(smooth.dim(), Some(1));
        let d = &smooth.directions[0];
        assert!((int(-3) * &d[0] + int(2) * &d[1]).is_zero());
        assert!(matches!(
            fiber_next_level(&jet(&[&[1], &[0]], 1), &cusp()),
            Err(Error::NotInJetSpace(_))
        ));
    }

    #[test]
    fn cusp_obstruction_is_inconsistent() {
        let sys = obstruction_system(&jet(&[&[0], &[0, 1]], 2), &cusp(), 1).unwrap();
        assert_eq!(sys.unknowns, vec!["x_2", "y_2"]);
        assert_eq!(sys.at_order(2), vec![&MPoly::one(&sys.ring)]);
        assert!(sys.is_inconsistent());
    }
}
