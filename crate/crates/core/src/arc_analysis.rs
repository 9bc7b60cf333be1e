//! Arc-level analysis of a polynomial map `σ`: orders of Jacobian minors,
//! t-Smith invariants, the change-of-variables fiber and Hensel lifting.

use num_traits::Zero;

use crate::algebra::linalg::solve_affine;
use crate::algebra::matrix::combinations;
use crate::algebra::series::{map_arc, substitute_series, Arc, Coeff, Order, Ring, TruncSeries};
use crate::algebra::{MPoly, Matrix, QMatrix, Rational, Vars};
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::singular::h_order;

/// A polynomial map from `source` (`d` variables) to `target` (`N` variables).
#[derive(Debug, Clone)]
pub struct PolyMap {
    source: Vars,
    target: Vars,
    comps: Vec<MPoly>,
}

impl PolyMap {
    pub fn new(source: &Vars, target: &Vars, comps: Vec<MPoly>) -> Result<PolyMap> {
        if comps.len() != target.len() {
            return Err(Error::InvalidData(format!(
                "{} components for {} target coordinates",
                comps.len(),
                target.len()
            )));
        }
        if source.is_empty() {
            return Err(Error::InvalidData("map has no source variables".into()));
        }
        let comps = comps
            .iter()
            .map(|c| c.to_ring(source))
            .collect::<Result<_>>()?;
        Ok(PolyMap {
            source: source.clone(),
            target: target.clone(),
            comps,
        })
    }

    pub fn identity(vars: &Vars) -> PolyMap {
        let comps = (0..vars.len()).map(|i| MPoly::var_at(vars, i)).collect();
        PolyMap {
            source: vars.clone(),
            target: vars.clone(),
            comps,
        }
    }

    pub fn source(&self) -> &Vars {
        &self.source
    }

    pub fn target(&self) -> &Vars {
        &self.target
    }

    pub fn comps(&self) -> &[MPoly] {
        &self.comps
    }

    /// The `N x d` Jacobian matrix.
    pub fn jacobian(&self) -> QMatrix {
        QMatrix::jacobian(&self.comps, &self.source).expect("components are nonempty")
    }

    /// Size of the minors defining the Jacobian order, `min(d, N)`.
    pub fn minor_size(&self) -> usize {
        self.source.len().min(self.target.len())
    }

    /// `σ ∘ γ`.
    pub fn apply<C: Coeff>(&self, arc: &Arc<C>) -> Result<Arc<C>> {
        map_arc(&self.comps, arc)
    }
}

/// `ord_t f(γ(t))`.
pub fn ord_poly<C: Coeff>(arc: &Arc<C>, f: &MPoly) -> Result<Order> {
    Ok(substitute_series(f, arc)?.order())
}

/// Minimum order along `γ` over the generators of an ideal.
pub fn ord_ideal<C: Coeff>(arc: &Arc<C>, ideal: &Ideal) -> Result<Order> {
    h_order(arc, ideal)
}

fn check_source<C: Coeff>(map: &PolyMap, arc: &Arc<C>) -> Result<()> {
    if arc.dim() != map.source.len() {
        return Err(Error::VariableMismatch {
            expected: format!("{} arc components for {}", map.source.len(), map.source),
            found: format!("{} components", arc.dim()),
        });
    }
    Ok(())
}

/// Minimum over the `min(d, N)`-minors of the Jacobian of their order along `γ`.
pub fn ord_jacobian<C: Coeff>(map: &PolyMap, arc: &Arc<C>) -> Result<Order> {
    check_source(map, arc)?;
    let minors = map.jacobian().minors(map.minor_size())?;
    let mut best = Order::AtLeast(arc.cap() as u32);
    for m in &minors {
        best = best.min(ord_poly(arc, m)?);
    }
    Ok(best)
}

/// Jacobian order of an arc and the order of its image along `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaClass {
    pub e: Order,
    pub eprime: Order,
}

pub fn delta_class<C: Coeff>(map: &PolyMap, arc: &Arc<C>, h: &Ideal) -> Result<DeltaClass> {
    let e = ord_jacobian(map, arc)?;
    let image = map.apply(arc)?;
    let eprime = h_order(&image, h)?;
    Ok(DeltaClass { e, eprime })
}

/// Result of [`t_smith_invariants`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmithInvariants {
    /// `e_1 <= ... <= e_r` with `Σ e_i < K`.
    Certified(Vec<u32>),
    /// Some determinantal divisor vanishes to the cap; `known` holds the
    /// invariants certified before that point.
    Undetermined { known: Vec<u32>, cap: u32 },
}

/// t-adic Smith invariants of a matrix of series sharing one cap, from the
/// orders of its determinantal divisors.
pub fn t_smith_invariants(m: &Matrix<TruncSeries<Rational>>) -> Result<SmithInvariants> {
    let r = m.rows().min(m.cols());
    if r == 0 {
        return Ok(SmithInvariants::Certified(Vec::new()));
    }
    let cap = m.get(0, 0).cap();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m.get(i, j).cap() != cap {
                return Err(Error::InvalidData("matrix entries have different caps".into()));
            }
        }
    }
    let mut known = Vec::with_capacity(r);
    let mut prev = 0u32;
    for k in 1..=r {
        let order = m
            .minors(k)?
            .iter()
            .map(|x| x.order())
            .fold(Order::AtLeast(cap as u32), Order::min);
        match order {
            Order::Exact(dk) => {
                known.push(dk - prev);
                prev = dk;
            }
            Order::AtLeast(_) => {
                return Ok(SmithInvariants::Undetermined {
                    known,
                    cap: cap as u32,
                })
            }
        }
    }
    Ok(SmithInvariants::Certified(known))
}

/// The Jacobian of `σ` evaluated along a numeric arc.
pub fn jacobian_along(map: &PolyMap, arc: &Arc<Rational>) -> Result<Matrix<TruncSeries<Rational>>> {
    check_source(map, arc)?;
    map.jacobian().try_map(|f| substitute_series(f, arc))
}

/// The lexicographically first `d`-subset of target coordinates whose
/// Jacobian minor along `γ` attains the Jacobian order, with that order.
pub fn select_projection(map: &PolyMap, arc: &Arc<Rational>) -> Result<(Vec<usize>, Order)> {
    let d = map.source.len();
    let n = map.target.len();
    if n < d {
        return Err(Error::Precondition(format!(
            "projection needs at least {d} target coordinates, found {n}"
        )));
    }
    let jac = map.jacobian();
    let cols: Vec<usize> = (0..d).collect();
    let mut best: Option<(Vec<usize>, Order)> = None;
    for rows in combinations(n, d) {
        let minor = jac.submatrix(&rows, &cols)?.det()?;
        let ord = ord_poly(arc, &minor)?;
        let better = match &best {
            None => true,
            Some((_, b)) => match (ord, *b) {
                (Order::Exact(a), Order::Exact(b)) => a < b,
                (Order::Exact(_), Order::AtLeast(_)) => true,
                _ => false,
            },
        };
        if better {
            best = Some((rows, ord));
        }
    }
    Ok(best.expect("at least one subset"))
}

fn projected(map: &PolyMap, rows: &[usize]) -> Result<PolyMap> {
    let target = Vars::new(rows.iter().map(|&i| map.target.name(i).to_string()));
    PolyMap::new(
        &map.source,
        &target,
        rows.iter().map(|&i| map.comps[i].clone()).collect(),
    )
}

/// The jets with the same image jet as `γ` at level `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovFiber {
    pub e: u32,
    /// Target coordinates kept by the projection `p`.
    pub projection: Vec<usize>,
    /// t-Smith invariants of `Jac_{p∘σ}(γ)`.
    pub smith: Vec<u32>,
    /// `γ mod t^(n+1)`.
    pub basepoint: Arc<Rational>,
    /// Jets `t^(n+1-e) u(t)` spanning the fiber directions.
    pub directions: Vec<Arc<Rational>>,
}

impl CovFiber {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

/// Fiber `{γ + t^(n+1-e) u : Jac_{p∘σ}(γ) u ≡ 0 mod t^e}` over the image jet.
pub fn cov_fiber(map: &PolyMap, arc: &Arc<Rational>, n: usize, e: Option<u32>) -> Result<CovFiber> {
    check_source(map, arc)?;
    if arc.cap() < n + 1 {
        return Err(Error::CapTooSmall(format!(
            "arc cap {} is below level {} + 1",
            arc.cap(),
            n
        )));
    }
    let actual = ord_jacobian(map, arc)?;
    let e_val = match actual {
        Order::Exact(v) => v,
        Order::AtLeast(k) => return Err(Error::CriticalArc(k)),
    };
    if let Some(given) = e {
        if given != e_val {
            return Err(Error::Precondition(format!(
                "stated Jacobian order {given} differs from the computed order {e_val}"
            )));
        }
    }
    if n < 2 * e_val as usize {
        return Err(Error::Precondition(format!(
            "level {n} is below twice the Jacobian order {e_val}"
        )));
    }
    let (rows, _) = select_projection(map, arc)?;
    let jp = jacobian_along(&projected(map, &rows)?, arc)?;
    let smith = match t_smith_invariants(&jp)? {
        SmithInvariants::Certified(v) => v,
        SmithInvariants::Undetermined { cap, .. } => return Err(Error::CapTooSmall(format!(
            "t-Smith invariants are not certified at cap {cap}"
        ))),
    };
    let d = map.source.len();
    let e = e_val as usize;
    // Unknowns u[j][b], j < d, b < e, flattened as j * e + b.
    let mut system = Vec::with_capacity(d * e);
    for i in 0..d {
        for o in 0..e {
            let mut row = vec![Rational::zero(); d * e];
            for j in 0..d {
                for b in 0..=o {
                    row[j * e + b] += jp.get(i, j).coeff(o - b);
                }
            }
            system.push(row);
        }
    }
    let zeros = vec![Rational::zero(); system.len()];
    let kernel = solve_affine(&system, &zeros, d * e)
        .expect("homogeneous systems are consistent")
        .kernel;
    let cap = n + 1;
    let shift = n + 1 - e;
    let directions = kernel
        .iter()
        .map(|v| {
            Arc::from_rows(
                (0..d)
                    .map(|j| {
                        let mut c = vec![Rational::zero(); shift];
                        c.extend(v[j * e..(j + 1) * e].iter().cloned());
                        c
                    })
                    .collect(),
                cap,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CovFiber {
        e: e_val,
        projection: rows,
        smith,
        basepoint: arc.with_cap(cap),
        directions,
    })
}

/// Result of [`hensel_lift`].
#[derive(Debug, Clone, PartialEq)]
pub enum LiftOutcome {
    Lifted(Lift),
    Infeasible { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    /// `η` with `σ(η) ≡ δ mod t^K`.
    pub eta: Arc<Rational>,
    pub e: u32,
    /// Level actually used: the largest `n* <= K - 1` with `σ(γ) ≡ δ mod t^(n*+1)`.
    pub level: usize,
    /// `η ≡ γ mod t^(level - e + 1)`.
    pub agreement: usize,
    pub projection: Vec<usize>,
    pub iterations: usize,
}

fn divide_by_t_power(s: &TruncSeries<Rational>, k: usize) -> Option<TruncSeries<Rational>> {
    if k == 0 {
        Some(s.clone())
    } else {
        s.shift_down(k)
    }
}

/// The unique arc `η` with `σ(η) ≡ δ mod t^K` and `η ≡ γ mod t^(n-e+1)`.
///
/// `δ` is taken as the exact polynomial arc given by its coefficients. The
/// level is raised to the largest `n*` with `σ(γ) ≡ δ mod t^(n*+1)`, which
/// must satisfy `n* >= 2e`. When `target` is given, `δ` must lie on it
/// modulo `t^K`.
pub fn hensel_lift(
    map: &PolyMap,
    seed: &Arc<Rational>,
    delta: &Arc<Rational>,
    n: usize,
    target: Option<&Ideal>,
) -> Result<LiftOutcome> {
    check_source(map, seed)?;
    let k = seed.cap();
    if delta.cap() != k {
        return Err(Error::InvalidData(format!(
            "seed cap {} and target cap {} differ",
            k,
            delta.cap()
        )));
    }
    if delta.dim() != map.target.len() {
        return Err(Error::VariableMismatch {
            expected: format!("{} target components", map.target.len()),
            found: format!("{} components", delta.dim()),
        });
    }
    if n + 1 > k {
        return Err(Error::CapTooSmall(format!("level {n} needs cap at least {}", n + 1)));
    }
    if let Some(ideal) = target {
        if !crate::jet::jet_membership(delta, ideal)? {
            return Err(Error::Precondition(
                "target arc does not satisfy the target ideal at the cap".into(),
            ));
        }
    }
    let e = match ord_jacobian(map, seed)? {
        Order::Exact(v) => v as usize,
        Order::AtLeast(c) => return Err(Error::CriticalArc(c)),
    };
    let image = map.apply(seed)?;
    let gap = image.minus(delta).order();
    let agree = match gap {
        Order::Exact(g) => g as usize,
        Order::AtLeast(g) => g as usize,
    };
    if agree < n + 1 {
        return Err(Error::Precondition(format!(
            "σ(seed) and the target differ at order {agree}, below level {n} + 1"
        )));
    }
    let level = agree.min(k) - 1;
    if level < 2 * e && agree >= k {
        return Err(Error::CapTooSmall(format!(
            "cap {k} leaves level {level}, below twice the Jacobian order {e}"
        )));
    }
    if level < 2 * e {
        return Err(Error::Precondition(format!(
            "level {level} is below twice the Jacobian order {e}"
        )));
    }
    let (rows, _) = select_projection(map, seed)?;
    let s = level + 1 - e;
    // With e = 0 the seed already determines the lift mod t^K.
    if s >= k {
        return Ok(LiftOutcome::Lifted(Lift {
            eta: seed.clone(),
            e: e as u32,
            level,
            agreement: level + 1 - e,
            projection: rows,
            iterations: 0,
        }));
    }
    let p = projected(map, &rows)?;
    let work = k + e;
    let u_cap = work - s;
    let d = map.source.len();

    let gamma0 = seed.with_cap(s).with_cap(work);
    let delta_p: Vec<TruncSeries<Rational>> =
        rows.iter().map(|&i| delta.comp(i).with_cap(work)).collect();
    let base = p.apply(&gamma0)?;
    let w = (0..d)
        .map(|i| {
            divide_by_t_power(&delta_p[i].minus(base.comp(i)), s)
                .ok_or_else(|| Error::Precondition("target and seed image disagree below the level".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let jp = jacobian_along(&p, &gamma0)?.map(|x| x.with_cap(u_cap));
    let det = jp.det()?;
    let unit = det
        .shift_down(e)
        .ok_or_else(|| Error::Precondition("projected Jacobian order differs from the Jacobian order".into()))?;
    let unit_inv = unit.inverse().ok_or_else(|| {
        Error::Precondition("projected Jacobian order differs from the Jacobian order".into())
    })?;
    let adj = jp.adjugate()?;

    let zero_u = TruncSeries::from_rationals(Vec::new(), u_cap);
    let mut u: Vec<TruncSeries<Rational>> = vec![zero_u.clone(); d];
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > u_cap + 2 {
            return Err(Error::ResourceLimit("lifting iteration did not stabilize".into()));
        }
        let eta = Arc::new(
            (0..d)
                .map(|j| gamma0.comp(j).plus(&u[j].with_cap(work).shift_up(s)))
                .collect(),
        )?;
        let moved = p.apply(&eta)?;
        let ju = jp.apply(&u)?;
        let mut r = Vec::with_capacity(d);
        for i in 0..d {
            let g = divide_by_t_power(&moved.comp(i).minus(base.comp(i)), s)
                .expect("difference vanishes below s");
            r.push(w[i].minus(&g).plus(&ju[i]));
        }
        let v = adj.apply(&r)?;
        let mut next = Vec::with_capacity(d);
        for (i, vi) in v.iter().enumerate() {
            match divide_by_t_power(vi, e) {
                Some(q) => next.push(q.times(&unit_inv.with_cap(u_cap - e)).with_cap(u_cap)),
                None => {
                    return Ok(LiftOutcome::Infeasible {
                        reason: format!(
                            "projected target violates the linear relations at component {} (order {})",
                            i,
                            vi.order()
                        ),
                    })
                }
            }
        }
        let stable = next
            .iter()
            .zip(&u)
            .all(|(a, b)| a.with_cap(k - s) == b.with_cap(k - s));
        u = next;
        if stable {
            break;
        }
    }
    let eta = Arc::new(
        (0..d)
            .map(|j| gamma0.comp(j).plus(&u[j].with_cap(work).shift_up(s)).with_cap(k))
            .collect(),
    )?;
    let check = map.apply(&eta)?.minus(delta);
    for i in 0..check.dim() {
        if let Order::Exact(o) = check.comp(i).order() {
            return Ok(LiftOutcome::Infeasible {
                reason: format!(
                    "target is not in the image: coordinate {} differs at order {}",
                    map.target.name(i),
                    o
                ),
            });
        }
    }
    Ok(LiftOutcome::Lifted(Lift {
        eta,
        e: e as u32,
        level,
        agreement: s,
        projection: rows,
        iterations,
    }))
}
