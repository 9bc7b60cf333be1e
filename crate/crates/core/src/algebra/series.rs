//! Truncated power series in `t`, arcs, and substitution of polynomials into arcs.
//!
//! A series with cap `K` stores the coefficients of `t^0 .. t^(K-1)`; nothing at
//! degree `K` or above is ever reported. Coefficients live in any [`Ring`]:
//! plain rationals for numeric jets, or polynomials when the jet carries
//! symbolic parameters or unknowns.

use std::fmt;

use num_traits::{One, Zero};

use super::mpoly::{MPoly, Vars};
use super::rational::Rational;
use crate::error::{Error, Result};

/// Commutative ring operations used by series and matrix code.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
}

/// Scalars usable as series coefficients.
pub trait Coeff: Ring + fmt::Display {
    /// The rational `q` in the same ring as `self`.
    fn lift(&self, q: &Rational) -> Self;
    fn as_rational(&self) -> Option<Rational>;
    /// Variables of the coefficient ring (empty for ℚ).
    fn coeff_vars(&self) -> Vars;
    /// The same value as a polynomial in `ring` (variables matched by name).
    fn to_poly(&self, ring: &Vars) -> Result<MPoly>;
}

impl Ring for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
}

impl Coeff for Rational {
    fn lift(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn coeff_vars(&self) -> Vars {
        Vars::empty()
    }
    fn to_poly(&self, ring: &Vars) -> Result<MPoly> {
        Ok(MPoly::constant(ring, self.clone()))
    }
}

impl Ring for MPoly {
    fn zero_like(&self) -> Self {
        MPoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        MPoly::one(self.vars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
}

impl Coeff for MPoly {
    fn lift(&self, q: &Rational) -> Self {
        MPoly::constant(self.vars(), q.clone())
    }
    fn as_rational(&self) -> Option<Rational> {
        self.constant_value()
    }
    fn coeff_vars(&self) -> Vars {
        self.vars().clone()
    }
    fn to_poly(&self, ring: &Vars) -> Result<MPoly> {
        self.to_ring(ring)
    }
}

/// Order of vanishing certified at a finite cap.
///
/// `AtLeast(k)` means every computed coefficient below `k` vanished; the true
/// order may be anything `>= k`, including infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Exact(u32),
    AtLeast(u32),
}

impl Order {
    pub fn exact(self) -> Option<u32> {
        match self {
            Order::Exact(k) => Some(k),
            Order::AtLeast(_) => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Order::Exact(_))
    }

    /// Minimum of two certified orders.
    pub fn min(self, other: Order) -> Order {
        use Order::*;
        match (self, other) {
            (Exact(a), Exact(b)) => Exact(a.min(b)),
            (Exact(a), AtLeast(b)) | (AtLeast(b), Exact(a)) => {
                if a <= b {
                    Exact(a)
                } else {
                    AtLeast(b)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    /// `true` when the order is known to be at most `k`.
    pub fn at_most(self, k: u32) -> bool {
        matches!(self, Order::Exact(a) if a <= k)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Exact(k) => write!(f, "{k}"),
            Order::AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

/// A power series modulo `t^cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C = Rational> {
    coeffs: Vec<C>,
}

impl<C: Ring> TruncSeries<C> {
    /// Series with the given low coefficients, padded or cut to `cap`.
    pub fn new(coeffs: Vec<C>, cap: usize, zero: &C) -> Self {
        assert!(cap >= 1, "series cap must be positive");
        let mut coeffs = coeffs;
        coeffs.truncate(cap);
        while coeffs.len() < cap {
            coeffs.push(zero.zero_like());
        }
        TruncSeries { coeffs }
    }

    pub fn zero(proto: &C, cap: usize) -> Self {
        Self::new(Vec::new(), cap, proto)
    }

    pub fn constant(c: C, cap: usize) -> Self {
        let z = c.zero_like();
        Self::new(vec![c], cap, &z)
    }

    /// `c * t^deg`.
    pub fn monomial(c: C, deg: usize, cap: usize) -> Self {
        let z = c.zero_like();
        let mut v = vec![z.clone(); deg.min(cap)];
        if deg < cap {
            v.push(c);
        }
        Self::new(v, cap, &z)
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero_elem()) {
            Some(k) => Order::Exact(k as u32),
            None => Order::AtLeast(self.cap() as u32),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_elem())
    }

    fn proto(&self) -> C {
        self.coeffs[0].zero_like()
    }

    /// Reduction modulo `t^cap` for `cap <= self.cap()`, zero padding otherwise.
    pub fn with_cap(&self, cap: usize) -> Self {
        Self::new(self.coeffs.clone(), cap, &self.proto())
    }

    /// Multiplication by `t^s`, keeping the cap.
    pub fn shift_up(&self, s: usize) -> Self {
        let z = self.proto();
        let mut v = vec![z.clone(); s.min(self.cap())];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v, self.cap(), &z)
    }

    /// Exact division by `t^s`; the cap drops by `s`. `None` if a low coefficient is nonzero.
    pub fn shift_down(&self, s: usize) -> Option<Self> {
        if s >= self.cap() || self.coeffs[..s].iter().any(|c| !c.is_zero_elem()) {
            return None;
        }
        Some(TruncSeries {
            coeffs: self.coeffs[s..].to_vec(),
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|x| x.times(c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.coeffs[0].one_like(), self.cap());
        for _ in 0..k {
            acc = acc.times(self);
        }
        acc
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> TruncSeries<D> {
        TruncSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl<C: Ring> Ring for TruncSeries<C> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.coeffs[0], self.cap())
    }
    fn one_like(&self) -> Self {
        Self::constant(self.coeffs[0].one_like(), self.cap())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        TruncSeries {
            coeffs: (0..cap).map(|k| self.coeffs[k].plus(&other.coeffs[k])).collect(),
        }
    }
    fn minus(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        TruncSeries {
            coeffs: (0..cap).map(|k| self.coeffs[k].minus(&other.coeffs[k])).collect(),
        }
    }
    fn times(&self, other: &Self) -> Self {
        let cap = self.cap().min(other.cap());
        let mut out: Vec<C> = vec![self.proto(); cap];
        for (i, a) in self.coeffs.iter().take(cap).enumerate() {
            if a.is_zero_elem() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(cap - i).enumerate() {
                if !b.is_zero_elem() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        TruncSeries { coeffs: out }
    }
    fn negate(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
        }
    }
}

impl TruncSeries<Rational> {
    pub fn from_rationals(coeffs: Vec<Rational>, cap: usize) -> Self {
        Self::new(coeffs, cap, &Rational::zero())
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Option<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return None;
        }
        let inv0 = a0.recip();
        let mut out = vec![inv0.clone()];
        for k in 1..self.cap() {
            let mut s = Rational::zero();
            for i in 1..=k {
                s += &self.coeffs[i] * &out[k - i];
            }
            out.push(-(s * &inv0));
        }
        Some(TruncSeries { coeffs: out })
    }
}

impl<C: Coeff> TruncSeries<C> {
    pub fn to_poly_coeffs(&self, ring: &Vars) -> Result<TruncSeries<MPoly>> {
        Ok(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.to_poly(ring))
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_rationals(&self) -> Option<TruncSeries<Rational>> {
        Some(TruncSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.as_rational())
                .collect::<Option<_>>()?,
        })
    }

    /// Renders as `c0 + c1*t + ...` in the variable `t`.
    pub fn render(&self, var: &str) -> String {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() {
                continue;
            }
            let body = c.to_string();
            let compound = body.contains(' ') || body[1..].contains('-');
            let coeff = if compound { format!("({body})") } else { body };
            let text = match (k, coeff.as_str()) {
                (0, _) => coeff,
                (_, "1") => power(var, k),
                (_, "-1") => format!("-{}", power(var, k)),
                _ => format!("{coeff}*{}", power(var, k)),
            };
            parts.push(text);
        }
        if parts.is_empty() {
            return "0".to_string();
        }
        let mut out = parts[0].clone();
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => {
                    out.push_str(" - ");
                    out.push_str(rest);
                }
                None => {
                    out.push_str(" + ");
                    out.push_str(p);
                }
            }
        }
        out
    }
}

fn power(var: &str, k: usize) -> String {
    if k == 1 {
        var.to_string()
    } else {
        format!("{var}^{k}")
    }
}

/// A vector of series sharing one cap: an arc truncated modulo `t^cap`, or an
/// `n`-jet when `cap = n + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Arc<C = Rational> {
    comps: Vec<TruncSeries<C>>,
}

impl<C: Ring> Arc<C> {
    pub fn new(comps: Vec<TruncSeries<C>>) -> Result<Self> {
        let first = comps
            .first()
            .ok_or_else(|| Error::InvalidData("an arc needs at least one component".into()))?;
        if comps.iter().any(|c| c.cap() != first.cap()) {
            return Err(Error::InvalidData("arc components must share one cap".into()));
        }
        Ok(Arc { comps })
    }

    pub fn cap(&self) -> usize {
        self.comps[0].cap()
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comp(&self, i: usize) -> &TruncSeries<C> {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[TruncSeries<C>] {
        &self.comps
    }

    pub fn with_cap(&self, cap: usize) -> Self {
        Arc {
            comps: self.comps.iter().map(|c| c.with_cap(cap)).collect(),
        }
    }

    /// The base point `γ(0)`.
    pub fn origin(&self) -> Vec<C> {
        self.comps.iter().map(|c| c.coeff(0).clone()).collect()
    }

    pub fn plus(&self, other: &Self) -> Self {
        Arc {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn minus(&self, other: &Self) -> Self {
        Arc {
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    /// Minimum order over all components.
    pub fn order(&self) -> Order {
        self.comps
            .iter()
            .map(|c| c.order())
            .reduce(Order::min)
            .expect("nonempty arc")
    }
}

impl<C: Coeff> Arc<C> {
    pub fn to_poly_coeffs(&self, ring: &Vars) -> Result<Arc<MPoly>> {
        Ok(Arc {
            comps: self
                .comps
                .iter()
                .map(|c| c.to_poly_coeffs(ring))
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_rationals(&self) -> Option<Arc<Rational>> {
        Some(Arc {
            comps: self
                .comps
                .iter()
                .map(|c| c.to_rationals())
                .collect::<Option<_>>()?,
        })
    }

    pub fn coeff_vars(&self) -> Vars {
        self.comps[0].coeff(0).coeff_vars()
    }

    pub fn render(&self) -> Vec<String> {
        self.comps.iter().map(|c| c.render("t")).collect()
    }
}

impl Arc<Rational> {
    /// Arc from rows of low-order coefficients.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cap: usize) -> Result<Self> {
        Arc::new(
            rows.into_iter()
                .map(|r| TruncSeries::from_rationals(r, cap))
                .collect(),
        )
    }
}

/// `f(γ(t))` modulo `t^K`, `K = γ.cap()`.
pub fn substitute_series<C: Coeff>(f: &MPoly, arc: &Arc<C>) -> Result<TruncSeries<C>> {
    let n = f.vars().len();
    if n != arc.dim() {
        return Err(Error::VariableMismatch {
            expected: format!("{} arc components for {}", n, f.vars()),
            found: format!("{} components", arc.dim()),
        });
    }
    let cap = arc.cap();
    let proto = arc.comp(0).coeff(0).clone();
    let mut powers: Vec<Vec<TruncSeries<C>>> =
        vec![vec![TruncSeries::constant(proto.one_like(), cap)]; n];
    let mut acc = TruncSeries::zero(&proto, cap);
    for (exps, c) in f.terms() {
        let mut term = TruncSeries::constant(proto.lift(c), cap);
        for (i, &k) in exps.iter().enumerate() {
            if k == 0 {
                continue;
            }
            while powers[i].len() <= k as usize {
                let next = powers[i].last().unwrap().times(arc.comp(i));
                powers[i].push(next);
            }
            term = term.times(&powers[i][k as usize]);
        }
        acc = acc.plus(&term);
    }
    Ok(acc)
}

/// Image of an arc under a polynomial map given by its components.
pub fn map_arc<C: Coeff>(components: &[MPoly], arc: &Arc<C>) -> Result<Arc<C>> {
    Arc::new(
        components
            .iter()
            .map(|f| substitute_series(f, arc))
            .collect::<Result<_>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::rational::int;
    use proptest::prelude::*;

    fn q(v: &[i64], cap: usize) -> TruncSeries {
        TruncSeries::from_rationals(v.iter().map(|&x| int(x)).collect(), cap)
    }

    #[test]
    fn cusp_parametrization_vanishes() {
        let v = Vars::new(["x", "y"]);
        let f = parse_poly("y^2 - x^3", &v).unwrap();
        let arc = Arc::new(vec![q(&[0, 0, 1], 10), q(&[0, 0, 0, 1], 10)]).unwrap();
        let s = substitute_series(&f, &arc).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.cap(), 10);
        assert_eq!(s.order(), Order::AtLeast(10));
    }

    #[test]
    fn whitney_with_symbolic_coefficients() {
        let amb = Vars::new(["x", "y", "z"]);
        let params = Vars::new(["a", "b"]);
        let f = parse_poly("x^2 - z*y^2", &amb).unwrap();
        let p = |s: &str| parse_poly(s, &params).unwrap();
        let cap = 7;
        let arc = Arc::new(vec![
            TruncSeries::monomial(p("b"), 3, cap),
            TruncSeries::monomial(p("1"), 2, cap),
            TruncSeries::monomial(p("a"), 2, cap),
        ])
        .unwrap();
        let s = substitute_series(&f, &arc).unwrap();
        let expected = TruncSeries::monomial(p("b^2 - a"), 6, cap);
        assert_eq!(s, expected);
        assert_eq!(s.render("t"), "(b^2 - a)*t^6");
    }

    #[test]
    fn identity_substitution() {
        let v = Vars::new(["x"]);
        let f = parse_poly("x", &v).unwrap();
        let arc = Arc::new(vec![q(&[1, 1], 2)]).unwrap();
        assert_eq!(substitute_series(&f, &arc).unwrap(), q(&[1, 1], 2));
    }

    #[test]
    fn mismatched_arc_is_rejected() {
        let v = Vars::new(["x", "y"]);
        let f = parse_poly("x*y", &v).unwrap();
        let arc = Arc::new(vec![q(&[1], 3)]).unwrap();
        assert!(matches!(
            substitute_series(&f, &arc),
            Err(Error::VariableMismatch { .. })
        ));
    }

    #[test]
    fn orders_and_shifts() {
        let s = q(&[0, 0, 3, 1], 6);
        assert_eq!(s.order(), Order::Exact(2));
        assert_eq!(s.shift_down(2).unwrap(), q(&[3, 1], 4));
        assert!(s.shift_down(3).is_none());
        assert_eq!(s.shift_up(3), q(&[0, 0, 0, 0, 0, 3], 6));
        assert_eq!(Order::Exact(3).min(Order::AtLeast(2)), Order::AtLeast(2));
        assert_eq!(Order::Exact(3).min(Order::AtLeast(7)), Order::Exact(3));
        assert_eq!(Order::AtLeast(9).to_string(), ">=9");
    }

    #[test]
    fn series_inverse() {
        let s = q(&[1, 1], 5);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, q(&[1, -1, 1, -1, 1], 5));
        assert_eq!(s.times(&inv), q(&[1], 5));
    }

    fn arb_series(cap: usize) -> impl Strategy<Value = TruncSeries> {
        prop::collection::vec(-3i64..4, cap).prop_map(move |v| q(&v, cap))
    }

    fn arb_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec(((0u32..3, 0u32..3), -4i64..5), 0..5).prop_map(|terms| {
            MPoly::from_terms(
                &Vars::new(["x", "y"]),
                terms.into_iter().map(|((a, b), c)| (vec![a, b], int(c))),
            )
        })
    }

    proptest! {
        #[test]
        fn substitution_is_a_ring_homomorphism(
            f in arb_poly(), g in arb_poly(), a in arb_series(6), b in arb_series(6)
        ) {
            let arc = Arc::new(vec![a, b]).unwrap();
            let sf = substitute_series(&f, &arc).unwrap();
            let sg = substitute_series(&g, &arc).unwrap();
            prop_assert_eq!(substitute_series(&(&f * &g), &arc).unwrap(), sf.times(&sg));
            prop_assert_eq!(substitute_series(&(&f + &g), &arc).unwrap(), sf.plus(&sg));
        }
    }
}
