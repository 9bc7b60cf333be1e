//! Virtual Poincaré polynomial bookkeeping over normal-crossing divisor data.
//!
//! For a map with exceptional divisors `E_i`, a multi-index `j` records the
//! contact order of an arc with each `E_i`. The strata `X_{j,n}` of `n`-jets
//! have virtual Poincaré polynomial
//! `β(E_J°) (u − 1)^|J| u^(nd − Σ (ν_i + 1) j_i)`, where `J` is the support of `j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::parse::parse_poly;
use crate::algebra::{MPoly, Rational, Vars};
use crate::error::{Error, Result};

/// A polynomial in `ℤ[u]`, stored without trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vpp {
    coeffs: Vec<BigInt>,
}

impl Vpp {
    pub fn new(coeffs: Vec<BigInt>) -> Vpp {
        let mut v = Vpp { coeffs };
        v.trim();
        v
    }

    pub fn from_i64(coeffs: &[i64]) -> Vpp {
        Vpp::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Vpp {
        Vpp::default()
    }

    pub fn one() -> Vpp {
        Vpp::from_i64(&[1])
    }

    /// `u^k`.
    pub fn u_pow(k: usize) -> Vpp {
        let mut c = vec![BigInt::zero(); k];
        c.push(BigInt::one());
        Vpp { coeffs: c }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Vpp) -> Vpp {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Vpp::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vpp) -> Vpp {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, c: &BigInt) -> Vpp {
        Vpp::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Vpp) -> Vpp {
        if self.is_zero() || other.is_zero() {
            return Vpp::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Vpp::new(out)
    }

    pub fn pow(&self, k: usize) -> Vpp {
        (0..k).fold(Vpp::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, u: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * u + c)
    }

    fn to_mpoly(&self) -> MPoly {
        let v = Vars::new(["u"]);
        MPoly::from_terms(
            &v,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (vec![i as u32], Rational::from_integer(c.clone()))),
        )
    }

    /// Parses an integer-coefficient polynomial in `u`.
    pub fn parse(source: &str) -> Result<Vpp> {
        let v = Vars::new(["u"]);
        let p = parse_poly(source, &v)?;
        let mut coeffs = Vec::new();
        for (e, c) in p.terms() {
            if !c.is_integer() {
                return Err(Error::InvalidData(format!(
                    "virtual Poincaré polynomial `{source}` has a non-integer coefficient"
                )));
            }
            let k = e[0] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigInt::zero());
            }
            coeffs[k] = c.to_integer();
        }
        Ok(Vpp::new(coeffs))
    }
}

impl fmt::Display for Vpp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_mpoly().to_string();
        f.write_str(&s)
    }
}

/// Which of the two maps the multiplicities refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Sigma,
    SigmaTilde,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divisor {
    pub name: String,
    pub nu: u32,
    pub lambda: u32,
    pub nu_tilde: Option<u32>,
    pub lambda_tilde: Option<u32>,
}

/// Normal-crossing divisor data with the β values of the open strata `E_J°`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorData {
    d: u32,
    divisors: Vec<Divisor>,
    beta: BTreeMap<BTreeSet<usize>, Vpp>,
}

impl DivisorData {
    /// Validates and builds divisor data. Zero β entries are dropped.
    pub fn new(d: u32, divisors: Vec<Divisor>, beta: BTreeMap<BTreeSet<usize>, Vpp>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for div in &divisors {
            if !names.insert(div.name.as_str()) {
                return Err(Error::InvalidData(format!("divisor `{}` declared twice", div.name)));
            }
            if div.nu < 1 {
                return Err(Error::InvalidData(format!("divisor `{}` needs nu >= 1", div.name)));
            }
            if div.nu_tilde == Some(0) {
                return Err(Error::InvalidData(format!("divisor `{}` needs nutilde >= 1", div.name)));
            }
        }
        let tilde = divisors.iter().filter(|d| d.nu_tilde.is_some()).count();
        if tilde != 0 && tilde != divisors.len() {
            return Err(Error::InvalidData(
                "nutilde must be given for every divisor or for none".into(),
            ));
        }
        let mut kept = BTreeMap::new();
        for (set, v) in beta {
            if let Some(&i) = set.iter().find(|&&i| i >= divisors.len()) {
                return Err(Error::OutOfRange(format!("stratum refers to divisor index {i}")));
            }
            if v.is_zero() {
                continue;
            }
            let want = d as i64 - set.len() as i64;
            if v.degree().map(|x| x as i64) != Some(want) {
                return Err(Error::InvalidData(format!(
                    "beta of stratum {} has degree {}, expected {}",
                    render_set(&set, &divisors),
                    v.degree().unwrap_or(0),
                    want
                )));
            }
            if !v.leading().is_some_and(|c| c.is_positive()) {
                return Err(Error::InvalidData(format!(
                    "beta of stratum {} has a non-positive leading coefficient",
                    render_set(&set, &divisors)
                )));
            }
            kept.insert(set, v);
        }
        Ok(DivisorData {
            d,
            divisors,
            beta: kept,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    pub fn beta_table(&self) -> &BTreeMap<BTreeSet<usize>, Vpp> {
        &self.beta
    }

    pub fn has_tilde(&self) -> bool {
        self.divisors.first().is_some_and(|d| d.nu_tilde.is_some())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.divisors.iter().position(|d| d.name == name)
    }

    fn nu(&self, i: usize, which: Which) -> Result<u32> {
        let div = &self.divisors[i];
        match which {
            Which::Sigma => Ok(div.nu),
            Which::SigmaTilde => div
                .nu_tilde
                .ok_or_else(|| Error::Precondition("second-map multiplicities are missing".into())),
        }
    }

    fn lambda(&self, i: usize, which: Which) -> u32 {
        let div = &self.divisors[i];
        match which {
            Which::Sigma => div.lambda,
            Which::SigmaTilde => div.lambda_tilde.unwrap_or(div.lambda),
        }
    }

    /// `c = max(2 ν_max, λ_max)`, at least 1.
    pub fn c(&self, which: Which) -> Result<u32> {
        let mut c = 1;
        for i in 0..self.divisors.len() {
            c = c.max(2 * self.nu(i, which)?).max(self.lambda(i, which));
        }
        Ok(c)
    }

    /// β(E_J°), zero when the stratum is absent.
    pub fn beta_of(&self, set: &BTreeSet<usize>) -> Vpp {
        self.beta.get(set).cloned().unwrap_or_default()
    }
}

fn render_set(set: &BTreeSet<usize>, divisors: &[Divisor]) -> String {
    let names: Vec<&str> = set.iter().map(|&i| divisors[i].name.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

/// Contact orders `j_i` with the divisors, in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(len: usize) -> MultiIndex {
        MultiIndex(vec![0; len])
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &j)| j > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `s_j = Σ j_i`.
    pub fn s(&self) -> u64 {
        self.0.iter().map(|&j| j as u64).sum()
    }

    /// `e(j) = Σ ν_i j_i`.
    pub fn e(&self, data: &DivisorData, which: Which) -> Result<u64> {
        let mut acc = 0;
        for (i, &j) in self.0.iter().enumerate() {
            acc += data.nu(i, which)? as u64 * j as u64;
        }
        Ok(acc)
    }

    /// `e'(j) = Σ λ_i j_i`.
    pub fn eprime(&self, data: &DivisorData, which: Which) -> u64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &j)| data.lambda(i, which) as u64 * j as u64)
            .sum()
    }

    /// Parses `E1=1,E2=0`; unnamed divisors default to 0. An empty string is `j = 0`.
    pub fn parse(source: &str, data: &DivisorData) -> Result<MultiIndex> {
        let mut j = vec![0; data.divisors.len()];
        for part in source.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidData(format!("expected NAME=VALUE, found `{part}`")))?;
            let i = data
                .index_of(name.trim())
                .ok_or_else(|| Error::UnknownVariable(name.trim().to_string()))?;
            j[i] = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidData(format!("bad contact order `{}`", value.trim())))?;
        }
        Ok(MultiIndex(j))
    }

    pub fn render(&self, data: &DivisorData) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, j)| format!("{}={}", data.divisors[i].name, j))
            .collect();
        parts.join(",")
    }
}

fn in_an(j: &MultiIndex, data: &DivisorData, n: u64, which: Which) -> Result<bool> {
    Ok(2 * j.e(data, which)? <= n && j.eprime(data, which) <= n)
}

/// `A_n`: multi-indices with `2 e(j) <= n` and `e'(j) <= n` whose support is a
/// stratum present in the table, ordered by `s_j` and then lexicographically.
pub fn enumerate_an(data: &DivisorData, n: u64, which: Which) -> Result<Vec<MultiIndex>> {
    let k = data.divisors.len();
    let mut bounds = Vec::with_capacity(k);
    for i in 0..k {
        bounds.push((n / (2 * data.nu(i, which)? as u64)) as u32);
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    loop {
        let j = MultiIndex(cur.clone());
        if data.beta.contains_key(&j.support()) && in_an(&j, data, n, which)? {
            out.push(j);
        }
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.s().cmp(&b.s()).then_with(|| a.cmp(b)));
                return Ok(out);
            }
            i -= 1;
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
        }
    }
}

fn check_member(data: &DivisorData, j: &MultiIndex, n: u64, which: Which) -> Result<()> {
    if j.0.len() != data.divisors.len() {
        return Err(Error::InvalidData(format!(
            "multi-index has {} entries for {} divisors",
            j.0.len(),
            data.divisors.len()
        )));
    }
    if !in_an(j, data, n, which)? {
        return Err(Error::Precondition(format!(
            "multi-index {} is not in A_{n}",
            j.render(data)
        )));
    }
    Ok(())
}

/// `β(X_{j,n})`.
pub fn beta_stratum(data: &DivisorData, j: &MultiIndex, n: u64, which: Which) -> Result<Vpp> {
    check_member(data, j, n, which)?;
    let mut drop = 0i64;
    for (i, &ji) in j.0.iter().enumerate() {
        drop += (data.nu(i, which)? as i64 + 1) * ji as i64;
    }
    let exp = n as i64 * data.d as i64 - drop;
    if exp < 0 {
        return Err(Error::Precondition(format!(
            "exponent n*d - Σ(ν+1)j = {exp} is negative"
        )));
    }
    let set = j.support();
    Ok(data
        .beta_of(&set)
        .mul(&Vpp::from_i64(&[-1, 1]).pow(set.len()))
        .mul(&Vpp::u_pow(exp as usize)))
}

/// `dim X_{j,n} = d(n+1) − s_j − Σ ν_i j_i`.
pub fn dim_stratum(data: &DivisorData, j: &MultiIndex, n: u64, which: Which) -> Result<i64> {
    check_member(data, j, n, which)?;
    Ok(data.d as i64 * (n as i64 + 1) - j.s() as i64 - j.e(data, which)? as i64)
}

/// `d(n+1) − n/c` with `c = max(2 ν_max, λ_max)`.
pub fn zn_degree_bound(data: &DivisorData, n: u64, which: Which) -> Result<Rational> {
    let c = data.c(which)?;
    Ok(Rational::from_integer(BigInt::from(data.d as u64 * (n + 1)))
        - Rational::new(BigInt::from(n), BigInt::from(c)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub n: u64,
    /// `K_n`, sorted.
    pub k_set: Vec<u64>,
    pub k_min: Option<u64>,
    /// `d(n+1) − k_n` when `K_n` is nonempty.
    pub deg_q: Option<i64>,
    /// `d(n+1) − n / max(c, c̃, 1)`.
    pub threshold: Rational,
    /// `k_n` constant over the trailing stabilization window.
    pub stabilized: bool,
    /// `deg Q_n` strictly exceeds the threshold with `k_n` stabilized.
    pub forced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Least level at which the degree argument refutes the multiplicities.
    ContradictionAt(u64),
    /// `K_n` empty at every level; `one_sided` when some `ν_i < ν̃_i`.
    NoDiscrepancy { one_sided: bool },
    /// `K_n` was nonempty somewhere but no contradiction was forced up to `n_max`.
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub c: u32,
    pub c_tilde: u32,
    pub c_bar: u32,
    pub window: u32,
    pub rows: Vec<CompareRow>,
    pub verdict: Verdict,
}

/// Statement of the step the degree argument takes on trust.
pub const POSITIVITY_ASSUMPTION: &str =
    "the leading coefficient of Q_n is assumed positive; it depends on cancellation among strata not recoverable from divisor data";

/// Degree comparison between the strata of `σ` and `σ̃` for `n <= n_max`.
pub fn compare_multiplicities(data: &DivisorData, n_max: u64) -> Result<CompareReport> {
    if !data.has_tilde() {
        return Err(Error::Precondition(
            "comparison needs nutilde for every divisor".into(),
        ));
    }
    let c = data.c(Which::Sigma)?;
    let c_tilde = data.c(Which::SigmaTilde)?;
    let c_bar = c.max(c_tilde).max(1);
    let window = c.max(c_tilde);
    let d = data.d as i64;
    let mut rows: Vec<CompareRow> = Vec::new();
    let mut verdict = None;
    for n in 0..=n_max {
        let a = enumerate_an(data, n, Which::Sigma)?;
        let mut k_set = BTreeSet::new();
        for j in &a {
            if !in_an(j, data, n, Which::SigmaTilde)? {
                continue;
            }
            let diff = j.e(data, Which::Sigma)? as i64 - j.e(data, Which::SigmaTilde)? as i64;
            if diff > 0 {
                k_set.insert(j.s() + j.e(data, Which::SigmaTilde)?);
            }
        }
        let k_min = k_set.iter().next().copied();
        let deg_q = k_min.map(|k| d * (n as i64 + 1) - k as i64);
        let threshold = Rational::from_integer(BigInt::from(d * (n as i64 + 1)))
            - Rational::new(BigInt::from(n), BigInt::from(c_bar));
        let w = window as usize;
        let stabilized = k_min.is_some()
            && rows.len() + 1 >= w
            && rows[rows.len() + 1 - w..].iter().all(|r| r.k_min == k_min);
        let forced = stabilized
            && deg_q.is_some_and(|q| Rational::from_integer(BigInt::from(q)) > threshold);
        if forced && verdict.is_none() {
            verdict = Some(Verdict::ContradictionAt(n));
        }
        rows.push(CompareRow {
            n,
            k_set: k_set.into_iter().collect(),
            k_min,
            deg_q,
            threshold,
            stabilized,
            forced,
        });
    }
    let verdict = verdict.unwrap_or_else(|| {
        if rows.iter().all(|r| r.k_set.is_empty()) {
            Verdict::NoDiscrepancy {
                one_sided: data
                    .divisors
                    .iter()
                    .any(|div| div.nu_tilde.is_some_and(|t| div.nu < t)),
            }
        } else {
            Verdict::Undecided
        }
    });
    Ok(CompareReport {
        c,
        c_tilde,
        c_bar,
        window,
        rows,
        verdict,
    })
}
