//! Exponent vectors and monomial orders.
//!
//! Every supported order is encoded as an integer sort key that is linear in
//! the exponent vector, so `key(a + b) = key(a) + key(b)` and comparing
//! monomials reduces to lexicographic comparison of keys.

use std::cmp::Ordering;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MonomialOrder {
    Lex,
    #[default]
    DegRevLex,
    /// Degree-reverse-lexicographic on the first `k` variables, ties broken by
    /// degree-reverse-lexicographic on the rest. An elimination order for the
    /// first block.
    Block(usize),
}

fn push_degrevlex(out: &mut Vec<i64>, exps: &[u32]) {
    out.push(exps.iter().map(|&e| e as i64).sum());
    out.extend(exps.iter().rev().map(|&e| -(e as i64)));
}

impl MonomialOrder {
    pub fn key(&self, exps: &[u32]) -> Vec<i64> {
        let mut out = Vec::with_capacity(exps.len() + 2);
        match *self {
            MonomialOrder::Lex => out.extend(exps.iter().map(|&e| e as i64)),
            MonomialOrder::DegRevLex => push_degrevlex(&mut out, exps),
            MonomialOrder::Block(k) => {
                let k = k.min(exps.len());
                push_degrevlex(&mut out, &exps[..k]);
                push_degrevlex(&mut out, &exps[k..]);
            }
        }
        out
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }
}

pub fn total_degree(exps: &[u32]) -> u32 {
    exps.iter().sum()
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

pub fn add(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `a - b`, assuming `b | a`.
pub fn sub(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
