//! Buchberger's algorithm with the sugar strategy and the Gebauer–Möller
//! pair criteria.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::algebra::monomial::{self, MonomialOrder};
use crate::algebra::{MPoly, Rational, Vars};
use crate::error::{Error, Result};

/// Hard caps on a basis computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest total degree allowed in an intermediate basis element.
    pub max_degree: u32,
    /// Largest number of polynomials ever added to the basis.
    pub max_basis: usize,
    /// Largest number of elementary reduction steps.
    pub max_steps: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 50,
            max_basis: 5000,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
struct Term {
    key: Box<[i64]>,
    exps: Box<[u32]>,
    c: Rational,
}

/// Terms sorted by decreasing key.
#[derive(Clone, Debug)]
struct Poly {
    terms: Vec<Term>,
}

impl Poly {
    fn from_mpoly(f: &MPoly, order: MonomialOrder) -> Poly {
        let mut terms: Vec<Term> = f
            .terms()
            .map(|(e, c)| Term {
                key: order.key(e).into(),
                exps: e.clone().into(),
                c: c.clone(),
            })
            .collect();
        terms.sort_by(|a, b| b.key.cmp(&a.key));
        Poly { terms }
    }

    fn to_mpoly(&self, vars: &Vars) -> MPoly {
        MPoly::from_terms(vars, self.terms.iter().map(|t| (t.exps.to_vec(), t.c.clone())))
    }

    fn lm(&self) -> &Term {
        &self.terms[0]
    }

    fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| monomial::total_degree(&t.exps))
            .max()
            .unwrap_or(0)
    }

    fn make_monic(&mut self) {
        let inv = self.terms[0].c.recip();
        if !inv.is_one() {
            for t in &mut self.terms {
                t.c *= &inv;
            }
        }
    }
}

fn add_keys(a: &[i64], b: &[i64]) -> Box<[i64]> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_keys(a: &[i64], b: &[i64]) -> Box<[i64]> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a - c * x^m * g`, merging sorted term lists.
fn sub_scaled(a: &[Term], c: &Rational, mexp: &[u32], mkey: &[i64], g: &[Term]) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + g.len());
    let mut i = 0;
    let mut gi = g.iter().map(|t| Term {
        key: add_keys(&t.key, mkey),
        exps: monomial::add(&t.exps, mexp).into(),
        c: -(&t.c * c),
    });
    let mut pending = gi.next();
    loop {
        match (a.get(i), pending.take()) {
            (None, None) => break,
            (Some(_), None) => {
                out.extend_from_slice(&a[i..]);
                break;
            }
            (None, Some(y)) => {
                out.push(y);
                out.extend(gi.by_ref());
                break;
            }
            (Some(x), Some(y)) => match x.key.cmp(&y.key) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                    pending = Some(y);
                }
                Ordering::Less => {
                    out.push(y);
                    pending = gi.next();
                }
                Ordering::Equal => {
                    let s = &x.c + &y.c;
                    if !s.is_zero() {
                        out.push(Term {
                            key: y.key,
                            exps: y.exps,
                            c: s,
                        });
                    }
                    i += 1;
                    pending = gi.next();
                }
            },
        }
    }
    out
}

struct Budget {
    steps: u64,
    limits: Limits,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Error::ResourceLimit(format!(
                "more than {} reduction steps",
                self.limits.max_steps
            )));
        }
        Ok(())
    }
}

/// Full reduction of `f` by monic divisors.
fn reduce(f: Poly, divisors: &[&Poly], budget: &mut Budget) -> Result<Poly> {
    let mut rem = Vec::new();
    let mut p = f.terms;
    let mut pos = 0;
    while pos < p.len() {
        let lead = &p[pos];
        let hit = divisors
            .iter()
            .find(|g| monomial::divides(&g.lm().exps, &lead.exps));
        match hit {
            Some(g) => {
                budget.tick()?;
                let mexp = monomial::sub(&lead.exps, &g.lm().exps);
                let mkey = sub_keys(&lead.key, &g.lm().key);
                let c = lead.c.clone();
                // The leading terms cancel exactly; skip them.
                p = sub_scaled(&p[pos + 1..], &c, &mexp, &mkey, &g.terms[1..]);
                pos = 0;
            }
            None => {
                rem.push(p[pos].clone());
                pos += 1;
            }
        }
    }
    Ok(Poly { terms: rem })
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Box<[u32]>,
    key: Box<[i64]>,
    sugar: u32,
}

struct Engine {
    order: MonomialOrder,
    polys: Vec<Poly>,
    sugar: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    budget: Budget,
}

impl Engine {
    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.polys[i].lm().exps, &self.polys[j].lm().exps);
        let lcm = monomial::lcm(a, b);
        let key = self.order.key(&lcm);
        let d = monomial::total_degree(&lcm);
        let sugar = (self.sugar[i] + d - monomial::total_degree(a))
            .max(self.sugar[j] + d - monomial::total_degree(b));
        Pair {
            i,
            j,
            lcm: lcm.into(),
            key: key.into(),
            sugar,
        }
    }

    /// Adds polynomial `h` (index into `polys`) and updates pairs.
    fn update(&mut self, h: usize) {
        let lm_h = self.polys[h].lm().exps.clone();
        let candidates: Vec<Pair> = self.active.iter().map(|&g| self.make_pair(h, g)).collect();
        let is_coprime = |p: &Pair, polys: &[Poly]| {
            monomial::coprime(&lm_h, &polys[p.j].lm().exps)
        };

        // Drop a candidate when a later candidate or an already kept one has an
        // lcm dividing its own; coprime candidates always survive this stage.
        let mut kept: Vec<Pair> = Vec::new();
        for (k, p) in candidates.iter().enumerate() {
            let dominated = candidates[k + 1..]
                .iter()
                .chain(kept.iter())
                .any(|q| monomial::divides(&q.lcm, &p.lcm));
            if is_coprime(p, &self.polys) || !dominated {
                kept.push(p.clone());
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|p| !is_coprime(p, &self.polys))
            .collect();

        let polys = &self.polys;
        self.pairs.retain(|p| {
            !(monomial::divides(&lm_h, &p.lcm)
                && monomial::lcm(&polys[p.i].lm().exps, &lm_h)[..] != p.lcm[..]
                && monomial::lcm(&lm_h, &polys[p.j].lm().exps)[..] != p.lcm[..])
        });
        self.pairs.extend(new_pairs);
        self.active
            .retain(|&g| !monomial::divides(&lm_h, &polys[g].lm().exps));
        self.active.push(h);
    }

    fn add(&mut self, mut p: Poly, sugar: u32) -> Result<usize> {
        p.make_monic();
        if p.degree() > self.budget.limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "basis element of degree {} exceeds the cap {}",
                p.degree(),
                self.budget.limits.max_degree
            )));
        }
        if self.polys.len() >= self.budget.limits.max_basis {
            return Err(Error::ResourceLimit(format!(
                "basis grew beyond {} elements",
                self.budget.limits.max_basis
            )));
        }
        self.polys.push(p);
        self.sugar.push(sugar);
        let h = self.polys.len() - 1;
        self.update(h);
        Ok(h)
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| a.key.cmp(&b.key))
                    .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn spoly(&self, p: &Pair) -> Poly {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let mf = monomial::sub(&p.lcm, &f.lm().exps);
        let kf = sub_keys(&p.key, &f.lm().key);
        let mg = monomial::sub(&p.lcm, &g.lm().exps);
        let kg = sub_keys(&p.key, &g.lm().key);
        let scaled_f = sub_scaled(&[], &-Rational::one(), &mf, &kf, &f.terms[1..]);
        Poly {
            terms: sub_scaled(&scaled_f, &Rational::one(), &mg, &kg, &g.terms[1..]),
        }
    }
}

/// Reduced Gröbner basis of the polynomials `gens` (all over `vars`), monic,
/// sorted by increasing leading monomial.
pub fn groebner_basis(
    gens: &[MPoly],
    vars: &Vars,
    order: MonomialOrder,
    limits: Limits,
) -> Result<Vec<MPoly>> {
    let mut eng = Engine {
        order,
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        budget: Budget { steps: 0, limits },
    };
    let mut inputs: Vec<Poly> = gens
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| Poly::from_mpoly(f, order))
        .collect();
    inputs.sort_by(|a, b| a.lm().key.cmp(&b.lm().key));
    for f in inputs {
        if f.lm().exps.iter().all(|&e| e == 0) {
            return Ok(vec![MPoly::one(vars)]);
        }
        let divisors: Vec<&Poly> = eng.active.iter().map(|&g| &eng.polys[g]).collect();
        let sugar = f.degree();
        let r = reduce(f, &divisors, &mut eng.budget)?;
        if r.terms.is_empty() {
            continue;
        }
        if r.lm().exps.iter().all(|&e| e == 0) {
            return Ok(vec![MPoly::one(vars)]);
        }
        eng.add(r, sugar)?;
    }
    while let Some(p) = eng.next_pair() {
        let s = eng.spoly(&p);
        let divisors: Vec<&Poly> = eng.active.iter().map(|&g| &eng.polys[g]).collect();
        let r = reduce(s, &divisors, &mut eng.budget)?;
        if r.terms.is_empty() {
            continue;
        }
        if r.lm().exps.iter().all(|&e| e == 0) {
            return Ok(vec![MPoly::one(vars)]);
        }
        eng.add(r, p.sugar)?;
    }

    let mut active: Vec<Poly> = eng.active.iter().map(|&g| eng.polys[g].clone()).collect();
    active.sort_by(|a, b| a.lm().key.cmp(&b.lm().key));
    let mut reduced = Vec::with_capacity(active.len());
    for k in 0..active.len() {
        let others: Vec<&Poly> = active
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != k)
            .map(|(_, p)| p)
            .collect();
        let head = Poly {
            terms: vec![active[k].terms[0].clone()],
        };
        let tail = reduce(
            Poly {
                terms: active[k].terms[1..].to_vec(),
            },
            &others,
            &mut eng.budget,
        )?;
        let mut g = head;
        g.terms.extend(tail.terms);
        g.make_monic();
        reduced.push(g.to_mpoly(vars));
    }
    Ok(reduced)
}

/// Remainder of `f` on division by a Gröbner basis `basis` (monic) under `order`.
pub fn reduce_by(f: &MPoly, basis: &[MPoly], order: MonomialOrder, limits: Limits) -> Result<MPoly> {
    let divisors: Vec<Poly> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut p = Poly::from_mpoly(g, order);
            p.make_monic();
            p
        })
        .collect();
    let refs: Vec<&Poly> = divisors.iter().collect();
    let mut budget = Budget { steps: 0, limits };
    let r = reduce(Poly::from_mpoly(f, order), &refs, &mut budget)?;
    Ok(r.to_mpoly(f.vars()))
}
