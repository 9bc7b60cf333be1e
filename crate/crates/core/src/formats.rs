//! Line-oriented text formats for ideals, jets and arcs, maps, series
//! matrices and divisor data.
//!
//! Every format ignores blank lines and `#` comments. Header lines have the
//! form `key: value`.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::parse::parse_poly;
use crate::algebra::series::{Arc, TruncSeries};
use crate::algebra::{MPoly, Matrix, Rational, Vars};
use crate::arc_analysis::PolyMap;
use crate::error::{Error, Result};
use crate::groebner::Ideal;
use crate::motivic::{Divisor, DivisorData, Vpp};

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn at_line<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { offset, message } => Error::Parse {
            offset,
            message: format!("line {line}: {message}"),
        },
        Error::InvalidData(m) => Error::InvalidData(format!("line {line}: {m}")),
        other => other,
    })
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::InvalidData(format!("line {line}: {}", msg.into()))
}

fn split_header(line: usize, body: &str) -> Result<(&str, &str)> {
    body.split_once(':')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| bad(line, format!("expected `key: value`, found `{body}`")))
}

fn names(value: &str) -> Vec<String> {
    value.split_whitespace().map(str::to_string).collect()
}

fn check_names(line: usize, list: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for n in list {
        let ok = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(bad(line, format!("invalid variable name `{n}`")));
        }
        if !seen.insert(n.as_str()) {
            return Err(bad(line, format!("variable `{n}` declared twice")));
        }
    }
    Ok(())
}

/// `vars: x y z`, optional `params: a b`, then `gen: <poly>` lines.
///
/// The ideal lives in the ring of the variables followed by the parameters.
pub fn parse_ideal(text: &str) -> Result<Ideal> {
    let mut vars: Option<Vec<String>> = None;
    let mut params: Vec<String> = Vec::new();
    let mut gens: Vec<(usize, String)> = Vec::new();
    for (ln, body) in lines(text) {
        let (key, value) = split_header(ln, body)?;
        match key {
            "vars" => {
                if vars.is_some() {
                    return Err(bad(ln, "duplicate `vars` line"));
                }
                if !gens.is_empty() {
                    return Err(bad(ln, "`vars` must precede the generators"));
                }
                vars = Some(names(value));
            }
            "params" => {
                if !gens.is_empty() {
                    return Err(bad(ln, "`params` must precede the generators"));
                }
                params = names(value);
            }
            "gen" => gens.push((ln, value.to_string())),
            other => return Err(bad(ln, format!("unknown key `{other}`"))),
        }
    }
    let vars = vars.ok_or_else(|| Error::InvalidData("missing `vars` line".into()))?;
    if vars.is_empty() {
        return Err(Error::InvalidData("`vars` line declares no variables".into()));
    }
    let all: Vec<String> = vars.iter().chain(&params).cloned().collect();
    check_names(0, &all)?;
    let ring = Vars::new(all);
    let polys = gens
        .iter()
        .map(|(ln, src)| at_line(*ln, parse_poly(src, &ring)))
        .collect::<Result<Vec<_>>>()?;
    Ideal::with_params(&ring, params.len(), polys)
}

/// An arc read from a file: numeric unless it mentions parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcFile {
    pub params: Vars,
    pub arc: Arc<MPoly>,
}

impl ArcFile {
    pub fn numeric(&self) -> Option<Arc<Rational>> {
        self.arc.to_rationals()
    }

    /// The numeric arc, or an error naming the command that needs it.
    pub fn require_numeric(&self, what: &str) -> Result<Arc<Rational>> {
        self.numeric().ok_or_else(|| {
            Error::Precondition(format!("{what} needs an arc with rational coefficients"))
        })
    }
}

/// `cap: K`, optional `params: a b`, then one line of at most `K`
/// whitespace-separated coefficients per component (missing ones are zero).
pub fn parse_arc(text: &str) -> Result<ArcFile> {
    let mut cap: Option<usize> = None;
    let mut params: Vec<String> = Vec::new();
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (ln, body) in lines(text) {
        if let Some((key, value)) = body.split_once(':') {
            match key.trim() {
                "cap" => {
                    let k: usize = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(ln, format!("bad cap `{}`", value.trim())))?;
                    if k == 0 {
                        return Err(bad(ln, "cap must be positive"));
                    }
                    cap = Some(k);
                }
                "params" => params = names(value),
                other => return Err(bad(ln, format!("unknown key `{other}`"))),
            }
            continue;
        }
        rows.push((ln, body));
    }
    let cap = cap.ok_or_else(|| Error::InvalidData("missing `cap` line".into()))?;
    check_names(0, &params)?;
    let ring = Vars::new(params);
    let zero = MPoly::zero(&ring);
    let mut comps = Vec::with_capacity(rows.len());
    for (ln, body) in rows {
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() > cap {
            return Err(bad(
                ln,
                format!("{} coefficients exceed the cap {cap}", tokens.len()),
            ));
        }
        let coeffs = tokens
            .iter()
            .map(|t| at_line(ln, parse_poly(t, &ring)))
            .collect::<Result<Vec<_>>>()?;
        comps.push(TruncSeries::new(coeffs, cap, &zero));
    }
    if comps.is_empty() {
        return Err(Error::InvalidData("arc file has no components".into()));
    }
    Ok(ArcFile {
        params: ring,
        arc: Arc::new(comps)?,
    })
}

/// `source: u v`, `target: x y`, then one `comp: <poly>` per target coordinate.
pub fn parse_map(text: &str) -> Result<PolyMap> {
    let mut source = None;
    let mut target = None;
    let mut comps: Vec<(usize, String)> = Vec::new();
    for (ln, body) in lines(text) {
        let (key, value) = split_header(ln, body)?;
        match key {
            "source" => source = Some((ln, names(value))),
            "target" => target = Some((ln, names(value))),
            "comp" => comps.push((ln, value.to_string())),
            other => return Err(bad(ln, format!("unknown key `{other}`"))),
        }
    }
    let (sl, source) = source.ok_or_else(|| Error::InvalidData("missing `source` line".into()))?;
    let (tl, target) = target.ok_or_else(|| Error::InvalidData("missing `target` line".into()))?;
    check_names(sl, &source)?;
    check_names(tl, &target)?;
    let source = Vars::new(source);
    let target = Vars::new(target);
    let polys = comps
        .iter()
        .map(|(ln, src)| at_line(*ln, parse_poly(src, &source)))
        .collect::<Result<Vec<_>>>()?;
    PolyMap::new(&source, &target, polys)
}

/// `rows: r`, `cols: c`, then `r` lines `row: e_1, ..., e_c` with polynomial
/// entries in `t`, read modulo `t^cap`.
pub fn parse_series_matrix(text: &str, cap: usize) -> Result<Matrix<TruncSeries<Rational>>> {
    if cap == 0 {
        return Err(Error::InvalidData("cap must be positive".into()));
    }
    let t = Vars::new(["t"]);
    let mut shape = (None, None);
    let mut rows = Vec::new();
    for (ln, body) in lines(text) {
        let (key, value) = split_header(ln, body)?;
        match key {
            "rows" | "cols" => {
                let v: usize = value
                    .parse()
                    .map_err(|_| bad(ln, format!("bad size `{value}`")))?;
                if key == "rows" {
                    shape.0 = Some(v);
                } else {
                    shape.1 = Some(v);
                }
            }
            "row" => {
                let entries = value
                    .split(',')
                    .map(|e| {
                        let p = at_line(ln, parse_poly(e.trim(), &t))?;
                        let mut coeffs = Vec::new();
                        for (exps, c) in p.terms() {
                            let k = exps[0] as usize;
                            if k < cap {
                                if coeffs.len() <= k {
                                    coeffs.resize(k + 1, Rational::default());
                                }
                                coeffs[k] = c.clone();
                            }
                        }
                        Ok(TruncSeries::from_rationals(coeffs, cap))
                    })
                    .collect::<Result<Vec<_>>>()?;
                rows.push((ln, entries));
            }
            other => return Err(bad(ln, format!("unknown key `{other}`"))),
        }
    }
    let r = shape.0.ok_or_else(|| Error::InvalidData("missing `rows` line".into()))?;
    let c = shape.1.ok_or_else(|| Error::InvalidData("missing `cols` line".into()))?;
    if rows.len() != r {
        return Err(Error::InvalidData(format!("declared {r} rows, found {}", rows.len())));
    }
    for (ln, row) in &rows {
        if row.len() != c {
            return Err(bad(*ln, format!("declared {c} columns, found {}", row.len())));
        }
    }
    Matrix::from_rows(rows.into_iter().map(|(_, r)| r).collect())
}

/// `d: 2`, `div: E1 nu=1 lambda=0 [nutilde=1 lambdatilde=0]` per divisor and
/// `beta {E1,E2}: <poly in u>` per stratum (`beta {}:` for the complement of
/// all divisors).
pub fn parse_divisors(text: &str) -> Result<DivisorData> {
    let mut d = None;
    let mut divisors: Vec<Divisor> = Vec::new();
    let mut betas: Vec<(usize, String, String)> = Vec::new();
    for (ln, body) in lines(text) {
        let (key, value) = split_header(ln, body)?;
        if let Some(rest) = key.strip_prefix("beta") {
            betas.push((ln, rest.trim().to_string(), value.to_string()));
            continue;
        }
        match key {
            "d" => {
                d = Some(
                    value
                        .parse::<u32>()
                        .map_err(|_| bad(ln, format!("bad dimension `{value}`")))?,
                )
            }
            "div" => divisors.push(parse_divisor(ln, value)?),
            other => return Err(bad(ln, format!("unknown key `{other}`"))),
        }
    }
    let d = d.ok_or_else(|| Error::InvalidData("missing `d` line".into()))?;
    let mut table = BTreeMap::new();
    for (ln, set, src) in betas {
        let inner = set
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| bad(ln, format!("expected `beta {{...}}`, found `beta {set}`")))?;
        let mut members = BTreeSet::new();
        for name in inner.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let i = divisors
                .iter()
                .position(|div| div.name == name)
                .ok_or_else(|| bad(ln, format!("unknown divisor `{name}`")))?;
            members.insert(i);
        }
        let v = at_line(ln, Vpp::parse(&src))?;
        if table.insert(members, v).is_some() {
            return Err(bad(ln, "stratum listed twice"));
        }
    }
    DivisorData::new(d, divisors, table)
}

fn parse_divisor(ln: usize, value: &str) -> Result<Divisor> {
    let mut parts = value.split_whitespace();
    let name = parts
        .next()
        .ok_or_else(|| bad(ln, "divisor line needs a name"))?
        .to_string();
    let mut fields: BTreeMap<&str, u32> = BTreeMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| bad(ln, format!("expected key=value, found `{p}`")))?;
        if !["nu", "lambda", "nutilde", "lambdatilde"].contains(&k) {
            return Err(bad(ln, format!("unknown divisor field `{k}`")));
        }
        let v: u32 = v
            .parse()
            .map_err(|_| bad(ln, format!("bad value `{v}` for `{k}`")))?;
        fields.insert(k, v);
    }
    let nu = *fields
        .get("nu")
        .ok_or_else(|| bad(ln, format!("divisor `{name}` needs nu")))?;
    let nu_tilde = fields.get("nutilde").copied();
    let lambda_tilde = fields.get("lambdatilde").copied();
    if nu_tilde.is_none() && lambda_tilde.is_some() {
        return Err(bad(ln, "lambdatilde given without nutilde"));
    }
    Ok(Divisor {
        name,
        nu,
        lambda: fields.get("lambda").copied().unwrap_or(0),
        nu_tilde,
        lambda_tilde,
    })
}
