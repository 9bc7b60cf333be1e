//! `arcjet`: jets, singular loci, arc orders, Hensel lifts and motivic
//! strata from the command line.
//!
//! Every subcommand builds one output document. `--format json` prints it as
//! a single JSON object whose numbers are all strings; the default text form
//! prints the same fields as indented `key: value` lines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arcjet_core::algebra::rational::render as render_q;
use arcjet_core::arc_analysis::{
    delta_class, hensel_lift, ord_ideal, ord_jacobian, t_smith_invariants, LiftOutcome, PolyMap,
    SmithInvariants,
};
use arcjet_core::formats::{parse_arc, parse_divisors, parse_ideal, parse_map, parse_series_matrix};
use arcjet_core::jet::{fiber_next_level, jet_dim, jet_ideal, jet_var_name, obstruction_system};
use arcjet_core::motivic::{
    beta_stratum, compare_multiplicities, dim_stratum, enumerate_an, zn_degree_bound, DivisorData,
    MultiIndex, Verdict, Which, POSITIVITY_ASSUMPTION,
};
use arcjet_core::singular::{h_ideal, h_order};
use arcjet_core::{Arc, Error, Ideal, Limits, Rational};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

const DEFAULT_CAP: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "arcjet", version, about = "Exact jet, arc and motivic computations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, env = "ARCJET_FORMAT", default_value = "text")]
    format: Format,
    /// Truncation cap K for series (default 16). Arc files are re-capped to K when given.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Largest total degree allowed during Gröbner computations.
    #[arg(long, global = true)]
    max_degree: Option<u32>,
    /// Largest number of Gröbner basis elements.
    #[arg(long, global = true)]
    max_basis: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equations of the n-jets of an ideal.
    JetIdeal {
        #[arg(long)]
        level: usize,
        file: PathBuf,
    },
    /// Lifts of an n-jet to level n+1.
    Fiber {
        #[arg(long)]
        jet: PathBuf,
        file: PathBuf,
    },
    /// Conditions on the next coefficients for a jet to extend.
    Obstruct {
        #[arg(long)]
        jet: PathBuf,
        #[arg(long)]
        extra: usize,
        file: PathBuf,
    },
    /// Krull dimension of the n-jet ideal.
    Dim {
        #[arg(long)]
        level: usize,
        file: PathBuf,
    },
    /// The ideal H of a variety of dimension d.
    SingIdeal {
        #[arg(long)]
        dim: usize,
        file: PathBuf,
    },
    /// Order of an arc along H. With --dim, FILE is the variety and H is computed.
    HOrder {
        #[arg(long)]
        arc: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        file: PathBuf,
    },
    /// Jacobian order of a map along an arc, and the order of an ideal along its image.
    Ord {
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long)]
        arc: PathBuf,
        #[arg(long)]
        ideal: Option<PathBuf>,
    },
    /// t-adic Smith invariants of a series matrix.
    Smith {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Lift a target arc through a map starting from a seed.
    Lift {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        seed: PathBuf,
        #[arg(long)]
        level: usize,
        /// Ideal the target must satisfy.
        #[arg(long)]
        ideal: Option<PathBuf>,
    },
    /// The multi-indices of A_n with their strata data.
    Strata {
        #[arg(long)]
        level: u64,
        /// Use the second-map multiplicities.
        #[arg(long)]
        tilde: bool,
        file: PathBuf,
    },
    /// β of one stratum.
    Beta {
        #[arg(long)]
        level: u64,
        #[arg(long)]
        j: String,
        #[arg(long)]
        tilde: bool,
        file: PathBuf,
    },
    /// Degree comparison of the two Jacobian multiplicities.
    CompareNu {
        #[arg(long)]
        nmax: u64,
        file: PathBuf,
    },
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<Map<String, Value>, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(doc) => {
            print!("{}", render(&doc, cli.format));
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_failure() { 2 } else { 1 })
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn s<T: ToString>(x: T) -> Value {
    Value::String(x.to_string())
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Value {
    Value::Array(xs.into_iter().map(s).collect())
}

fn rationals<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> Value {
    Value::Array(xs.into_iter().map(|q| Value::String(render_q(q))).collect())
}

impl Cli {
    fn limits(&self) -> Limits {
        let mut l = Limits::default();
        if let Some(d) = self.max_degree {
            l.max_degree = d;
        }
        if let Some(b) = self.max_basis {
            l.max_basis = b;
        }
        l
    }

    fn ideal(&self, path: &Path) -> std::result::Result<Ideal, Failure> {
        Ok(parse_ideal(&read(path)?)?.with_limits(self.limits()))
    }

    fn arc(&self, path: &Path) -> std::result::Result<arcjet_core::formats::ArcFile, Failure> {
        let mut file = parse_arc(&read(path)?)?;
        if let Some(k) = self.cap {
            file.arc = file.arc.with_cap(k);
        }
        Ok(file)
    }

    fn numeric_arc(&self, path: &Path, what: &str) -> std::result::Result<Arc<Rational>, Failure> {
        Ok(self.arc(path)?.require_numeric(what)?)
    }

    fn map(&self, path: &Path) -> std::result::Result<PolyMap, Failure> {
        Ok(parse_map(&read(path)?)?)
    }

    fn divisors(&self, path: &Path) -> std::result::Result<DivisorData, Failure> {
        Ok(parse_divisors(&read(path)?)?)
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut doc = Map::new();
    match &cli.command {
        Command::JetIdeal { level, file } => {
            let ideal = cli.ideal(file)?;
            let jets = jet_ideal(&ideal, *level)?;
            doc.insert("level".into(), s(level));
            doc.insert("ring".into(), strings(jets.ring.names()));
            let mut eqs = Vec::new();
            for (g, row) in jets.coefficients.iter().enumerate() {
                for (k, p) in row.iter().enumerate() {
                    if !p.is_zero() {
                        eqs.push(json!({"generator": s(g), "order": s(k), "poly": s(p)}));
                    }
                }
            }
            doc.insert("equations".into(), Value::Array(eqs));
        }
        Command::Fiber { jet, file } => {
            let ideal = cli.ideal(file)?;
            let gamma = cli.numeric_arc(jet, "fiber jet")?;
            let fiber = fiber_next_level(&gamma, &ideal)?;
            let next = gamma.cap();
            let names: Vec<String> = ideal.ambient().names()
                .iter()
                .map(|v| jet_var_name(v, next))
                .collect();
            doc.insert("level".into(), s(next - 1));
            doc.insert("feasible".into(), Value::Bool(fiber.feasible));
            doc.insert("unknowns".into(), strings(&names));
            doc.insert(
                "dim".into(),
                fiber.dim().map_or(Value::Null, s),
            );
            doc.insert(
                "basepoint".into(),
                fiber.basepoint.as_ref().map_or(Value::Null, rationals),
            );
            doc.insert(
                "directions".into(),
                Value::Array(fiber.directions.iter().map(rationals).collect()),
            );
        }
        Command::Obstruct { jet, extra, file } => {
            let ideal = cli.ideal(file)?;
            let gamma = cli.arc(jet)?.arc;
            let sys = obstruction_system(&gamma, &ideal, *extra)?;
            doc.insert("level".into(), s(gamma.cap() - 1));
            doc.insert("unknowns".into(), strings(&sys.unknowns));
            doc.insert(
                "conditions".into(),
                Value::Array(
                    sys.conditions
                        .iter()
                        .map(|c| json!({"order": s(c.order), "generator": s(c.generator), "poly": s(&c.poly)}))
                        .collect(),
                ),
            );
            doc.insert("inconsistent".into(), Value::Bool(sys.is_inconsistent()));
        }
        Command::Dim { level, file } => {
            let ideal = cli.ideal(file)?;
            doc.insert("level".into(), s(level));
            doc.insert("dim".into(), s(jet_dim(&ideal, *level)?));
        }
        Command::SingIdeal { dim, file } => {
            let ideal = cli.ideal(file)?;
            let h = h_ideal(&ideal, *dim)?;
            doc.insert("dim".into(), s(dim));
            doc.insert("subsets".into(), s(h.subsets));
            doc.insert("restricted".into(), Value::Bool(h.restricted));
            doc.insert("generators".into(), strings(h.ideal.gens()));
        }
        Command::HOrder { arc, dim, file } => {
            let ideal = cli.ideal(file)?;
            let h = match dim {
                Some(d) => h_ideal(&ideal, *d)?.ideal,
                None => ideal,
            };
            let gamma = cli.arc(arc)?.arc;
            doc.insert("cap".into(), s(gamma.cap()));
            doc.insert("order".into(), s(h_order(&gamma, &h)?));
        }
        Command::Ord { map, arc, ideal } => {
            let gamma = cli.arc(arc)?.arc;
            doc.insert("cap".into(), s(gamma.cap()));
            match (map, ideal) {
                (Some(m), Some(i)) => {
                    let m = cli.map(m)?;
                    let d = delta_class(&m, &gamma, &cli.ideal(i)?)?;
                    doc.insert("e".into(), s(d.e));
                    doc.insert("eprime".into(), s(d.eprime));
                }
                (Some(m), None) => {
                    doc.insert("e".into(), s(ord_jacobian(&cli.map(m)?, &gamma)?));
                }
                (None, Some(i)) => {
                    doc.insert("order".into(), s(ord_ideal(&gamma, &cli.ideal(i)?)?));
                }
                (None, None) => return Err(Failure::Usage("ord needs --map, --ideal or both".into())),
            }
        }
        Command::Smith { matrix } => {
            let cap = cli.cap.unwrap_or(DEFAULT_CAP);
            let m = parse_series_matrix(&read(matrix)?, cap)?;
            doc.insert("cap".into(), s(cap));
            match t_smith_invariants(&m)? {
                SmithInvariants::Certified(e) => {
                    doc.insert("certified".into(), Value::Bool(true));
                    doc.insert("sum".into(), s(e.iter().sum::<u32>()));
                    doc.insert("invariants".into(), strings(e));
                }
                SmithInvariants::Undetermined { known, cap } => {
                    doc.insert("certified".into(), Value::Bool(false));
                    doc.insert("invariants".into(), strings(known));
                    doc.insert("undetermined_from".into(), s(format!(">={cap}")));
                }
            }
        }
        Command::Lift { map, target, seed, level, ideal } => {
            let m = cli.map(map)?;
            let delta = cli.numeric_arc(target, "target arc")?;
            let gamma = cli.numeric_arc(seed, "seed arc")?;
            let check = ideal.as_deref().map(|p| cli.ideal(p)).transpose()?;
            doc.insert("cap".into(), s(gamma.cap()));
            match hensel_lift(&m, &gamma, &delta, *level, check.as_ref())? {
                LiftOutcome::Lifted(l) => {
                    doc.insert("status".into(), s("lifted"));
                    doc.insert("eta".into(), strings(l.eta.render()));
                    doc.insert("e".into(), s(l.e));
                    doc.insert("level".into(), s(l.level));
                    doc.insert("agreement".into(), s(l.agreement));
                    doc.insert("projection".into(), strings(l.projection.iter().map(|&i| m.target().name(i))));
                    doc.insert("iterations".into(), s(l.iterations));
                }
                LiftOutcome::Infeasible { reason } => {
                    doc.insert("status".into(), s("infeasible"));
                    doc.insert("reason".into(), s(reason));
                }
            }
        }
        Command::Strata { level, tilde, file } => {
            let data = cli.divisors(file)?;
            let which = which(*tilde);
            let mut rows = Vec::new();
            for j in enumerate_an(&data, *level, which)? {
                rows.push(json!({
                    "j": j.render(&data),
                    "s": s(j.s()),
                    "e": s(j.e(&data, which)?),
                    "eprime": s(j.eprime(&data, which)),
                    "dim": s(dim_stratum(&data, &j, *level, which)?),
                    "beta": s(beta_stratum(&data, &j, *level, which)?),
                }));
            }
            doc.insert("level".into(), s(level));
            doc.insert("c".into(), s(data.c(which)?));
            doc.insert("zn_degree_bound".into(), s(render_q(&zn_degree_bound(&data, *level, which)?)));
            doc.insert("strata".into(), Value::Array(rows));
        }
        Command::Beta { level, j, tilde, file } => {
            let data = cli.divisors(file)?;
            let which = which(*tilde);
            let j = MultiIndex::parse(j, &data)?;
            doc.insert("j".into(), s(j.render(&data)));
            doc.insert("level".into(), s(level));
            doc.insert("beta".into(), s(beta_stratum(&data, &j, *level, which)?));
            doc.insert("dim".into(), s(dim_stratum(&data, &j, *level, which)?));
        }
        Command::CompareNu { nmax, file } => {
            let data = cli.divisors(file)?;
            let report = compare_multiplicities(&data, *nmax)?;
            doc.insert("c".into(), s(report.c));
            doc.insert("c_tilde".into(), s(report.c_tilde));
            doc.insert("c_bar".into(), s(report.c_bar));
            doc.insert("window".into(), s(report.window));
            let verdict = match report.verdict {
                Verdict::ContradictionAt(n) => format!("contradiction forced at n = {n}"),
                Verdict::NoDiscrepancy { one_sided: false } => format!("no discrepancy up to n = {nmax}"),
                Verdict::NoDiscrepancy { one_sided: true } => {
                    format!("no discrepancy up to n = {nmax} (nu < nutilde on some divisor)")
                }
                Verdict::Undecided => format!("undecided up to n = {nmax}"),
            };
            doc.insert("verdict".into(), s(verdict));
            doc.insert("assumption".into(), s(POSITIVITY_ASSUMPTION));
            let rows = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "n": s(r.n),
                        "k_set": strings(&r.k_set),
                        "k_min": r.k_min.map_or(Value::Null, s),
                        "deg_q": r.deg_q.map_or(Value::Null, s),
                        "threshold": s(render_q(&r.threshold)),
                        "stabilized": r.stabilized,
                        "forced": r.forced,
                    })
                })
                .collect();
            doc.insert("rows".into(), Value::Array(rows));
        }
    }
    Ok(doc)
}

fn which(tilde: bool) -> Which {
    if tilde {
        Which::SigmaTilde
    } else {
        Which::Sigma
    }
}

fn render(doc: &Map<String, Value>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
            out.push('\n');
            out
        }
        Format::Text => {
            let mut out = String::new();
            text_fields(doc, 0, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::String(x) => Some(x.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(xs) => format!("[{}]", xs.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", inline(v)))
            .collect::<Vec<_>>()
            .join(" "),
        other => scalar(other).unwrap_or_default(),
    }
}

fn text_fields(doc: &Map<String, Value>, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    for (key, value) in doc {
        match value {
            Value::Array(items) if items.is_empty() => out.push_str(&format!("{pad}{key}: (none)\n")),
            Value::Array(items) => {
                out.push_str(&format!("{pad}{key}:\n"));
                for item in items {
                    out.push_str(&format!("{pad}  {}\n", inline(item)));
                }
            }
            Value::Object(m) => {
                out.push_str(&format!("{pad}{key}:\n"));
                text_fields(m, indent + 2, out);
            }
            other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other).unwrap_or_default())),
        }
    }
}
