use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use slitwalk::closedform::{self, ClosedFormId, ClosedFormSeries};
use slitwalk::exactnum::{fmt_rat, BigRat};
use slitwalk::fps::{Exponent, TSeries};
use slitwalk::halfline::{self, HittingValue};
use slitwalk::limitlaw;
use slitwalk::model::StepSet;
use slitwalk::oracle;
use slitwalk::slitgf::{SlitModelContext, DEFAULT_ZORDER};
use slitwalk::verify;
use slitwalk::Error;

#[derive(Parser)]
#[command(name = "slitwalk", version, about = "Exact enumeration of lattice walks avoiding the half-line {(k,0): k ≤ 0}")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// square, diagonal, triangular or file:PATH
    #[arg(long, global = true, default_value = "square")]
    model: String,
    /// Truncation order N: series are computed mod t^(N+1)
    #[arg(long, global = true, default_value_t = 16)]
    order: usize,
    /// Truncation order in the starting-point variable z
    #[arg(long, global = true, default_value_t = DEFAULT_ZORDER)]
    zorder: usize,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force endpoint counts
    Count {
        /// Largest length (defaults to --order)
        #[arg(long)]
        nmax: Option<usize>,
        /// Start at (k,0)
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        start: i64,
    },
    /// Complete generating function S(x,y;t)
    Gf,
    /// Bridge generating function B(x̄;t)
    Bridges,
    /// a_{i,j}(n) for n = 0..=N
    Endpoint {
        #[arg(long, allow_hyphen_values = true)]
        i: i64,
        #[arg(long, allow_hyphen_values = true)]
        j: i64,
    },
    /// Loops at (k,0), k = 1..=kmax
    Loops {
        #[arg(long, default_value_t = 2)]
        kmax: usize,
    },
    /// Walks visiting (k,0) and total visits
    Visits {
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Walks started at (−k,0) (or (k,0) with --positive), k = 0..=zorder
    Shifted {
        #[arg(long)]
        positive: bool,
    },
    /// Canonical factorization D, Δ, Δ̄
    Factorize,
    /// Expansion of an explicit algebraic form
    Closedform {
        /// One of: square_S, diagonal_S, refined_S, square_total, diagonal_total,
        /// square_point:I,J, diagonal_point:I,J, u, catalan, conjecture:I
        #[arg(long)]
        id: String,
    },
    /// Anti-diagonal formula against brute-force counts
    Conjecture {
        #[arg(long)]
        i: i64,
        #[arg(long, default_value_t = 10)]
        nmax: i64,
    },
    /// Hitting probabilities at t = 1/4 on the square lattice
    Hitting {
        /// Probability that a walk from (I,J) first meets the half-line at the origin
        #[arg(long, num_args = 2, value_names = ["I", "J"], allow_hyphen_values = true, conflicts_with = "distribution")]
        point: Option<Vec<i64>>,
        /// Distribution of the first contact point (−k,0), k = 0..=K
        #[arg(long, value_name = "K")]
        distribution: Option<usize>,
        /// Number of rows listed for --distribution
        #[arg(long, default_value_t = 20)]
        list: usize,
        /// Walk lengths summed when no exact value is known
        #[arg(long, default_value_t = halfline::DEFAULT_ESTIMATE_TERMS)]
        terms: usize,
    },
    /// Return probabilities p_k and expected visits v_k
    Transience {
        #[arg(long, default_value_t = 5)]
        kmax: usize,
    },
    /// Endpoint moments and a(n) against their limits
    Limitlaw {
        #[arg(long, value_delimiter = ',', default_value = "100,200,400")]
        n: Vec<usize>,
    },
    /// Cross-check the pipeline against brute force and explicit forms
    Verify {
        /// Run only these acceptance checks
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Run only the checks for --model
        #[arg(long)]
        model_only: bool,
    },
}

enum Failure {
    Usage(String),
    Verify,
    Guard(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            Error::Parse(_)
            | Error::Domain(_)
            | Error::Io(_)
            | Error::EmptySet
            | Error::SymmetryViolation { .. }
            | Error::HeightViolation { .. }
            | Error::DuplicateStep { .. }
            | Error::BadWeight { .. }
            | Error::UnsupportedDiscriminant(_)
            | Error::NotReverseSymmetric => Failure::Usage(e.to_string()),
            _ => Failure::Other(e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn coeff_strings(v: &[BigRat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

/// n,i,j,…,c rows of a series, sorted as in its JSON dump.
fn series_csv<E: Exponent>(s: &TSeries<E>) -> String {
    let mut out = String::new();
    let vars: Vec<&str> = E::VARS.iter().map(|v| match *v {
        "x" => "i",
        "y" => "j",
        other => other,
    }).collect();
    let _ = writeln!(out, "n,{},c", vars.join(","));
    let mut rows = Vec::new();
    for (n, c) in s.coeffs().iter().enumerate() {
        for (e, v) in c.iter() {
            rows.push((n, e.components(), fmt_rat(v)));
        }
    }
    rows.sort();
    for (n, e, v) in rows {
        let e: Vec<String> = e.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "{n},{},{v}", e.join(","));
    }
    out
}

fn scalar_csv(header: &str, v: &[BigRat]) -> String {
    let mut out = format!("n,{header}\n");
    for (n, c) in v.iter().enumerate() {
        let _ = writeln!(out, "{n},{}", fmt_rat(c));
    }
    out
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Out {
    let c = &cli.common;
    let default = match cli.command {
        Command::Verify { .. } => Format::Text,
        Command::Limitlaw { .. } => Format::Csv,
        _ => Format::Json,
    };
    let format = c.format.unwrap_or(default);
    let model = || StepSet::from_selector(&c.model).map_err(Failure::from);
    let ctx = || -> Result<SlitModelContext, Failure> { Ok(SlitModelContext::new(model()?, c.order)?) };
    let unsupported = |what: &str| Failure::Usage(format!("{what} does not support this output format"));

    match cli.command {
        Command::Count { nmax, start } => {
            let m = model()?;
            let tables = oracle::count_walks(&m, start, nmax.unwrap_or(c.order))?;
            match format {
                Format::Json => {
                    let ts: Vec<Value> = tables
                        .iter()
                        .map(|t| {
                            let counts: Vec<Value> = t.counts.iter().map(|((i, j), v)| json!({"i": i, "j": j, "c": fmt_rat(v)})).collect();
                            json!({"n": t.n, "total": fmt_rat(&t.total()), "counts": counts})
                        })
                        .collect();
                    Ok(pretty(json!({"model": m.name(), "start": start, "tables": ts})))
                }
                Format::Csv => {
                    let mut out = String::from("n,i,j,count\n");
                    for t in &tables {
                        for ((i, j), v) in &t.counts {
                            let _ = writeln!(out, "{},{i},{j},{}", t.n, fmt_rat(v));
                        }
                    }
                    Ok(out)
                }
                Format::Text => Err(unsupported("count")),
            }
        }
        Command::Gf => {
            let ctx = ctx()?;
            match format {
                Format::Json => Ok(pretty(ctx.complete_gf().to_json())),
                Format::Csv => Ok(series_csv(ctx.complete_gf())),
                Format::Text => Err(unsupported("gf")),
            }
        }
        Command::Bridges => {
            let b = ctx()?.bridges_gf();
            match format {
                Format::Json => Ok(pretty(b.to_json())),
                Format::Csv => Ok(series_csv(&b)),
                Format::Text => Err(unsupported("bridges")),
            }
        }
        Command::Endpoint { i, j } => {
            let v = ctx()?.endpoint_series(i, j)?;
            match format {
                Format::Json => Ok(pretty(json!({"model": c.model, "i": i, "j": j, "order": c.order, "coeffs": coeff_strings(&v)}))),
                Format::Csv => Ok(scalar_csv("count", &v)),
                Format::Text => Err(unsupported("endpoint")),
            }
        }
        Command::Loops { kmax } => {
            let loops = ctx()?.loops_gf(kmax)?;
            match format {
                Format::Json => {
                    let rows: Vec<Value> = loops.iter().enumerate().map(|(k, l)| json!({"k": k + 1, "coeffs": coeff_strings(l)})).collect();
                    Ok(pretty(json!({"model": c.model, "order": c.order, "loops": rows})))
                }
                Format::Csv => {
                    let mut out = String::from("k,n,count\n");
                    for (k, l) in loops.iter().enumerate() {
                        for (n, v) in l.iter().enumerate() {
                            let _ = writeln!(out, "{},{n},{}", k + 1, fmt_rat(v));
                        }
                    }
                    Ok(out)
                }
                Format::Text => Err(unsupported("loops")),
            }
        }
        Command::Visits { k } => {
            let v = ctx()?.visits_gf(k)?;
            match format {
                Format::Json => Ok(pretty(json!({
                    "model": c.model,
                    "k": k,
                    "order": c.order,
                    "visiting": coeff_strings(&v.visiting),
                    "visit_total": coeff_strings(&v.visit_total),
                }))),
                Format::Csv => {
                    let mut out = String::from("n,visiting,visits\n");
                    for (n, (a, b)) in v.visiting.iter().zip(&v.visit_total).enumerate() {
                        let _ = writeln!(out, "{n},{},{}", fmt_rat(a), fmt_rat(b));
                    }
                    Ok(out)
                }
                Format::Text => Err(unsupported("visits")),
            }
        }
        Command::Shifted { positive } => {
            if format != Format::Json {
                return Err(unsupported("shifted"));
            }
            let ctx = ctx()?;
            let z = if positive { ctx.start_positive(c.zorder)? } else { ctx.start_negative(c.zorder)? };
            Ok(pretty(z.to_json()))
        }
        Command::Factorize => {
            let f = slitwalk::factorize::factorize_model(&model()?, c.order)?;
            match format {
                Format::Json => Ok(pretty(f.to_json())),
                _ => Err(unsupported("factorize")),
            }
        }
        Command::Closedform { id } => {
            let id: ClosedFormId = id.parse().map_err(Failure::from)?;
            let s = closedform::eval_closed_form(id, c.order)?;
            match (format, &s) {
                (Format::Json, _) => Ok(pretty(json!({"id": id.to_string(), "series": s.to_json()}))),
                (Format::Csv, ClosedFormSeries::Scalar { coeffs, .. }) => Ok(scalar_csv("c", coeffs)),
                (Format::Csv, ClosedFormSeries::Bivariate(b)) => Ok(series_csv(b)),
                (Format::Csv, ClosedFormSeries::Trivariate(t)) => Ok(series_csv(t)),
                (Format::Text, _) => Err(unsupported("closedform")),
            }
        }
        Command::Conjecture { i, nmax } => {
            let r = closedform::conjecture_anti_diagonal(i, nmax)?;
            let body = match format {
                Format::Json => pretty(r.to_json()),
                Format::Csv => {
                    let mut out = String::from("n,formula,oracle\n");
                    for row in &r.rows {
                        let _ = writeln!(out, "{},{},{}", 2 * row.n, fmt_rat(&row.formula), fmt_rat(&row.oracle));
                    }
                    out
                }
                Format::Text => return Err(unsupported("conjecture")),
            };
            if r.passed() {
                Ok(body)
            } else {
                emit(&cli.common.output, &body).map_err(Failure::Other)?;
                Err(Failure::Verify)
            }
        }
        Command::Hitting { point, distribution, list, terms } => {
            if format != Format::Json {
                return Err(unsupported("hitting"));
            }
            match (point, distribution) {
                (Some(p), None) => {
                    let v: HittingValue = halfline::hitting_point_prob(p[0], p[1], terms)?;
                    let mut out = v.to_json();
                    out["point"] = json!([p[0], p[1]]);
                    Ok(pretty(out))
                }
                (None, Some(k)) => Ok(pretty(halfline::hitting_distribution(k, false)?.to_json(list))),
                _ => Err(Failure::Usage("give --point I J or --distribution K".into())),
            }
        }
        Command::Transience { kmax } => {
            let t = halfline::transience(kmax)?;
            match format {
                Format::Json => Ok(pretty(t.to_json())),
                Format::Csv => {
                    let mut out = String::from("k,p,p_value,v,v_value\n");
                    for row in t.to_json()["rows"].as_array().expect("rows") {
                        let _ = writeln!(out, "{},{},{},{},{}", row["k"], row["p"].as_str().unwrap_or(""), row["p_value"], row["v"].as_str().unwrap_or(""), row["v_value"]);
                    }
                    Ok(out)
                }
                Format::Text => Err(unsupported("transience")),
            }
        }
        Command::Limitlaw { n } => {
            let mut n = n;
            n.sort_unstable();
            n.dedup();
            let targets = limitlaw::limit_moments()?;
            let ms = oracle::endpoint_moments(&StepSet::square(), &n)?;
            let reports: Vec<_> = ms.iter().map(|m| limitlaw::MomentReport::from_moments(m, targets)).collect();
            let constant = limitlaw::an_constant()?;
            let an: Vec<_> = ms.iter().map(|m| limitlaw::an_row(m.n, &m.total, constant)).collect();
            match format {
                Format::Csv => Ok(limitlaw::moments_csv(&reports, &an)),
                Format::Json => Ok(pretty(json!({
                    "moments": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                    "an": an.iter().map(|a| a.to_json()).collect::<Vec<_>>(),
                }))),
                Format::Text => Err(unsupported("limitlaw")),
            }
        }
        Command::Verify { only, model_only } => {
            for name in &only {
                if !verify::ACCEPTANCE.contains(&name.as_str()) {
                    return Err(Failure::Usage(format!("unknown check {name:?}; known: {}", verify::ACCEPTANCE.join(", "))));
                }
            }
            let mut reports = vec![verify::verify_model(&model()?, c.order)];
            if !model_only {
                let names: Vec<&str> = if only.is_empty() { verify::ACCEPTANCE.to_vec() } else { only.iter().map(|s| s.as_str()).collect() };
                reports.extend(names.iter().filter_map(|n| verify::run_named(n)));
            }
            let passed = reports.iter().all(|r| r.passed);
            let body = match format {
                Format::Json => pretty(json!({"passed": passed, "checks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()})),
                Format::Text => {
                    let mut out = String::new();
                    for r in &reports {
                        let _ = writeln!(out, "{} {}", if r.passed { "PASS" } else { "FAIL" }, r.name);
                        for d in &r.details {
                            let _ = writeln!(out, "    {d}");
                        }
                        for n in &r.notes {
                            let _ = writeln!(out, "    note: {n}");
                        }
                    }
                    let ok = reports.iter().filter(|r| r.passed).count();
                    let _ = writeln!(out, "{ok} of {} checks passed", reports.len());
                    out
                }
                Format::Csv => return Err(unsupported("verify")),
            };
            if passed {
                Ok(body)
            } else {
                emit(&cli.common.output, &body).map_err(Failure::Other)?;
                Err(Failure::Verify)
            }
        }
    }
}

fn emit(path: &Option<PathBuf>, body: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.common.output.clone();
    match run(cli) {
        Ok(body) => match emit(&output, &body) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Verify) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(Failure::Other(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
