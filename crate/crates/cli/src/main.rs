//! `qtrunc`: truncation plans, eigenvalue series and verification suites.
//!
//! Exit codes: 0 all checks pass, 1 mathematical failure, 2 usage or parse error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qtrunc_core::cartan::CartanDatum;
use qtrunc_core::catalog::{build_catalog, run_suite, Suite, DEFAULT_SEED};
use qtrunc_core::lweight::{parse_lweight, LWeight};
use qtrunc_core::report::SuiteReport;
use qtrunc_core::series_engine::{Engine, Sign, Which};
use qtrunc_core::sl2::{build_module, Sl2Report};
use qtrunc_core::truncation::plan_truncation;
use qtrunc_exact::{parse_field, ParamDecls, ParamField, PowerSeries};

#[derive(Parser)]
#[command(name = "qtrunc", version, about = "Exact A/T-series, truncation parameters and verification suites")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Series order N.
    #[arg(long, global = true, env = "QTRUNC_ORDER", default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Depth D of the sl2 module.
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Declare a parameter (letters and digits, not q, s or z).
    #[arg(long = "param", global = true)]
    params: Vec<String>,
    /// Declare a parameter as a square, so that `sqrt(name)` is available.
    #[arg(long = "square", global = true)]
    squares: Vec<String>,
    /// Seed for the random part of the catalog.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Truncation plan for f = const * prod(pos) / prod(neg).
    Truncate {
        #[arg(long = "type")]
        cartan: String,
        /// Polynomial l-weight m_k (repeatable).
        #[arg(long = "pos")]
        pos: Vec<String>,
        /// Polynomial l-weight n_k (repeatable).
        #[arg(long = "neg")]
        neg: Vec<String>,
        /// Constant part: one value for every node, or a comma-separated list.
        #[arg(long = "const")]
        constant: Option<String>,
        /// Flavour parameters z_1,...,z_r.
        #[arg(long)]
        flavor: Option<String>,
    },
    /// Print one eigenvalue series.
    Series {
        #[arg(long = "type")]
        cartan: String,
        #[arg(long)]
        lweight: String,
        #[arg(long, value_enum)]
        what: What,
        /// 1-based node.
        #[arg(long, default_value_t = 1)]
        node: usize,
        /// Truncation parameter for SA+ and SA-.
        #[arg(long)]
        trunc: Option<String>,
    },
    /// Run a verification suite over the built-in catalog.
    Verify {
        /// gklo, at-ratio, lemma, polynomiality, sl2 or all.
        suite: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
enum What {
    #[value(name = "A+")]
    APlus,
    #[value(name = "A-")]
    AMinus,
    #[value(name = "T+")]
    TPlus,
    #[value(name = "T-")]
    TMinus,
    #[value(name = "SA+")]
    SaPlus,
    #[value(name = "SA-")]
    SaMinus,
    #[value(name = "star")]
    Star,
    #[value(name = "sharp")]
    Sharp,
    #[value(name = "t+")]
    FundPlus,
    #[value(name = "t-")]
    FundMinus,
}

impl What {
    fn name(self) -> &'static str {
        match self {
            What::APlus => "A+",
            What::AMinus => "A-",
            What::TPlus => "T+",
            What::TMinus => "T-",
            What::SaPlus => "SA+",
            What::SaMinus => "SA-",
            What::Star => "star",
            What::Sharp => "sharp",
            What::FundPlus => "t+",
            What::FundMinus => "t-",
        }
    }
}

enum Failure {
    Usage(String),
    Math(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

struct Output {
    text: String,
    json: String,
    pass: bool,
}

fn to_json<T: Serialize>(x: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(x)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Math(e.to_string()))
}

fn decls(c: &Common) -> Result<ParamDecls, Failure> {
    let mut seen = std::collections::BTreeSet::new();
    let mut d = ParamDecls::new();
    for name in c.params.iter().chain(&c.squares) {
        if !seen.insert(name.as_str()) {
            return Err(usage(format!("parameter '{name}' declared twice")));
        }
        if name.is_empty() || !name.chars().all(|ch| ch.is_ascii_alphanumeric() || ch == '_') || name.starts_with(|ch: char| ch.is_ascii_digit()) {
            return Err(usage(format!("invalid parameter name '{name}'")));
        }
        if ["q", "s", "z", "w", "sqrt", "Psi", "const"].contains(&name.as_str()) {
            return Err(usage(format!("parameter name '{name}' is reserved")));
        }
    }
    for name in &c.squares {
        d = d.with_square(name).map_err(usage)?;
    }
    Ok(d)
}

fn datum(label: &str) -> Result<Arc<CartanDatum>, Failure> {
    CartanDatum::from_label(label).map(Arc::new).map_err(usage)
}

fn field_list(s: &str, d: &ParamDecls) -> Result<Vec<ParamField>, Failure> {
    s.split(',').map(|x| parse_field(x.trim(), d).map_err(usage)).collect()
}

fn cmd_truncate(
    c: &Common,
    cartan: &str,
    pos: &[String],
    neg: &[String],
    constant: Option<&str>,
    flavor: Option<&str>,
) -> Result<Output, Failure> {
    let d = decls(c)?;
    let cd = datum(cartan)?;
    let r = cd.rank();
    let parse = |s: &String| parse_lweight(s, &cd, &d).map_err(usage);
    let ms: Vec<LWeight> = pos.iter().map(parse).collect::<Result<_, _>>()?;
    let ns: Vec<LWeight> = neg.iter().map(parse).collect::<Result<_, _>>()?;
    let lambda = match constant {
        None => vec![ParamField::one(); r],
        Some(s) => {
            let v = field_list(s, &d)?;
            match v.len() {
                1 => vec![v[0].clone(); r],
                n if n == r => v,
                n => return Err(usage(format!("--const has {n} values, expected 1 or {r}"))),
            }
        }
    };
    if lambda.iter().any(|x| x.is_zero()) {
        return Err(usage("--const values must be nonzero"));
    }
    let z = flavor.map(|s| field_list(s, &d)).transpose()?;
    let engine = Engine::new(&cd, c.order as usize);
    let rep = plan_truncation(&engine, &ms, &ns, &lambda, z.as_deref()).map_err(usage)?;
    Ok(Output {
        text: rep.render_text(),
        json: to_json(&rep)?,
        pass: rep.pass,
    })
}

#[derive(Serialize)]
struct Term {
    exponent: i64,
    coefficient: String,
}

#[derive(Serialize)]
struct SeriesReport {
    #[serde(rename = "type")]
    cartan_type: String,
    lweight: String,
    what: &'static str,
    node: usize,
    order: usize,
    variable: &'static str,
    series: String,
    terms: Vec<Term>,
}

fn cmd_series(c: &Common, cartan: &str, lweight: &str, what: What, node: usize, trunc: Option<&str>) -> Result<Output, Failure> {
    let d = decls(c)?;
    let cd = datum(cartan)?;
    if node == 0 || node > cd.rank() {
        return Err(usage(format!("node {node} out of range 1..={}", cd.rank())));
    }
    let i = node - 1;
    let f = parse_lweight(lweight, &cd, &d).map_err(usage)?;
    let n = c.order as usize;
    let e = Engine::new(&cd, n);
    let trunc_lw = || -> Result<LWeight, Failure> {
        let t = trunc.ok_or_else(|| usage("SA+ and SA- need --trunc"))?;
        parse_lweight(t, &cd, &d).map_err(usage)
    };
    let s: PowerSeries = match what {
        What::APlus => e.at_series(&f, i, Which::A, Sign::Plus),
        What::AMinus => e.at_series(&f, i, Which::A, Sign::Minus),
        What::TPlus => e.at_series(&f, i, Which::T, Sign::Plus),
        What::TMinus => e.at_series(&f, i, Which::T, Sign::Minus),
        What::SaPlus => e.script_a(&f, &trunc_lw()?, i, Sign::Plus).map_err(usage)?,
        What::SaMinus => e.script_a(&f, &trunc_lw()?, i, Sign::Minus).map_err(usage)?,
        What::Star => e.star_sharp(&f, Sign::Plus).map_err(usage)?.swap_remove(i),
        What::Sharp => e.star_sharp(&f, Sign::Minus).map_err(usage)?.swap_remove(i),
        What::FundPlus => e.fundamental_t(&f, i, Sign::Plus).map_err(usage)?,
        What::FundMinus => e.fundamental_t(&f, i, Sign::Minus).map_err(usage)?,
    };
    let terms = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| Term {
            exponent: s.offset() + k as i64,
            coefficient: x.to_string(),
        })
        .collect();
    let rep = SeriesReport {
        cartan_type: cd.label(),
        lweight: f.to_string(),
        what: what.name(),
        node,
        order: n,
        variable: s.direction().variable(),
        series: s.to_string(),
        terms,
    };
    Ok(Output {
        text: format!("{}\n", rep.series),
        json: to_json(&rep)?,
        pass: true,
    })
}

fn suite_text(rep: &SuiteReport) -> String {
    let mut s = String::new();
    for c in &rep.checks {
        let _ = write!(s, "{} {:<26} {:<3} {}", if c.pass { "PASS" } else { "FAIL" }, c.check, c.cartan_type, c.lweight);
        if let Some(f) = &c.first_failure {
            let _ = write!(
                s,
                "\n     node {} side {} exponent {}: expected {}, got {}",
                f.node, f.side, f.exponent, f.expected, f.actual
            );
        }
        s.push('\n');
    }
    let _ = writeln!(
        s,
        "suite {}: {}/{} passed at order {} -> {}",
        rep.suite,
        rep.passed,
        rep.total,
        rep.order,
        if rep.pass { "PASS" } else { "FAIL" }
    );
    s
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    #[serde(flatten)]
    suite: &'a SuiteReport,
    /// Battery, descent verdicts and table of the generic module; sl2 and all only.
    #[serde(skip_serializing_if = "Option::is_none")]
    sl2: Option<&'a Sl2Report>,
}

fn cmd_verify(c: &Common, name: &str) -> Result<Output, Failure> {
    let suite: Suite = name.parse().map_err(Failure::Usage)?;
    let catalog = build_catalog(c.seed);
    let n = c.order as usize;
    let depth = c.depth as usize;
    let rep = run_suite(suite, &catalog, n, depth).map_err(|e| Failure::Math(e.to_string()))?;
    let mut text = String::new();
    let mut sl2 = None;
    if matches!(suite, Suite::Sl2 | Suite::All) {
        // the per-n table of the generic module
        let d = ParamDecls::new().with_square("c").and_then(|d| d.with_square("b")).map_err(usage)?;
        let z1 = parse_field("sqrt(c)*q", &d).map_err(usage)?;
        let m = build_module(-&d.param("c"), d.param("b"), depth, n).map_err(|e| Failure::Math(e.to_string()))?;
        let r = m.battery(Some(&z1)).map_err(|e| Failure::Math(e.to_string()))?;
        text.push_str(&r.render_text());
        text.push('\n');
        sl2 = Some(r);
    }
    text.push_str(&suite_text(&rep));
    Ok(Output {
        text,
        json: to_json(&VerifyJson { suite: &rep, sl2: sl2.as_ref() })?,
        pass: rep.pass,
    })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::Truncate { cartan, pos, neg, constant, flavor } => {
            cmd_truncate(c, cartan, pos, neg, constant.as_deref(), flavor.as_deref())
        }
        Command::Series { cartan, lweight, what, node, trunc } => cmd_series(c, cartan, lweight, *what, *node, trunc.as_deref()),
        Command::Verify { suite } => cmd_verify(c, suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let body = match cli.common.format {
                Format::Text => out.text,
                Format::Json => out.json,
            };
            match &cli.common.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &body) {
                        eprintln!("error: cannot write {}: {e}", p.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{body}"),
            }
            ExitCode::from(if out.pass { 0 } else { 1 })
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Math(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
