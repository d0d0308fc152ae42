//! `kepler`: reproducible JSON/CSV tables for Jordan-Kepler kernels and the verification suites.

use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Number, Value};

use kepler_core::cone_measures::{peirce_volume, tripotent_volume};
use kepler_core::hyper_series::{SeriesControl, SeriesResult};
use kepler_core::jack_poly::{DiagonalPoint, PointDomain};
use kepler_core::jordan_core::{classified_table, derive_invariants};
use kepler_core::kepler_kernels::{bounded_threshold, closed_form_kernel, kernel_diag, KernelSpec, Potential};
use kepler_core::verify::{run_criterion, suite_names, CriterionReport, SUITES};
use kepler_core::{Error, JordanType, LogValue};

const SCHEMA: u64 = 1;

#[derive(Parser)]
#[command(name = "kepler", version, about = "Kernels, moments and hypergeometric series on Jordan-Kepler manifolds")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions and volumes of the rank-ell Kepler manifold.
    Invariants {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// Diagonal kernel value by direct summation and by the generating-function route.
    Kernel {
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        /// Flat potential `(w|w)^lambda`; omit for the bounded potential.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        nu: f64,
        /// Eigenvalues of the diagonal point, comma separated (at most ell of them).
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true, allow_negative_numbers = true)]
        t: Vec<f64>,
        #[arg(long, default_value_t = 400)]
        max_degree: u32,
        #[arg(long, default_value_t = 1e-16)]
        rel_tol: f64,
    },
    /// Run one acceptance suite (by name or number) or `all`.
    Verify { suite: String },
    /// List the classified Jordan types.
    Types,
}

#[derive(Args)]
struct TypeArgs {
    /// Named type: sym:r, full:r,s, asym:n, spin:d, exc:16, exc:27.
    #[arg(long = "type", conflicts_with_all = ["r", "a", "b"])]
    name: Option<String>,
    #[arg(long, requires_all = ["a", "b"])]
    r: Option<usize>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
}

enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl TypeArgs {
    fn resolve(&self) -> Result<JordanType, Failure> {
        let jt = match (&self.name, self.r, self.a, self.b) {
            (Some(n), ..) => JordanType::from_name(n)?,
            (None, Some(r), Some(a), Some(b)) => JordanType::new(r, a, b)?,
            _ => return Err(Failure::Usage("give --type or all of --r, --a, --b".into())),
        };
        if !jt.classified {
            eprintln!("warning: (r, a, b) = ({}, {}, {}) is not a classified Jordan type", jt.r, jt.a, jt.b);
        }
        Ok(jt)
    }
}

/// A number with 17 significant digits; non-finite values become `null`.
fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return Value::Number(Number::from(x as i64));
    }
    Value::Number(Number::from_str(&format!("{x:.16e}")).expect("formatted float is a JSON number"))
}

fn log_num(v: LogValue) -> Value {
    num(v.log_abs)
}

struct Table {
    command: &'static str,
    meta: Map<String, Value>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Table { command, meta: Map::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    fn meta(&mut self, key: &str, v: Value) {
        self.meta.insert(key.into(), v);
    }

    fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema".into(), Value::from(SCHEMA));
                obj.insert("command".into(), Value::from(self.command));
                obj.extend(self.meta.clone());
                let rows = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                obj.insert("rows".into(), Value::Array(rows));
                serde_json::to_string_pretty(&Value::Object(obj)).expect("serializable") + "\n"
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r.iter().map(cell)).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
            }
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn type_meta(t: &mut Table, jt: &JordanType) {
    t.meta("type", Value::from(jt.label()));
    t.meta("classified", Value::from(jt.classified));
}

fn cmd_invariants(jt: &JordanType, ell: usize) -> Result<Table, Failure> {
    let k = derive_invariants(jt, ell)?;
    let mut t = Table::new(
        "invariants",
        &["r", "a", "b", "d", "p", "ell", "d_ell", "dprime_ell", "dsecond_ell", "peirce_volume_reduced", "tripotent_volume", "bounded_threshold"],
    );
    type_meta(&mut t, jt);
    t.push(vec![
        num(jt.r as f64),
        num(jt.a),
        num(jt.b),
        num(jt.d()),
        num(jt.p()),
        num(ell as f64),
        num(k.d),
        num(k.dprime),
        num(k.dsecond),
        num(peirce_volume(jt, ell)?),
        num(tripotent_volume(jt, ell)?),
        num(bounded_threshold(jt, ell)?),
    ]);
    Ok(t)
}

fn cmd_kernel(jt: &JordanType, ell: usize, lambda: Option<f64>, nu: f64, t: Vec<f64>, ctl: SeriesControl) -> Result<Table, Failure> {
    ctl.validate()?;
    let potential = match lambda {
        Some(lambda) => Potential::Flat { lambda },
        None => Potential::Bounded,
    };
    let spec = KernelSpec::new(jt, ell, potential, nu)?;
    let point = DiagonalPoint::new(t, PointDomain::Free)?;
    let direct = kernel_diag(&spec, &point, &ctl)?;
    let closed = closed_form_kernel(&spec, &point, &ctl)?;
    let gap = gap(&direct, &closed);
    let mut tab = Table::new(
        "kernel",
        &["route", "value", "log_abs", "sign", "shells", "converged", "last_shell", "relative_gap"],
    );
    type_meta(&mut tab, jt);
    tab.meta("ell", num(ell as f64));
    tab.meta("nu", num(nu));
    tab.meta("t", Value::Array(point.t().iter().map(|&x| num(x)).collect()));
    match potential {
        Potential::Flat { lambda } => tab.meta("potential", Value::from(format!("flat:{lambda}"))),
        Potential::Bounded => {
            tab.meta("potential", Value::from("bounded"));
            tab.meta("nu_threshold", num(bounded_threshold(jt, ell)?));
        }
    }
    for (route, r) in [("direct", &direct), ("closed_form", &closed)] {
        tab.push(vec![
            Value::from(route),
            num(r.value),
            log_num(r.log_value),
            num(r.log_value.sign as f64),
            num(r.degrees_used as f64),
            Value::from(r.converged),
            num(r.last_shell),
            num(gap),
        ]);
    }
    if !(direct.converged && closed.converged) {
        eprintln!("warning: series did not settle within {} degrees; values are partial sums", ctl.max_degree);
    }
    Ok(tab)
}

fn gap(a: &SeriesResult, b: &SeriesResult) -> f64 {
    if b.log_value.is_zero() {
        return if a.log_value.is_zero() { 0.0 } else { f64::INFINITY };
    }
    (a.log_value.sub(b.log_value) / b.log_value).abs().to_f64()
}

fn cmd_verify(suite: &str) -> Result<(Table, bool), Failure> {
    let ids: Vec<u8> = if suite == "all" {
        SUITES.iter().map(|s| s.0).collect()
    } else {
        match SUITES.iter().find(|s| s.1 == suite || s.0.to_string() == suite) {
            Some(s) => vec![s.0],
            None => {
                let known: Vec<_> = suite_names().collect();
                return Err(Failure::Usage(format!("unknown suite `{suite}`; known: all, {}", known.join(", "))));
            }
        }
    };
    let mut tab = Table::new("verify", &["criterion", "suite", "case", "measured", "bound", "passed"]);
    tab.meta("suite", Value::from(suite));
    let mut summary = Vec::new();
    let mut all = true;
    for id in ids {
        let rep: CriterionReport = run_criterion(id)?;
        all &= rep.passed;
        summary.push(Value::Object(Map::from_iter([
            ("criterion".to_string(), num(id as f64)),
            ("suite".to_string(), Value::from(rep.suite)),
            ("title".to_string(), Value::from(rep.title)),
            ("passed".to_string(), Value::from(rep.passed)),
        ])));
        for row in &rep.rows {
            tab.push(vec![
                num(id as f64),
                Value::from(rep.suite),
                Value::from(row.case.clone()),
                num(row.measured),
                num(row.bound),
                Value::from(row.passed),
            ]);
        }
    }
    tab.meta("criteria", Value::Array(summary));
    tab.meta("passed", Value::from(all));
    Ok((tab, all))
}

fn cmd_types() -> Table {
    let mut t = Table::new("types", &["name", "r", "a", "b", "d", "p"]);
    for e in classified_table() {
        let jt = JordanType::new(e.r, e.a as f64, e.b as f64).expect("table entries are valid");
        t.push(vec![
            Value::from(e.name.clone()),
            num(e.r as f64),
            num(e.a as f64),
            num(e.b as f64),
            num(jt.d()),
            num(jt.p()),
        ]);
    }
    t
}

fn run(cli: Cli) -> Result<(Table, bool), Failure> {
    Ok(match cli.cmd {
        Command::Invariants { ty, ell } => (cmd_invariants(&ty.resolve()?, ell)?, true),
        Command::Kernel { ty, ell, lambda, nu, t, max_degree, rel_tol } => {
            let ctl = SeriesControl { max_degree, rel_tol, ..Default::default() };
            (cmd_kernel(&ty.resolve()?, ell, lambda, nu, t, ctl)?, true)
        }
        Command::Verify { suite } => cmd_verify(&suite)?,
        Command::Types => (cmd_types(), true),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok((table, passed)) => {
            let out = table.render(format);
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
