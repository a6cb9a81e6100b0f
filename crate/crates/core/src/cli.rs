//! Command-line front end: `norm`, `index`, `fset`, `scan`, `witness`, `verify`.
//!
//! Every option can also come from a JSON file given with `--config`; keys
//! are the long flag names with `_` for `-`. The file wins on conflict and a
//! warning goes to stderr.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::acceptance::{self, CriterionResult};
use crate::descriptor::{lattice_from_value, parse_json, space_from_value};
use crate::error::Error;
use crate::indices::{index_report, IndexParams};
use crate::lattices::lattice_norm;
use crate::operators::{operator_norm_lower, OperatorSpec, SearchConfig, Strategy};
use crate::seq::Seq;
use crate::spaces::{norm, SpaceSpec};
use crate::spectral::{doubling_witness_vn, parse_grid, q0_witness_un, residual_scan, shift_witness_identity, ScanConfig};

/// Version of the CSV layouts written by this tool.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "seqspace", version, about = "Norms, indices and spectral witnesses for symmetric sequence spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Norm of --x in --space or --lattice; with --op, a lower bound for the operator norm.
    Norm,
    /// Boyd and fundamental indices with the exponent interval.
    Index,
    /// The interval [1/beta, 1/alpha] of exponents p.
    Fset,
    /// Residual estimates of D - lambda I over a lambda grid (CSV by default).
    Scan,
    /// Approximate-eigenvector witnesses: vn, un, or the shift identity.
    Witness,
    /// Runs the acceptance suite; exit status 1 if any criterion fails.
    Verify,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(clap::Args, Debug, Clone, Default)]
pub struct Opts {
    /// JSON file with any of the options below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Space descriptor, e.g. '{"kind":"lp","p":2}'.
    #[arg(long, global = true)]
    pub space: Option<String>,
    /// Lattice descriptor, e.g. '{"kind":"ex","base":{"kind":"lp","p":2}}'.
    #[arg(long, global = true)]
    pub lattice: Option<String>,
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    #[arg(long = "k-max", global = true)]
    pub k_max: Option<usize>,
    #[arg(long = "j-max", global = true)]
    pub j_max: Option<usize>,
    /// "start:stop:steps", endpoints included.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Witness kind: vn, un or shift.
    #[arg(long, global = true)]
    pub kind: Option<String>,
    /// Acceptance criteria: "all" or a list like "1,5,8".
    #[arg(long, global = true)]
    pub suite: Option<String>,
    /// Input vector as a JSON array.
    #[arg(long, global = true)]
    pub x: Option<String>,
    /// Operator, e.g. "sigma_up:2", "Dl:1.5" or "tau:1*doubling".
    #[arg(long, global = true)]
    pub op: Option<String>,
    /// Search strategy for --op: structured, random or optimize.
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    #[arg(long, global = true)]
    pub iterations: Option<usize>,
    /// Lambda for the shift identity; rational "p/q" gives exact arithmetic.
    #[arg(long, global = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true)]
    pub j: Option<usize>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Spec(_) => 2,
            Error::UnknownKind(_) => 3,
            _ => 4,
        };
        CliError { code, message: e.to_string() }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError { code: 5, message: format!("{}: {e}", path.display()) }
}

fn spec_error(msg: impl Into<String>) -> CliError {
    CliError { code: 2, message: msg.into() }
}

/// Overlays keys from the config file onto `opts`; returns warnings for
/// options given both ways with different values.
fn merge_config(opts: &mut Opts, file: &Map<String, Value>) -> Result<Vec<String>, CliError> {
    let mut warnings = Vec::new();
    macro_rules! take {
        ($field:ident, $key:literal, $conv:expr) => {
            if let Some(v) = file.get($key) {
                let new = $conv(v).ok_or_else(|| spec_error(format!("config key '{}' has the wrong type", $key)))?;
                if let Some(old) = &opts.$field {
                    if *old != new {
                        warnings.push(format!("warning: config file overrides --{} ({:?} -> {:?})", $key, old, new));
                    }
                }
                opts.$field = Some(new);
            }
        };
    }
    let as_json_text = |v: &Value| Some(if let Value::String(s) = v { s.clone() } else { v.to_string() });
    let as_str = |v: &Value| v.as_str().map(str::to_string);
    let as_f64 = |v: &Value| v.as_f64();
    let as_usize = |v: &Value| v.as_u64().map(|x| x as usize);
    let as_u64 = |v: &Value| v.as_u64();
    let as_path = |v: &Value| v.as_str().map(PathBuf::from);
    let as_format = |v: &Value| match v.as_str() {
        Some("csv") => Some(Format::Csv),
        Some("json") => Some(Format::Json),
        _ => None,
    };
    let as_text_or_number = |v: &Value| match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    };
    take!(space, "space", as_json_text);
    take!(lattice, "lattice", as_json_text);
    take!(p, "p", as_f64);
    take!(q, "q", as_f64);
    take!(n, "n", as_usize);
    take!(dim, "dim", as_usize);
    take!(n_max, "n_max", as_usize);
    take!(k_max, "k_max", as_usize);
    take!(j_max, "j_max", as_usize);
    take!(grid, "grid", as_str);
    take!(seed, "seed", as_u64);
    take!(out, "out", as_path);
    take!(format, "format", as_format);
    take!(kind, "kind", as_str);
    take!(suite, "suite", as_str);
    take!(x, "x", as_json_text);
    take!(op, "op", as_str);
    take!(strategy, "strategy", as_str);
    take!(restarts, "restarts", as_usize);
    take!(iterations, "iterations", as_usize);
    take!(lambda, "lambda", as_text_or_number);
    take!(j, "j", as_usize);
    Ok(warnings)
}

/// Output of one command: the bytes to write and the exit status.
pub struct Artifact {
    pub text: String,
    pub code: i32,
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn space_arg(opts: &Opts) -> Result<SpaceSpec, CliError> {
    match (&opts.space, opts.p) {
        (Some(s), _) => Ok(space_from_value(&parse_json(s)?)?),
        (None, Some(p)) => Ok(SpaceSpec::lp(p)?),
        (None, None) => Err(spec_error("--space (or --p for l^p) is required")),
    }
}

fn params(opts: &Opts) -> IndexParams {
    let d = IndexParams::default();
    IndexParams {
        n_max: opts.n_max.unwrap_or(d.n_max),
        j_max: opts.j_max.unwrap_or(d.j_max),
        k_max: opts.k_max.unwrap_or(d.k_max),
        dim: opts.dim.unwrap_or(d.dim),
        seed: opts.seed.unwrap_or(d.seed),
    }
}

fn search_config(opts: &Opts) -> SearchConfig {
    let d = SearchConfig::default();
    SearchConfig {
        restarts: opts.restarts.unwrap_or(d.restarts),
        iterations: opts.iterations.unwrap_or(d.iterations),
        random_samples: d.random_samples,
        seed: opts.seed.unwrap_or(d.seed),
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut write = |r: &[String]| w.write_record(r).map_err(|e| CliError { code: 5, message: e.to_string() });
    write(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>())?;
    for r in rows {
        write(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError { code: 5, message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn cmd_norm(opts: &Opts) -> Result<Artifact, CliError> {
    if let Some(op) = &opts.op {
        let space = space_arg(opts)?;
        let op: OperatorSpec = op.parse()?;
        let strategy: Strategy = opts.strategy.as_deref().unwrap_or("optimize").parse()?;
        let dim = opts.dim.unwrap_or(4096);
        let cert = operator_norm_lower(&space, &op, dim, strategy, &search_config(opts))?;
        let out = json!({
            "space": space.label(),
            "op": op.to_string(),
            "value": cert.value,
            "method": "operator_search",
            "bound": "lower",
            "certificate": cert,
        });
        return Ok(Artifact { text: json_text(&out), code: 0 });
    }
    let x: Seq = serde_json::from_str(opts.x.as_deref().ok_or_else(|| spec_error("--x is required"))?)
        .map_err(|e| spec_error(format!("malformed --x: {e}")))?;
    let (label, value) = if let Some(l) = &opts.lattice {
        let lat = lattice_from_value(&parse_json(l)?)?;
        (lat.label(), lattice_norm(&lat, &x)?)
    } else {
        let space = space_arg(opts)?;
        (space.label(), norm(&space, &x)?)
    };
    let out = json!({ "space": label, "value": value, "method": "closed_form" });
    Ok(Artifact { text: json_text(&out), code: 0 })
}

fn cmd_index(opts: &Opts, fset_only: bool) -> Result<Artifact, CliError> {
    let space = space_arg(opts)?;
    let report = index_report(&space, &params(opts))?;
    let value = if fset_only {
        json!({
            "space": report.space,
            "f_interval": report.f_interval,
            "alpha": report.alpha.point,
            "beta": report.beta.point,
            "method": report.method,
            "params": report.params,
        })
    } else {
        serde_json::to_value(&report).expect("serializable report")
    };
    match opts.format.unwrap_or(Format::Json) {
        Format::Json => Ok(Artifact { text: json_text(&value), code: 0 }),
        Format::Csv => {
            let f = |v: f64| v.to_string();
            let row = vec![
                SCHEMA_VERSION.to_string(),
                report.space.clone(),
                f(report.alpha.lo),
                f(report.alpha.hi),
                f(report.alpha.point),
                f(report.beta.lo),
                f(report.beta.hi),
                f(report.beta.point),
                f(report.mu),
                f(report.nu),
                f(report.f_interval[0].0),
                f(report.f_interval[1].0),
                report.method.get("alpha").cloned().unwrap_or_default(),
            ];
            let header = [
                "schema_version", "space", "alpha_lo", "alpha_hi", "alpha", "beta_lo", "beta_hi", "beta", "mu", "nu",
                "p_min", "p_max", "method",
            ];
            Ok(Artifact { text: csv_text(&header, vec![row])?, code: 0 })
        }
    }
}

fn cmd_scan(opts: &Opts) -> Result<Artifact, CliError> {
    let space = space_arg(opts)?;
    let grid = parse_grid(opts.grid.as_deref().unwrap_or("1:2:21"))?;
    let seed = opts.seed.unwrap_or(IndexParams::default().seed);
    let mut cfg = ScanConfig::new(opts.dim.unwrap_or(1 << 10), opts.restarts.unwrap_or(4), seed);
    if let Some(it) = opts.iterations {
        cfg.search.iterations = it;
    }
    let rows = residual_scan(&space, &grid, &cfg)?;
    match opts.format.unwrap_or(Format::Csv) {
        Format::Json => Ok(Artifact { text: json_text(&json!({ "space": space.label(), "rows": rows, "bound": "upper estimate of the infimum; heuristic" })), code: 0 }),
        Format::Csv => {
            let rows = rows
                .iter()
                .map(|r| {
                    vec![
                        SCHEMA_VERSION.to_string(),
                        r.lambda.to_string(),
                        r.residual_estimate.to_string(),
                        r.method.to_string(),
                        r.dim.to_string(),
                        r.seed.to_string(),
                    ]
                })
                .collect();
            let header = ["schema_version", "lambda", "residual_estimate", "method", "dim", "seed"];
            Ok(Artifact { text: csv_text(&header, rows)?, code: 0 })
        }
    }
}

fn cmd_witness(opts: &Opts) -> Result<Artifact, CliError> {
    let kind = opts.kind.as_deref().unwrap_or("vn");
    let n = opts.n.ok_or_else(|| spec_error("--n is required"))?;
    let value = match kind {
        "vn" => {
            let p = opts.p.ok_or_else(|| spec_error("--p is required"))?;
            let space = match &opts.space {
                Some(_) => space_arg(opts)?,
                None => SpaceSpec::lp(p)?,
            };
            let seed = match &opts.x {
                Some(x) => serde_json::from_str(x).map_err(|e| spec_error(format!("malformed --x: {e}")))?,
                None => Seq::unit(1),
            };
            let r = doubling_witness_vn(&space, p, n, &seed)?;
            json!({ "space": space.label(), "report": r, "method": "witness" })
        }
        "un" => {
            let p = opts.p.ok_or_else(|| spec_error("--p is required"))?;
            let n = u32::try_from(n).map_err(|_| Error::ParameterRange("n too large".into()))?;
            let r = q0_witness_un(p, n)?;
            json!({
                "p": r.p, "n": r.n,
                "d2_residual": r.d2_residual, "d3_residual": r.d3_residual, "norm": r.norm,
                "predicted_d2": r.predicted_d2, "predicted_d3": r.predicted_d3,
                "support_size": r.support_size.to_string(),
                "method": "exact_support",
            })
        }
        "shift" => {
            let lambda = opts.lambda.as_deref().ok_or_else(|| spec_error("--lambda is required"))?;
            let j = opts.j.unwrap_or(1);
            let r = match lambda.split_once('/') {
                Some((a, b)) => {
                    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| spec_error(format!("bad rational '{lambda}'")));
                    let (a, b) = (parse(a)?, parse(b)?);
                    if b == 0 {
                        return Err(Error::ParameterRange("zero denominator".into()).into());
                    }
                    shift_witness_identity(&crate::scalar::ratio(a, b), n, j)?
                }
                None => {
                    let l: f64 = lambda.trim().parse().map_err(|_| spec_error(format!("bad lambda '{lambda}'")))?;
                    shift_witness_identity(&l, n, j)?
                }
            };
            json!({ "lambda": lambda, "n": n, "j": j, "report": r, "method": "exact_expansion" })
        }
        other => return Err(Error::UnknownKind(format!("witness kind '{other}'")).into()),
    };
    Ok(Artifact { text: json_text(&value), code: 0 })
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    id: u8,
    name: &'a str,
    passed: bool,
    observed: &'a str,
    expected: &'a str,
}

fn cmd_verify(opts: &Opts) -> Result<Artifact, CliError> {
    let ids = acceptance::parse_suite(opts.suite.as_deref().unwrap_or("all")).map_err(spec_error)?;
    let seed = opts.seed.unwrap_or(acceptance::DEFAULT_SEED);
    let results: Vec<CriterionResult> = acceptance::run_suite(&ids, seed);
    for r in &results {
        eprintln!("{}", acceptance::format_line(r));
    }
    let code = if results.iter().all(|r| r.passed) { 0 } else { 1 };
    let rows: Vec<VerifyRow> = results
        .iter()
        .map(|r| VerifyRow { id: r.id, name: r.name, passed: r.passed, observed: &r.observed, expected: &r.expected })
        .collect();
    let text = match opts.format.unwrap_or(Format::Csv) {
        Format::Json => json_text(&json!({ "seed": seed, "criteria": rows })),
        Format::Csv => csv_text(
            &["schema_version", "id", "name", "passed", "observed", "expected"],
            rows.iter()
                .map(|r| {
                    vec![
                        SCHEMA_VERSION.to_string(),
                        r.id.to_string(),
                        r.name.to_string(),
                        r.passed.to_string(),
                        r.observed.to_string(),
                        r.expected.to_string(),
                    ]
                })
                .collect(),
        )?,
    };
    Ok(Artifact { text, code })
}

/// Runs one parsed invocation and returns what to write.
pub fn run(command: Command, opts: &Opts) -> Result<Artifact, CliError> {
    match command {
        Command::Norm => cmd_norm(opts),
        Command::Index => cmd_index(opts, false),
        Command::Fset => cmd_index(opts, true),
        Command::Scan => cmd_scan(opts),
        Command::Witness => cmd_witness(opts),
        Command::Verify => cmd_verify(opts),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("SEQSPACE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // a second call in the same process fails harmlessly
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    let mut opts = cli.opts.clone();
    let result = (|| {
        if let Some(path) = &opts.config.clone() {
            let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
            let value = parse_json(&text)?;
            let map = value.as_object().ok_or_else(|| spec_error("config file must hold a JSON object"))?;
            for w in merge_config(&mut opts, map)? {
                eprintln!("{w}");
            }
        }
        let art = run(cli.command, &opts)?;
        match &opts.out {
            Some(path) => std::fs::write(path, &art.text).map_err(|e| io_error(path, e))?,
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(art.text.as_bytes()).map_err(|e| io_error(std::path::Path::new("<stdout>"), e))?;
            }
        }
        Ok::<i32, CliError>(art.code)
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts_with(space: &str) -> Opts {
        Opts { space: Some(space.into()), ..Opts::default() }
    }

    #[test]
    fn fset_lp() {
        let a = run(Command::Fset, &opts_with(r#"{"kind":"lp","p":2}"#)).unwrap();
        let v: Value = serde_json::from_str(&a.text).unwrap();
        assert_eq!(v["f_interval"], json!([2.0, 2.0]));
    }

    #[test]
    fn error_codes() {
        assert_eq!(run(Command::Fset, &opts_with("{")).err().unwrap().code, 2);
        assert_eq!(run(Command::Fset, &opts_with(r#"{"kind":"weird"}"#)).err().unwrap().code, 3);
        assert_eq!(run(Command::Fset, &opts_with(r#"{"kind":"lp","p":0.2}"#)).err().unwrap().code, 4);
    }

    #[test]
    fn config_file_wins() {
        let mut o = Opts { p: Some(2.0), seed: Some(1), ..Opts::default() };
        let file = json!({ "p": 3.0, "space": {"kind":"lp","p":3} });
        let w = merge_config(&mut o, file.as_object().unwrap()).unwrap();
        assert_eq!(o.p, Some(3.0));
        assert_eq!(o.seed, Some(1));
        assert_eq!(w.len(), 1);
        assert!(o.space.unwrap().contains("\"lp\""));
    }

    #[test]
    fn witness_un() {
        let o = Opts { kind: Some("un".into()), p: Some(2.0), n: Some(4), ..Opts::default() };
        let v: Value = serde_json::from_str(&run(Command::Witness, &o).unwrap().text).unwrap();
        assert!((v["d2_residual"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-10);
    }

    #[test]
    fn scan_csv_is_deterministic() {
        let o = Opts {
            space: Some(r#"{"kind":"lp","p":2}"#.into()),
            grid: Some("1.2:1.6:3".into()),
            dim: Some(64),
            ..Opts::default()
        };
        let a = run(Command::Scan, &o).unwrap().text;
        let b = run(Command::Scan, &o).unwrap().text;
        assert_eq!(a, b);
        assert!(a.starts_with("schema_version,lambda,residual_estimate,method,dim,seed\n"));
    }
}
