//! The `siegel` command-line front end.
//!
//! [`run`] parses arguments, dispatches on a rayon pool sized by the
//! `SIEGEL_WORKERS` environment variable and returns the rendered output and
//! exit code instead of printing, so the whole tool can be driven in-process.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid input,
//! 3 resource limit.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::cube_sections::{section_volume, Direction};
use crate::exact_sigma::{sigma_quadrature, SigmaValue};
use crate::kernel_lattice::{small_solutions, Budget, LinearForm, MinimaCertificate, Strategy};
use crate::rational::{format as fmt_q, to_f64};
use crate::suites::{run_suite, Suite};
use crate::sum_distinct::{bounds_table, certify_set, is_sum_distinct, BoundsRow, SumDistinctSet, DEFAULT_MAX_ELEMENTS};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "SIEGEL_WORKERS";

/// Serializes an exact rational as the string `"num/den"`.
pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", q.numer(), q.denom()))
}

pub fn ser_opt_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => ser_rational(q, s),
        None => s.serialize_none(),
    }
}

/// Serializes through `Display`; used for big integers.
pub fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn ser_display_vec<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

pub fn ser_display_matrix<T: std::fmt::Display, S: Serializer>(
    m: &[Vec<T>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    ReduceThenRefine,
    Enumerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Monotonicity,
    Remark1,
    Remark2,
    Lemma3,
    Theorem1,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Monotonicity => Suite::Monotonicity,
            SuiteArg::Remark1 => Suite::Remark1,
            SuiteArg::Remark2 => Suite::Remark2,
            SuiteArg::Lemma3 => Suite::Lemma3,
            SuiteArg::Theorem1 => Suite::Theorem1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "siegel", version, about = "Sinc constants, cube sections and small solutions of linear forms")]
pub struct RunConfig {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Absolute tolerance for quadrature.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Write the output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact and numerical sigma_n.
    Sigma {
        #[arg(long)]
        n: u32,
        /// Print only the exact value.
        #[arg(long)]
        exact: bool,
        /// Also evaluate the defining integral numerically.
        #[arg(long)]
        quadrature: bool,
    },
    /// Lower bounds for the largest element of a sum-distinct set.
    Bounds {
        #[arg(long)]
        from: u32,
        #[arg(long)]
        to: u32,
    },
    /// Small max-norm solutions of a1 x1 + ... + an xn = 0.
    Solve {
        /// Comma-separated integer coefficients.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = StrategyArg::ReduceThenRefine)]
        strategy: StrategyArg,
    },
    /// Sum-distinctness and the lower bound for a set.
    Check {
        /// Comma-separated positive integers, increasing.
        #[arg(long)]
        set: String,
    },
    /// Run a seeded falsification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Volume of the central cube section orthogonal to a direction.
    Section {
        /// Comma-separated components.
        #[arg(long, allow_hyphen_values = true)]
        direction: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(code: i32, msg: impl Into<String>) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: msg.into(),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_INVALID,
        Error::ResourceLimit { .. } => EXIT_LIMIT,
        Error::Convergence { .. } => EXIT_FAILED,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome::error(code, text)
            };
        }
    };
    let pool = match worker_pool() {
        Ok(p) => p,
        Err(e) => return Outcome::error(EXIT_INVALID, format!("{e}\n")),
    };
    let (code, stdout) = match pool.install(|| dispatch(&config)) {
        Ok(r) => r,
        Err(e) => {
            let mut msg = format!("error: {e}\n");
            if let Error::ResourceLimit { best: Some(best), .. } = &e {
                let _ = writeln!(msg, "best upper bounds found (not certified):");
                msg.push_str(&render_certificate(best));
            }
            return Outcome::error(exit_code(&e), msg);
        }
    };
    match &config.out {
        Some(path) => match std::fs::write(path, &stdout) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome::error(EXIT_INVALID, format!("error: cannot write {}: {e}\n", path.display())),
        },
        None => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
    }
}

fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Error::invalid(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))
}

fn dispatch(config: &RunConfig) -> Result<(i32, String)> {
    if !(config.tol > 0.0) || !config.tol.is_finite() {
        return Err(Error::invalid(format!("--tol must be positive, got {}", config.tol)));
    }
    let f = config.format;
    match &config.command {
        Command::Sigma { n, exact, quadrature } => cmd_sigma(*n, *exact, *quadrature, config.tol, f),
        Command::Bounds { from, to } => cmd_bounds(*from, *to, f),
        Command::Solve { coeffs, strategy } => cmd_solve(coeffs, *strategy, f),
        Command::Check { set } => cmd_check(set, f),
        Command::Verify { suite, trials } => cmd_verify((*suite).into(), *trials, config.seed, f),
        Command::Section { direction } => cmd_section(direction, config.tol, f),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn split_list(text: &str) -> impl Iterator<Item = &str> {
    text.split(',').map(str::trim)
}

fn parse_ints(text: &str) -> Result<Vec<BigInt>> {
    split_list(text)
        .map(|s| s.parse::<BigInt>().map_err(|_| Error::invalid(format!("not an integer: {s:?}"))))
        .collect()
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    split_list(text)
        .map(|s| s.parse::<f64>().map_err(|_| Error::invalid(format!("not a number: {s:?}"))))
        .collect()
}

fn cmd_sigma(n: u32, exact_only: bool, quadrature: bool, tol: f64, f: Format) -> Result<(i32, String)> {
    let value = SigmaValue::new(n)?;
    let quad = if quadrature { Some(sigma_quadrature(n, tol)?) } else { None };
    let out = match f {
        Format::Json => to_json(&json!({
            "n": value.n,
            "exact": format!("{}/{}", value.exact.numer(), value.exact.denom()),
            "float64": value.float64,
            "quadrature": quad,
        })),
        Format::Csv => {
            let mut s = String::from("n,sigma_num,sigma_den,float64");
            if quad.is_some() {
                s.push_str(",quadrature,quadrature_error");
            }
            let _ = write!(s, "\n{},{},{},{}", n, value.exact.numer(), value.exact.denom(), value.float64);
            if let Some(q) = &quad {
                let _ = write!(s, ",{},{}", q.value, q.error);
            }
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = if exact_only {
                format!("{}\n", fmt_q(&value.exact))
            } else {
                format!("sigma_{n} = {} ~ {}\n", fmt_q(&value.exact), value.float64)
            };
            if let Some(q) = &quad {
                let _ = writeln!(s, "quadrature {} +/- {:.1e}", q.value, q.error);
            }
            s
        }
    };
    Ok((EXIT_OK, out))
}

fn best_name(row: &BoundsRow) -> &'static str {
    match row.best {
        crate::sum_distinct::BestBound::New => "new",
        crate::sum_distinct::BestBound::Elkies => "elkies",
        crate::sum_distinct::BestBound::ErdosMoser => "erdos_moser",
    }
}

fn cmd_bounds(from: u32, to: u32, f: Format) -> Result<(i32, String)> {
    let rows = bounds_table(from, to)?;
    let out = match f {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut s = String::from(
                "n,sigma_num,sigma_den,new_bound_float,new_bound_integer,elkies_num,elkies_den,em_float,best\n",
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.n,
                    r.sigma.numer(),
                    r.sigma.denom(),
                    to_f64(&r.new_bound),
                    r.new_bound_integer,
                    r.elkies.numer(),
                    r.elkies.denom(),
                    r.erdos_moser.to_f64(),
                    best_name(r)
                );
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{:>5}  {:>14}  {:>12}  {:>14}  {:>14}  {}\n",
                "n", "new bound", "a_n >=", "Elkies", "Erdos-Moser", "best"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>5}  {:>14.6e}  {:>12}  {:>14.6e}  {:>14.6e}  {}",
                    r.n,
                    to_f64(&r.new_bound),
                    short_int(&r.new_bound_integer),
                    to_f64(&r.elkies),
                    r.erdos_moser.to_f64(),
                    best_name(r)
                );
            }
            s
        }
    };
    Ok((EXIT_OK, out))
}

fn short_int(x: &BigInt) -> String {
    let s = x.to_string();
    if s.len() <= 12 {
        s
    } else {
        format!("~{:.4e}", s.parse::<f64>().unwrap_or(f64::INFINITY))
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn render_certificate(c: &MinimaCertificate) -> String {
    let mut s = format!("form: {}\n", join(c.form.coeffs()));
    s.push_str("witnesses:\n");
    for (w, l) in c.witnesses.iter().zip(&c.lambdas) {
        let _ = writeln!(s, "  ({})  norm {l}", join(w));
    }
    let _ = writeln!(s, "lambdas: {}", join(&c.lambdas));
    let _ = write!(s, "product {}, bound {}", c.product, fmt_q(&c.bound));
    if let Some(sb) = &c.siegel_bound {
        let _ = write!(s, ", siegel bound {}", fmt_q(sb));
    }
    let method = match c.method {
        crate::kernel_lattice::MinimaMethod::EnumerationExact => "exact enumeration",
        crate::kernel_lattice::MinimaMethod::ReductionHeuristic => "reduced basis",
    };
    let _ = writeln!(s, ", certified {} ({method})", c.certified);
    s
}

fn cmd_solve(coeffs: &str, strategy: StrategyArg, f: Format) -> Result<(i32, String)> {
    let form = LinearForm::new(parse_ints(coeffs)?)?;
    let strategy = match strategy {
        StrategyArg::ReduceThenRefine => Strategy::ReduceThenRefine,
        StrategyArg::Enumerate => Strategy::Enumerate,
    };
    let cert = small_solutions(&form, strategy, Budget::default())?;
    let code = if cert.certified { EXIT_OK } else { EXIT_FAILED };
    let out = match f {
        Format::Json => to_json(&cert),
        Format::Csv => {
            let mut s = String::from("index,lambda,witness\n");
            for (i, (w, l)) in cert.witnesses.iter().zip(&cert.lambdas).enumerate() {
                let _ = writeln!(s, "{},{},\"{}\"", i + 1, l, join(w));
            }
            s
        }
        Format::Text => render_certificate(&cert),
    };
    Ok((code, out))
}

fn cmd_check(set: &str, f: Format) -> Result<(i32, String)> {
    let s = SumDistinctSet::new(parse_ints(set)?)?;
    let check = is_sum_distinct(&s, DEFAULT_MAX_ELEMENTS)?;
    if let Some(w) = &check.witness {
        let out = match f {
            Format::Json => to_json(&check),
            Format::Csv => format!("sum_distinct,witness_left,witness_right\nfalse,\"{}\",\"{}\"\n", join(&w.left), join(&w.right)),
            Format::Text => format!("sum-distinct: false; witness {w}\n"),
        };
        return Ok((EXIT_FAILED, out));
    }
    let cert = certify_set(&s, Budget::default())?;
    let code = if cert.passes() { EXIT_OK } else { EXIT_FAILED };
    let out = match f {
        Format::Json => to_json(&json!({
            "sum_distinct": true,
            "certificate": cert,
        })),
        Format::Csv => format!(
            "sum_distinct,largest,bound_num,bound_den,bound_holds,lambda1\ntrue,{},{},{},{},{}\n",
            cert.largest,
            cert.bound.numer(),
            cert.bound.denom(),
            cert.bound_holds,
            cert.lambda1.map(|l| l.to_string()).unwrap_or_default()
        ),
        Format::Text => format!(
            "sum-distinct: true; bound {} < {}: {}\n",
            fmt_q(&cert.bound),
            cert.largest,
            if cert.passes() { "ok" } else { "FAIL" }
        ),
    };
    Ok((code, out))
}

fn cmd_verify(suite: Suite, trials: usize, seed: u64, f: Format) -> Result<(i32, String)> {
    if trials == 0 {
        return Err(Error::invalid("--trials must be positive"));
    }
    let report = run_suite(suite, trials, seed)?;
    let code = if report.passed { EXIT_OK } else { EXIT_FAILED };
    let out = match f {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("suite,check,passed,detail\n");
            for c in &report.checks {
                let _ = writeln!(s, "{},\"{}\",{},\"{}\"", suite, c.name, c.passed, c.detail);
            }
            s
        }
        Format::Text => {
            let mut s = format!("suite {suite}: {}\n", if report.passed { "pass" } else { "FAIL" });
            for c in &report.checks {
                let _ = writeln!(s, "  {c}");
            }
            s
        }
    };
    Ok((code, out))
}

fn cmd_section(direction: &str, tol: f64, f: Format) -> Result<(i32, String)> {
    let d = Direction::new(parse_floats(direction)?)?;
    let v = section_volume(&d, tol)?;
    let out = match f {
        Format::Json => to_json(&v),
        Format::Csv => format!("value,error_estimate\n{},{}\n", v.value, v.error_estimate),
        Format::Text => format!("{} +/- {:.1e}\n", v.value, v.error_estimate),
    };
    Ok((EXIT_OK, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("siegel").chain(args.iter().copied()))
    }

    #[test]
    fn sigma_text() {
        assert_eq!(run_args(&["sigma", "--n", "5", "--exact"]).stdout, "115/192\n");
        assert_eq!(run_args(&["sigma", "--n", "1", "--exact"]).stdout, "1\n");
        assert_eq!(run_args(&["sigma", "--n", "0"]).code, EXIT_INVALID);
    }

    #[test]
    fn rationals_serialize_with_denominator() {
        let out = run_args(&["sigma", "--n", "1", "--format", "json"]).stdout;
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["exact"], "1/1");
    }

    #[test]
    fn unknown_flags_are_invalid_input() {
        assert_eq!(run_args(&["sigma", "--m", "3"]).code, EXIT_INVALID);
        assert_eq!(run_args(&["--help"]).code, EXIT_OK);
    }
}
