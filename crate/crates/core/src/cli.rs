//! Command-line front end.
//!
//! Results go to `stdout` as one JSON document or a CSV stream; diagnostics go
//! to `stderr`. Exit codes: 0 success, 1 domain error, 2 usage error,
//! 3 verification failure.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::geodesic::{family_eval, geodesic, geodesic_eval, GeodesicResult};
use crate::kernel::{log_kernel, log_kernel_nd, singular_times};
use crate::operator::{classify, parse_operator, OUOperator, ParsedOperator, ProductOperator, DEFAULT_EPS_CLASS};
use crate::verify::{run_suite, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ou-heat", version, about = "Geodesics and heat kernels of Ornstein-Uhlenbeck operators with quadratic potentials")]
struct Cli {
    /// Operator as inline JSON, e.g. '{"theta":1,"a":1,"b":0,"rho":1}'.
    #[arg(long, global = true, conflicts_with = "op_file")]
    op: Option<String>,
    /// Path to a file holding the operator JSON.
    #[arg(long, global = true)]
    op_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Relative tolerance for classifying an operator as critical.
    #[arg(long, global = true, default_value_t = DEFAULT_EPS_CLASS)]
    eps_class: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Regime, λ₀ and discriminant.
    Classify,
    /// Geodesic from x0 at s = 0 to x at s = 1, sampled on [0, 1].
    Geodesic {
        #[arg(long, allow_negative_numbers = true)]
        x0: f64,
        /// Endpoint at s = 1.
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// ln P(t; x, x0); coordinates are comma-separated for product operators.
    Kernel {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 20_000)]
        paths: u64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
    },
    /// CSV grid of ln P over times × an x-range, for plotting.
    Sample {
        /// Comma-separated times.
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Range `lo,hi` of the forward variable.
        #[arg(long, allow_hyphen_values = true, default_value = "-2,2")]
        x: String,
        #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
        x0: f64,
        /// Grid points per time.
        #[arg(long, default_value_t = 101)]
        samples: usize,
    },
    /// Conjugate times kπ/λ₀ up to t.
    SingularTimes {
        #[arg(long)]
        t: f64,
    },
}

/// Failure of a subcommand: exit code plus what to print.
struct Failure {
    code: i32,
    /// JSON body for `stdout`, if any.
    body: Option<Value>,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            body: None,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (mut inner, mut factor) = (&e, None);
        if let Error::Factor { index, source } = &e {
            inner = source;
            factor = Some(*index);
        }
        let mut body = match inner {
            Error::SingularTime(s) => json!({"error": "singular_time", "k": s.k, "t_singular": s.t_singular, "t": s.t}),
            Error::InvalidOperator { .. } | Error::Parse(_) | Error::InvalidArgument(_) => {
                return Failure::usage(message)
            }
            Error::NonPositiveTime(t) => json!({"error": "non_positive_time", "t": t}),
            Error::DimensionMismatch { expected, got } => {
                return Failure::usage(format!("dimension mismatch: operator has {expected} factors, got {got}"))
            }
            other => json!({"error": "domain", "message": other.to_string()}),
        };
        if let (Some(i), Value::Object(map)) = (factor, &mut body) {
            map.insert("factor".into(), i.into());
        }
        Failure {
            code: EXIT_DOMAIN,
            body: Some(body),
            message,
        }
    }
}

type Outcome = std::result::Result<(i32, String), Failure>;

/// Runs the CLI on `args` (including the program name).
pub fn run<I, S>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok((code, out)) => {
            let _ = stdout.write_all(out.as_bytes());
            code
        }
        Err(f) => {
            if let Some(body) = f.body {
                let _ = writeln!(stdout, "{body}");
            }
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load_operator(cli: &Cli) -> std::result::Result<ParsedOperator, Failure> {
    let text = match (&cli.op, &cli.op_file) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read operator file {}: {e}", path.display())))?,
        (None, None) => return Err(Failure::usage("an operator is required (--op or --op-file)")),
    };
    Ok(parse_operator(&text)?)
}

fn single(parsed: ParsedOperator) -> std::result::Result<OUOperator, Failure> {
    match parsed {
        ParsedOperator::Single(op) => Ok(op),
        ParsedOperator::Product(_) => Err(Failure::usage("this subcommand takes a single operator, not a product")),
    }
}

fn parse_list(name: &str, text: &str) -> std::result::Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::usage(format!("--{name}: invalid number {:?}", s.trim())))
        })
        .collect()
}

/// Full double precision: 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_doc(v: Value) -> String {
    format!("{v}\n")
}

fn execute(cli: &Cli) -> Outcome {
    let parsed = load_operator(cli)?;
    match &cli.command {
        Command::Classify => classify_cmd(cli, single(parsed)?),
        Command::Geodesic { x0, x, samples } => geodesic_cmd(cli, &single(parsed)?, *x0, *x, *samples),
        Command::Kernel { t, x, x0 } => kernel_cmd(cli, parsed, *t, x, x0),
        Command::Verify { suite, seed, paths, dt } => {
            let suite: Suite = suite.parse()?;
            let config = SuiteConfig {
                seed: *seed,
                paths: *paths,
                dt: *dt,
            };
            verify_cmd(cli, &single(parsed)?, suite, &config)
        }
        Command::Sample { t, x, x0, samples } => sample_cmd(&parsed.into_product(), t, x, *x0, *samples),
        Command::SingularTimes { t } => singular_times_cmd(cli, &single(parsed)?, *t),
    }
}

fn classify_cmd(cli: &Cli, op: OUOperator) -> Outcome {
    let reg = classify(&op, cli.eps_class);
    Ok(match cli.format {
        Format::Json => (
            EXIT_OK,
            json_doc(json!({"regime": reg.name(), "lambda0": reg.lambda0(), "discriminant": reg.discriminant()})),
        ),
        Format::Csv => {
            let lambda0 = reg.lambda0().map(num).unwrap_or_default();
            (EXIT_OK, format!("regime,lambda0,discriminant\n{},{},{}\n", reg.name(), lambda0, num(reg.discriminant())))
        }
    })
}

fn geodesic_cmd(cli: &Cli, op: &OUOperator, x0: f64, x1: f64, samples: usize) -> Outcome {
    if samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let grid: Vec<f64> = (0..samples).map(|i| i as f64 / (samples - 1) as f64).collect();
    let (head, path) = match geodesic(op, x0, x1) {
        GeodesicResult::Unique { path } => {
            let xs = grid.iter().map(|&s| geodesic_eval(&path, s)).collect::<Result<Vec<_>, _>>()?;
            (json!({"result": "unique", "regime": path.regime().name(), "x0": x0, "x1": x1}), Some(xs))
        }
        GeodesicResult::Family { family } => {
            // The member printed is c₂ = 0.
            let xs = grid.iter().map(|&s| family_eval(&family, 0.0, s)).collect::<Result<Vec<_>, _>>()?;
            (
                json!({"result": "family", "k": family.k, "x0": x0, "x1": x1,
                       "forced_endpoint": family.forced_endpoint(), "c2": 0.0}),
                Some(xs),
            )
        }
        GeodesicResult::NoSolution { k, required_endpoint } => (
            json!({"result": "no_solution", "k": k, "x0": x0, "x1": x1, "required_endpoint": required_endpoint}),
            None,
        ),
    };
    match cli.format {
        Format::Json => {
            let mut doc = head;
            if let Some(xs) = path {
                doc["s"] = json!(grid);
                doc["x"] = json!(xs);
            }
            Ok((EXIT_OK, json_doc(doc)))
        }
        Format::Csv => {
            let mut out = String::from("s,x\n");
            for (s, x) in grid.iter().zip(path.iter().flatten()) {
                out.push_str(&format!("{},{}\n", num(*s), num(*x)));
            }
            Ok((EXIT_OK, out))
        }
    }
}

fn kernel_cmd(cli: &Cli, parsed: ParsedOperator, t: f64, x: &str, x0: &str) -> Outcome {
    let xs = parse_list("x", x)?;
    let x0s = parse_list("x0", x0)?;
    let log_p = match (&parsed, &xs[..], &x0s[..]) {
        (ParsedOperator::Single(op), [x], [x0]) => log_kernel(op, t, *x, *x0)?,
        _ => log_kernel_nd(&parsed.into_product(), t, &xs, &x0s)?,
    };
    let coord = |v: &[f64]| if v.len() == 1 { json!(v[0]) } else { json!(v) };
    Ok(match cli.format {
        Format::Json => (
            EXIT_OK,
            json_doc(json!({"t": t, "x": coord(&xs), "x0": coord(&x0s), "log_p": log_p, "p": log_p.exp()})),
        ),
        Format::Csv => {
            let join = |v: &[f64]| v.iter().map(|&c| num(c)).collect::<Vec<_>>().join(";");
            (EXIT_OK, format!("t,x,x0,log_p\n{},{},{},{}\n", num(t), join(&xs), join(&x0s), num(log_p)))
        }
    })
}

fn verify_cmd(cli: &Cli, op: &OUOperator, suite: Suite, config: &SuiteConfig) -> Outcome {
    let reports = run_suite(op, suite, config);
    let all_passed = reports.iter().all(|r| r.passed);
    let code = if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
    let out = match cli.format {
        Format::Json => json_doc(json!({
            "suite": suite.name(),
            "seed": config.seed,
            "paths": config.paths,
            "dt": config.dt,
            "passed": all_passed,
            "reports": reports,
        })),
        Format::Csv => {
            let mut out = String::from("name,measured,tolerance,passed\n");
            for r in &reports {
                out.push_str(&format!("{},{},{},{}\n", r.name, num(r.measured), num(r.tolerance), r.passed));
            }
            out
        }
    };
    Ok((code, out))
}

/// Rows `t,x,x0,log_p`. For products, `x` and `x0` are broadcast to every
/// coordinate.
fn sample_cmd(pop: &ProductOperator, t: &str, x: &str, x0: f64, samples: usize) -> Outcome {
    let times = parse_list("t", t)?;
    let range = parse_list("x", x)?;
    let [lo, hi] = range[..] else {
        return Err(Failure::usage("--x must be a range lo,hi"));
    };
    if samples < 2 {
        return Err(Failure::usage("--samples must be at least 2"));
    }
    let n = pop.dim();
    let x0s = vec![x0; n];
    let mut out = String::from("t,x,x0,log_p\n");
    for &tt in &times {
        for i in 0..samples {
            let xx = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            let log_p = log_kernel_nd(pop, tt, &vec![xx; n], &x0s)?;
            out.push_str(&format!("{},{},{},{}\n", num(tt), num(xx), num(x0), num(log_p)));
        }
    }
    Ok((EXIT_OK, out))
}

fn singular_times_cmd(cli: &Cli, op: &OUOperator, t_max: f64) -> Outcome {
    let times = singular_times(op, t_max);
    Ok(match cli.format {
        Format::Json => (EXIT_OK, json_doc(json!({"t_max": t_max, "singular_times": times}))),
        Format::Csv => {
            let mut out = String::from("k,t_singular\n");
            for (k, ts) in times.iter().enumerate() {
                out.push_str(&format!("{},{}\n", k + 1, num(*ts)));
            }
            (EXIT_OK, out)
        }
    })
}
