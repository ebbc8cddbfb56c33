mod config;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use degenzeta::identities::FailureKind;
use degenzeta::{
    convolution_by_expansion, expand_grid, harmonic, harmonic_higher, hurwitz, integral_closed_with,
    integral_quadrature_with, polylog, verify, zeta, DegenParam, IdentityId, IdentityReport, Params, QuadratureResult,
    SeriesValue, ToleranceBudget,
};
use rayon::prelude::*;

use config::{OutputFormat, SweepConfig};
use output::{json_f64, json_str, render};

const MAX_TERMS_ENV: &str = "DEGENZETA_MAX_TERMS";

/// Verification harness for degenerate harmonic, polylogarithm and zeta identities.
#[derive(Parser)]
#[command(name = "degenzeta", version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Report measured wall time (otherwise elapsed_ms is 0 for byte-stable output)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Text => OutputFormat::Text,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify one identity instance
    Verify(VerifyArgs),
    /// Verify every instance of a parameter grid read from a config file
    Sweep {
        /// Path to the sweep config
        config: std::path::PathBuf,
        /// Worker threads (overrides the config)
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Evaluate a single function
    Eval(EvalArgs),
}

#[derive(Args)]
struct BudgetArgs {
    /// Absolute tolerance of the identity check
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Term ceiling for every series (default from DEGENZETA_MAX_TERMS, else 100000)
    #[arg(long)]
    max_terms: Option<usize>,
    /// Tolerance of quadrature cross-oracles
    #[arg(long, default_value_t = 1e-10)]
    quad_tol: f64,
    /// Panel ceiling of quadrature cross-oracles
    #[arg(long, default_value_t = 20_000)]
    quad_max_panels: usize,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity id
    #[arg(long)]
    identity: String,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Function {
    Zeta,
    Hurwitz,
    Polylog,
    Harmonic,
    HarmonicHigher,
    Convolution,
    IntegralClosed,
    IntegralQuadrature,
}

#[derive(Args)]
struct EvalArgs {
    function: Function,
    #[arg(long)]
    lambda: f64,
    /// Allow λ outside (0, 1] where the function supports it
    #[arg(long)]
    extended: bool,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long, default_value_t = 20_000)]
    max_panels: usize,
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    fn exit(self) -> ExitCode {
        match self {
            CliError::Usage(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            CliError::Compute(m) => {
                eprintln!("error: {m}");
                ExitCode::from(3)
            }
        }
    }
}

fn default_max_terms() -> Result<usize, CliError> {
    match std::env::var(MAX_TERMS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Usage(format!(
                "{MAX_TERMS_ENV} must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(ToleranceBudget::default().max_terms),
    }
}

fn exit_for(reports: &[IdentityReport]) -> ExitCode {
    let kind = |k: FailureKind| reports.iter().any(|r| r.failure.as_ref().is_some_and(|f| f.kind == k));
    if kind(FailureKind::NonConvergence) || kind(FailureKind::Evaluation) {
        ExitCode::from(3)
    } else if reports.iter().all(|r| r.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify(args: VerifyArgs, format: OutputFormat, timing: bool) -> Result<ExitCode, CliError> {
    let id: IdentityId = args
        .identity
        .parse()
        .map_err(|e: degenzeta::Error| CliError::Usage(e.to_string()))?;
    let budget = ToleranceBudget {
        tol: args.budget.tol,
        max_terms: match args.budget.max_terms {
            Some(n) => n,
            None => default_max_terms()?,
        },
        quad_tol: args.budget.quad_tol,
        quad_max_panels: args.budget.quad_max_panels,
    };
    let params = Params {
        lambda: args.lambda,
        p: args.p,
        n: args.n,
        r: args.r,
        m: args.m,
    };
    let report = verify(id, &params, &budget);
    if let Some(f) = &report.failure {
        if f.kind == FailureKind::Constraint {
            return Err(CliError::Usage(f.message.clone()));
        }
    }
    let reports = [report];
    print!("{}", render(&reports, format, timing, false));
    Ok(exit_for(&reports))
}

fn cmd_sweep(
    path: &std::path::Path,
    parallelism: Option<usize>,
    format: Option<OutputFormat>,
    timing: bool,
) -> Result<ExitCode, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let cfg = SweepConfig::parse(&text, default_max_terms()?).map_err(|e| CliError::Usage(e.to_string()))?;
    let cases = expand_grid(&cfg.identities, &cfg.grid).map_err(|e| CliError::Usage(e.to_string()))?;
    let threads = parallelism.unwrap_or(cfg.parallelism);
    if threads == 0 {
        return Err(CliError::Usage("parallelism must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let budget = cfg.budget;
    // collect keeps input order, which expand_grid already sorted
    let reports: Vec<_> = pool.install(|| cases.par_iter().map(|(id, p)| verify(*id, p, &budget)).collect());
    print!(
        "{}",
        render(&reports, format.unwrap_or(cfg.output_format), timing, true)
    );
    Ok(exit_for(&reports))
}

fn need<T>(v: Option<T>, flag: &str, f: Function) -> Result<T, CliError> {
    v.ok_or_else(|| {
        let name = f
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        CliError::Usage(format!("{name} requires --{flag}"))
    })
}

enum Evaluated {
    Series(SeriesValue<f64>),
    Quadrature(QuadratureResult<f64>),
}

fn evaluate(a: &EvalArgs, max_terms: usize) -> Result<Evaluated, CliError> {
    let f = a.function;
    let compute = |e: degenzeta::Error| CliError::Compute(e.to_string());
    let lambda = if a.extended {
        DegenParam::extended(a.lambda)
    } else {
        DegenParam::new(a.lambda)
    }
    .map_err(compute)?;
    let exact = |v: f64, n: usize| SeriesValue {
        terms_used: n,
        ..SeriesValue::exact(v)
    };
    let v = match f {
        Function::Zeta => zeta(need(a.s, "s", f)?, lambda, a.tol, max_terms).map_err(compute)?,
        Function::Hurwitz => {
            hurwitz(need(a.k, "k", f)?, need(a.x, "x", f)?, lambda, a.tol, max_terms).map_err(compute)?
        }
        Function::Polylog => {
            polylog(need(a.p, "p", f)?, need(a.t, "t", f)?, lambda, a.tol, max_terms).map_err(compute)?
        }
        Function::Harmonic => {
            let n = need(a.n, "n", f)?;
            exact(harmonic(n, lambda), n)
        }
        Function::HarmonicHigher => {
            let n = need(a.n, "n", f)?;
            exact(harmonic_higher(n, need(a.p, "p", f)?, lambda).map_err(compute)?, n)
        }
        Function::Convolution => {
            let n = need(a.n, "n", f)?;
            let t = convolution_by_expansion(n, need(a.p, "p", f)?, lambda).map_err(compute)?;
            exact(t.get(n), n)
        }
        Function::IntegralClosed => {
            let zt = a.tol.max(f64::EPSILON * 0.5);
            integral_closed_with(need(a.r, "r", f)?, need(a.p, "p", f)?, lambda, zt).map_err(compute)?
        }
        Function::IntegralQuadrature => {
            let q = integral_quadrature_with(need(a.r, "r", f)?, need(a.p, "p", f)?, lambda, a.tol, a.max_panels)
                .map_err(compute)?;
            if !q.converged {
                return Err(CliError::Compute(format!(
                    "quadrature did not converge: error estimate {:e} after {} evaluations",
                    q.error_estimate, q.evaluations
                )));
            }
            return Ok(Evaluated::Quadrature(q));
        }
    };
    Ok(Evaluated::Series(v))
}

fn cmd_eval(a: EvalArgs, format: OutputFormat) -> Result<ExitCode, CliError> {
    let max_terms = match a.max_terms {
        Some(n) => n,
        None => default_max_terms()?,
    };
    let name = a
        .function
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let (keys, vals): (Vec<&str>, Vec<String>) = match evaluate(&a, max_terms)? {
        Evaluated::Series(v) => (
            vec!["value", "tail_bound", "terms_used", "converged", "certified"],
            vec![
                json_f64(v.value),
                json_f64(v.tail_bound),
                v.terms_used.to_string(),
                v.converged.to_string(),
                v.certified.to_string(),
            ],
        ),
        Evaluated::Quadrature(q) => (
            vec!["value", "error_estimate", "evaluations", "converged"],
            vec![
                json_f64(q.value),
                json_f64(q.error_estimate),
                q.evaluations.to_string(),
                q.converged.to_string(),
            ],
        ),
    };
    match format {
        OutputFormat::Json => {
            let body: Vec<String> = keys.iter().zip(&vals).map(|(k, v)| format!("\"{k}\":{v}")).collect();
            println!("{{\"function\":{},{}}}", json_str(&name), body.join(","));
        }
        OutputFormat::Csv => {
            println!("function,{}", keys.join(","));
            println!("{name},{}", vals.join(","));
        }
        OutputFormat::Text => {
            println!("{name}");
            for (k, v) in keys.iter().zip(&vals) {
                println!("  {k} = {v}");
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.map(OutputFormat::from);
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a, format.unwrap_or(OutputFormat::Json), cli.timing),
        Command::Sweep { config, parallelism } => cmd_sweep(&config, parallelism, format, cli.timing),
        Command::Eval(a) => cmd_eval(a, format.unwrap_or(OutputFormat::Json)),
    };
    result.unwrap_or_else(CliError::exit)
}
