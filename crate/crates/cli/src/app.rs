use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use fracbvp::bvp::{
    lower_bound_check, solve_fixed_point, Parameters, ProblemSpec, SolverOptions, Start,
};
use fracbvp::green::{kernel_properties, KernelReport};
use fracbvp::polyid::{caputo_closed_form, polynomial, power_rule_oracle, Family};
use fracbvp::regime::{
    classify, sweep, HypothesisReport, LimitClass, RegimeVerdict, SolveOutcome, DEFAULT_DELTA,
};
use fracbvp::Order;

use crate::config::{ConfigError, RunConfig};
use crate::expr::{parse_expr, ParseError};
use crate::range::Range;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fracbvp", version, about = "Caputo p-Laplacian boundary-value toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// key = value configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file for the command's CSV or report.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Grid nodes.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Overrides a config entry, e.g. `--set lambda=0.2`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the boundary-value problem by fixed-point iteration.
    Solve {
        #[command(flatten)]
        args: ProblemArgs,
    },
    /// Check (H1)-(H6) and classify the configured (λ, μ).
    Classify {
        #[command(flatten)]
        args: ProblemArgs,
    },
    /// Classify every cell of a (λ, μ) grid, optionally solving each.
    Sweep {
        #[command(flatten)]
        args: ProblemArgs,
        /// λ values as start:stop:count.
        #[arg(long = "lambda-range")]
        lambda_range: Option<Range>,
        /// μ values as start:stop:count.
        #[arg(long = "mu-range")]
        mu_range: Option<Range>,
        /// Also run the solver in every cell.
        #[arg(long)]
        solve: bool,
    },
    /// Check nonnegativity, domination, the lower bound and continuity of H(t,s).
    GreenCheck {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3.1, 3.5, 4.0])]
        beta: Vec<f64>,
        /// Points per axis.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form Caputo derivative of a Bernoulli, Euler or Genocchi polynomial.
    Poly {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        l: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }
}

impl From<fracbvp::Error> for CliError {
    fn from(e: fracbvp::Error) -> Self {
        use fracbvp::Error as E;
        match e {
            E::Domain(_) | E::Validation(_) | E::Resource(_) => CliError::Validation(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Validation(format!("config: {e}"))
    }
}

/// Output of a command: the primary artifact and a key=value report.
#[derive(Debug, Default)]
pub struct Outcome {
    pub artifact: String,
    pub report: String,
    /// Nonzero when the command ran but its numerical target was not met.
    pub exit: i32,
}

/// Parses arguments and runs the command. The artifact goes to `--out` when
/// given (and the report to `stdout`), otherwise the artifact goes to
/// `stdout` and the report to `stderr`. Nothing is written to `--out` unless
/// the command succeeds.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let out = match &cli.command {
        Command::Solve { args } | Command::Classify { args } | Command::Sweep { args, .. } => {
            args.out.clone()
        }
        Command::GreenCheck { out, .. } | Command::Poly { out, .. } => out.clone(),
    };
    match execute(&cli.command) {
        Ok(o) => match emit(&o, out.as_deref(), stdout, stderr) {
            Ok(()) => o.exit,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_VALIDATION
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(o: &Outcome, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::io::Result<()> {
    match out {
        Some(path) if o.exit == EXIT_OK => {
            write_atomic(path, o.artifact.as_bytes())?;
            stdout.write_all(o.report.as_bytes())
        }
        Some(_) => stdout.write_all(o.report.as_bytes()),
        None => {
            stdout.write_all(o.artifact.as_bytes())?;
            stderr.write_all(o.report.as_bytes())
        }
    }
}

/// Writes next to `path` and renames, so readers never see a partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Solve { args } => cmd_solve(&load_config(args)?),
        Command::Classify { args } => cmd_classify(&load_config(args)?),
        Command::Sweep {
            args,
            lambda_range,
            mu_range,
            solve,
        } => {
            let mut cfg = load_config(args)?;
            if let Some(r) = lambda_range {
                cfg.set("lambda_range", r.to_string())?;
            }
            if let Some(r) = mu_range {
                cfg.set("mu_range", r.to_string())?;
            }
            if *solve {
                cfg.set("solve", "true")?;
            }
            cmd_sweep(&cfg)
        }
        Command::GreenCheck { beta, grid, .. } => cmd_green_check(beta, *grid),
        Command::Poly {
            family, l, m, alpha, ..
        } => cmd_poly(*family, *l, *m, *alpha),
    }
}

/// Reads `--config`, then applies `--set` entries and the dedicated flags.
pub fn load_config(args: &ProblemArgs) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Validation(format!("cannot read {}: {e}", path.display()))
            })?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for kv in &args.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| CliError::Validation(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(g) = args.grid {
        cfg.set("grid", g.to_string())?;
    }
    if let Some(t) = args.tol {
        cfg.set("tol", format!("{t:?}"))?;
    }
    if let Some(k) = args.max_iter {
        cfg.set("max_iter", k.to_string())?;
    }
    Ok(cfg)
}

fn expression(cfg: &RunConfig, key: &str, var: &'static str) -> Result<Arc<dyn Fn(f64) -> f64 + Send + Sync>, CliError> {
    let text = cfg.require(key)?;
    let e = parse_expr(text, var).map_err(|e: ParseError| CliError::Validation(format!("`{key}`: {e}")))?;
    Ok(Arc::new(move |x| e.eval(x).unwrap_or(f64::NAN)))
}

/// Builds the problem from the config; sampling faults surface as validation errors.
pub fn problem_from_config(cfg: &RunConfig) -> Result<ProblemSpec, CliError> {
    let params = Parameters {
        alpha: cfg.require_f64("alpha")?,
        beta: cfg.require_f64("beta")?,
        p: cfg.require_f64("p")?,
        gamma: cfg.require_f64("gamma")?,
        h: cfg.require_f64("h")?,
        lambda: cfg.require_f64("lambda")?,
        mu: cfg.require_f64("mu")?,
    };
    let a = expression(cfg, "a", "t")?;
    let f = expression(cfg, "f", "u")?;
    Ok(ProblemSpec::from_arcs(params, a, f)?)
}

pub fn solver_options(cfg: &RunConfig) -> Result<SolverOptions, CliError> {
    let d = SolverOptions::default();
    let start = match cfg.get("start") {
        None | Some("zero") => Start::Zero,
        Some(_) => Start::Constant(cfg.require_f64("start")?),
    };
    let opts = SolverOptions {
        nodes: cfg.usize("grid")?.unwrap_or(d.nodes),
        tol: cfg.f64("tol")?.unwrap_or(d.tol),
        max_iter: cfg.usize("max_iter")?.unwrap_or(d.max_iter),
        damping: cfg.f64("damping")?,
        start,
    };
    opts.validate()?;
    Ok(opts)
}

fn delta(cfg: &RunConfig) -> Result<f64, CliError> {
    let d = cfg.f64("delta")?.unwrap_or(DEFAULT_DELTA);
    if !(d > 0.0 && d < 1.0) {
        return Err(cfg.error("delta", "must lie in (0, 1)").into());
    }
    Ok(d)
}

/// Fixed-width scientific notation: 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Numeric(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numeric(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

struct Report(String);

impl Report {
    fn new(command: &str) -> Self {
        Report(format!("command={command}\n"))
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        let _ = writeln!(self.0, "{key}={value}");
        self
    }

    fn num(&mut self, key: &str, v: f64) -> &mut Self {
        self.kv(key, num(v))
    }
}

fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = problem_from_config(cfg)?;
    let opts = solver_options(cfg)?;
    let delta = delta(cfg)?;
    let mut rep = Report::new("solve");
    rep.kv("nodes", opts.nodes);
    let sol = match solve_fixed_point(&spec, &opts) {
        Ok(s) => s,
        Err(e @ (fracbvp::Error::MaxIterExceeded { .. } | fracbvp::Error::Diverged { .. })) => {
            let status = SolveOutcome::from(Err(e.clone()));
            rep.kv("converged", false).kv("status", status.label());
            match status {
                SolveOutcome::MaxIterExceeded { iterations, last_increment } => {
                    rep.kv("iterations", iterations).num("last_increment", last_increment);
                }
                SolveOutcome::Diverged { iteration } => {
                    rep.kv("iterations", iteration);
                }
                _ => {}
            }
            return Ok(Outcome {
                artifact: String::new(),
                report: rep.0,
                exit: EXIT_NUMERIC,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let lb = lower_bound_check(&sol.u, delta, spec.alpha(), spec.beta(), spec.exponent().q())?;
    rep.kv("converged", sol.converged)
        .kv("status", "converged")
        .kv("iterations", sol.iterations)
        .num("damping", sol.damping)
        .num("fp_residual", sol.fp_residual)
        .num("bc_residual_value", sol.bc_residuals.0)
        .num("bc_residual_slope", sol.bc_residuals.1)
        .num("sup_norm", sol.u.sup_norm())
        .num("delta", lb.delta)
        .num("c_delta", lb.c_delta)
        .num("lower_bound_margin", lb.min_margin)
        .kv("lower_bound_passed", lb.passed);
    let artifact = csv_bytes(
        &["t", "u"],
        sol.u.nodes().zip(sol.u.values()).map(|(t, u)| vec![num(t), num(*u)]),
    )?;
    Ok(Outcome {
        artifact,
        report: rep.0,
        exit: EXIT_OK,
    })
}

fn limit(c: LimitClass) -> String {
    match c {
        LimitClass::Finite(v) => format!("finite({})", num(v)),
        other => other.to_string(),
    }
}

fn report_hypotheses(rep: &mut Report, r: &HypothesisReport) {
    rep.kv("h1", r.h1.satisfied).num("h1_integral", r.h1.value);
    rep.kv("h2", r.h2.is_some());
    if let Some(w) = r.h2 {
        rep.num("h2_sigma", w.sigma).num("h2_c", w.c).num("h2_l", w.l).num("h2_l_max", w.l_max);
    }
    rep.kv("h3", r.h3.is_some());
    if let Some(w) = r.h3 {
        rep.num("h3_m", w.m).num("h3_d", w.d).num("h3_m_max", w.m_max);
    }
    rep.kv("h4", r.h4.is_some());
    if let Some(w) = r.h4 {
        rep.num("h4_n", w.n)
            .num("h4_e", w.e)
            .num("h4_n_min", w.n_min)
            .num("h4_delta", w.delta)
            .num("h4_c_delta", w.c_delta);
    }
    rep.kv("h5", r.h5).kv("h6", r.h6.is_some());
    if let Some(t) = r.h6 {
        rep.num("h6_theta", t);
    }
    rep.num("theta_estimate", r.theta_estimate)
        .kv("f0", limit(r.f0))
        .kv("f_inf", limit(r.f_inf));
}

fn report_verdict(rep: &mut Report, v: &RegimeVerdict) {
    rep.num("lambda", v.lambda)
        .num("mu", v.mu)
        .kv("verdict", v.verdict)
        .kv("lambda_exist_bound", opt_num(v.lambda_exist_bound))
        .kv("lambda_exist_bound_stated", opt_num(v.lambda_exist_bound_stated))
        .kv("lambda_nonexist_bound", opt_num(v.lambda_nonexist_bound))
        .kv("consistency_warning", v.consistency_warning);
}

fn cmd_classify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = problem_from_config(cfg)?;
    let report = HypothesisReport::compute(&spec, delta(cfg)?)?;
    let verdict = classify(&spec, &report);
    let mut rep = Report::new("classify");
    report_hypotheses(&mut rep, &report);
    report_verdict(&mut rep, &verdict);
    Ok(Outcome {
        artifact: rep.0,
        report: String::new(),
        exit: EXIT_OK,
    })
}

fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let lambdas = cfg
        .range("lambda_range")?
        .ok_or_else(|| CliError::Validation("sweep needs lambda_range (or --lambda-range)".into()))?;
    let mus = cfg
        .range("mu_range")?
        .ok_or_else(|| CliError::Validation("sweep needs mu_range (or --mu-range)".into()))?;
    // the template's λ, μ are placeholders: each cell replaces them
    let mut cfg = cfg.clone();
    if cfg.get("lambda").is_none() {
        cfg.set("lambda", format!("{:?}", lambdas.start))?;
    }
    if cfg.get("mu").is_none() {
        cfg.set("mu", format!("{:?}", mus.start))?;
    }
    let spec = problem_from_config(&cfg)?;
    let solve = cfg.bool("solve")?.unwrap_or(false);
    let opts = if solve { Some(solver_options(&cfg)?) } else { None };
    let report = HypothesisReport::compute(&spec, delta(&cfg)?)?;
    let rows = sweep(&spec, &lambdas.values(), &mus.values(), &report, opts.as_ref())?;

    let mut header = vec![
        "lambda",
        "mu",
        "verdict",
        "lambda_exist_bound",
        "lambda_exist_bound_stated",
        "lambda_nonexist_bound",
        "consistency_warning",
    ];
    if solve {
        header.extend(["solve_status", "iterations", "residual"]);
    }
    let artifact = csv_bytes(
        &header,
        rows.iter().map(|row| {
            let v = &row.verdict;
            let mut rec = vec![
                num(v.lambda),
                num(v.mu),
                v.verdict.to_string(),
                opt_num(v.lambda_exist_bound),
                opt_num(v.lambda_exist_bound_stated),
                opt_num(v.lambda_nonexist_bound),
                v.consistency_warning.to_string(),
            ];
            if let Some(s) = &row.solve {
                let (it, res) = match s {
                    SolveOutcome::Converged { iterations, residual } => {
                        (iterations.to_string(), num(*residual))
                    }
                    SolveOutcome::MaxIterExceeded { iterations, last_increment } => {
                        (iterations.to_string(), num(*last_increment))
                    }
                    SolveOutcome::Diverged { iteration } => (iteration.to_string(), String::new()),
                    SolveOutcome::Failed(_) => (String::new(), String::new()),
                };
                rec.extend([s.label().to_string(), it, res]);
            }
            rec
        }),
    )?;
    let mut rep = Report::new("sweep");
    rep.kv("cells", rows.len());
    report_hypotheses(&mut rep, &report);
    Ok(Outcome {
        artifact,
        report: rep.0,
        exit: EXIT_OK,
    })
}

fn cmd_green_check(betas: &[f64], grid: usize) -> Result<Outcome, CliError> {
    let mut rep = Report::new("green-check");
    rep.kv("grid", grid);
    let mut all = true;
    for &b in betas {
        let r: KernelReport = kernel_properties(Order::new(b)?, grid)?;
        let tag = format!("beta_{b}");
        rep.num(&format!("{tag}.min_value"), r.min_value)
            .num(&format!("{tag}.max_domination_excess"), r.max_domination_excess)
            .num(&format!("{tag}.min_lower_margin"), r.min_lower_margin)
            .num(&format!("{tag}.max_branch_gap"), r.max_branch_gap)
            .kv(&format!("{tag}.passed"), r.passed());
        all &= r.passed();
    }
    rep.kv("passed", all);
    Ok(Outcome {
        artifact: rep.0,
        report: String::new(),
        exit: if all { EXIT_OK } else { EXIT_NUMERIC },
    })
}

fn cmd_poly(family: Family, l: usize, m: usize, alpha: f64) -> Result<Outcome, CliError> {
    let alpha = Order::new(alpha)?;
    let closed = caputo_closed_form(family, l, m, alpha)?;
    let oracle = power_rule_oracle(&polynomial(family, l, m)?, alpha)?;
    // compare term by term on the union of exponents
    let deviation = closed
        .terms()
        .iter()
        .chain(oracle.terms())
        .map(|&(_, e)| {
            let find = |p: &fracbvp::FracPoly| {
                p.terms().iter().find(|t| (t.1 - e).abs() < 1e-12).map_or(0.0, |t| t.0)
            };
            let (x, y) = (find(&closed), find(&oracle));
            (x - y).abs() / y.abs().max(f64::MIN_POSITIVE)
        })
        .fold(0.0, f64::max);
    let artifact = csv_bytes(
        &["coefficient", "exponent"],
        closed.terms().iter().map(|(c, e)| vec![num(*c), num(*e)]),
    )?;
    let mut rep = Report::new("poly");
    rep.kv("family", family)
        .kv("l", l)
        .kv("m", m)
        .num("alpha", alpha.value())
        .kv("terms", closed.terms().len())
        .num("oracle_max_rel_deviation", deviation);
    Ok(Outcome {
        artifact,
        report: rep.0,
        exit: EXIT_OK,
    })
}
