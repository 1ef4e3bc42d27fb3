//! Command-line front end: single solves, convergence studies and the
//! property suite, all writing CSV or plain text.

pub mod format;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand};
use tmu_fem::verify::{run_suite, SuiteConfig, DEFAULT_SEED};
use tmu_fem::{
    run_study, solve_problem, ErrorRule, ProblemKind, ProblemSpec, QuadratureScheme, RhsMode,
};

#[derive(Debug, Parser)]
#[command(
    name = "tmu-fem",
    version,
    about = "Transformed Galerkin FEM for u'' + mu u = f"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and sample exact and discrete solutions.
    Solve(SolveArgs),
    /// Error table over a list of mu and a range of element counts.
    Study(StudyArgs),
    /// Run the randomized property suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct QuadArgs {
    /// Gauss points per panel.
    #[arg(long, default_value_t = 8)]
    pub quad_order: usize,
    /// Maximum geometric grading levels towards a singular endpoint.
    #[arg(long, default_value_t = 50)]
    pub grading_depth: usize,
}

impl QuadArgs {
    fn scheme(&self) -> anyhow::Result<QuadratureScheme> {
        Ok(QuadratureScheme::default()
            .with_order(self.quad_order)?
            .with_depth(self.grading_depth)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// singular, quadratic, constant-f or custom.
    #[arg(long, default_value = "singular")]
    pub problem: ProblemKind,
    /// Polynomial coefficients of f for the custom problem, lowest degree first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub f_coeffs: Option<Vec<f64>>,
    /// Final time T.
    #[arg(long = "horizon", visible_alias = "T", default_value_t = 1.0)]
    pub horizon: f64,
    /// manufactured, kernel or direct. Defaults to manufactured, or direct
    /// for the custom problem, which has no exact solution.
    #[arg(long)]
    pub rhs_mode: Option<RhsMode>,
}

impl ProblemArgs {
    fn kind(&self) -> anyhow::Result<ProblemKind> {
        match (&self.problem, &self.f_coeffs) {
            (ProblemKind::Custom(_), Some(c)) => Ok(ProblemKind::Custom(c.clone())),
            (kind, None) => Ok(kind.clone()),
            (_, Some(_)) => bail!("--f-coeffs only applies to --problem custom"),
        }
    }

    /// Checks the flags against the problem and picks the load path.
    fn validate(&self, kind: &ProblemKind) -> anyhow::Result<RhsMode> {
        ensure!(
            self.horizon.is_finite() && self.horizon > 0.0,
            "--horizon must be a positive number"
        );
        let custom = matches!(kind, ProblemKind::Custom(_));
        let mode = match self.rhs_mode {
            Some(mode) => mode,
            None if custom => RhsMode::Direct,
            None => RhsMode::Manufactured,
        };
        if *kind == ProblemKind::Singular && mode != RhsMode::Manufactured {
            bail!(
                "the singular problem has f = u'' + mu u outside L2, so the {mode} load path is \
                 undefined; use --rhs-mode manufactured"
            );
        }
        if custom && mode == RhsMode::Manufactured {
            bail!("the custom problem has no exact solution; use --rhs-mode kernel or direct");
        }
        Ok(mode)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Number of elements.
    #[arg(long, value_parser = parse_count)]
    pub elements: usize,
    #[command(flatten)]
    pub quad: QuadArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_count(p: &str) -> Result<usize, String> {
    match p.parse::<usize>() {
        Ok(0) => Err("element counts must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(_) => Err(format!("'{p}' is not an element count")),
    }
}

/// Element counts `start:end:xfactor`, or a single count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementRange(pub Vec<usize>);

impl FromStr for ElementRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [n] => Ok(ElementRange(vec![parse_count(n)?])),
            [start, end, factor] => {
                let (start, end) = (parse_count(start)?, parse_count(end)?);
                let factor = factor
                    .strip_prefix('x')
                    .and_then(|f| f.parse::<usize>().ok())
                    .filter(|&f| f >= 2)
                    .ok_or_else(|| format!("factor '{factor}' must look like x2"))?;
                if end < start {
                    return Err("range end is below its start".into());
                }
                let mut counts = vec![start];
                while let Some(next) = counts
                    .last()
                    .unwrap()
                    .checked_mul(factor)
                    .filter(|&n| n <= end)
                {
                    counts.push(next);
                }
                Ok(ElementRange(counts))
            }
            _ => Err(format!("'{s}' is not N or start:end:xfactor")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct StudyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated positive mu values.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub mu_list: Vec<f64>,
    /// N or start:end:xfactor.
    #[arg(long, default_value = "4:512:x2")]
    pub elements: ElementRange,
    /// graded, or gauss:ORDER for plain Gauss on every element.
    #[arg(long, default_value = "gauss:5")]
    pub error_rule: ErrorRule,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Scales every tolerance. Exists to exercise the failure path.
    #[arg(
        long,
        default_value_t = 1.0,
        hide = true,
        allow_negative_numbers = true
    )]
    pub tolerance_scale: f64,
    #[command(flatten)]
    pub quad: QuadArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Whether a command's own checks passed; I/O and argument problems are
/// reported as errors instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    ChecksFailed,
}

pub fn open_output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let (out, result) = match &cli.command {
        Command::Solve(a) => (a.out.as_ref(), cmd_solve(a).map(|t| (t, Outcome::Success))),
        Command::Study(a) => (a.out.as_ref(), cmd_study(a).map(|t| (t, Outcome::Success))),
        Command::Verify(a) => (a.out.as_ref(), cmd_verify(a)),
    };
    // Everything is computed before the output file is touched.
    let (text, outcome) = result?;
    let mut w = open_output(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(outcome)
}

/// CSV `t,u_exact,u_h` at the nodes and 8 interior points per element.
pub fn cmd_solve(a: &SolveArgs) -> anyhow::Result<String> {
    let kind = a.problem.kind()?;
    let mode = a.problem.validate(&kind)?;
    ensure!(
        a.mu.is_finite() && a.mu >= 0.0,
        "--mu must be a non-negative number"
    );
    let scheme = a.quad.scheme()?;
    let spec = kind.build(a.mu, a.problem.horizon)?;
    let uh = solve_problem(&spec, a.elements, mode, &scheme)?;
    let exact = spec.exact();
    let mesh = uh.mesh();

    let mut csv = String::from("t,u_exact,u_h\n");
    let mut row = |t: f64| -> anyhow::Result<()> {
        let u = exact.map(|e| format::value((e.u)(t))).unwrap_or_default();
        csv.push_str(&format!(
            "{},{},{}\n",
            format::plain(t),
            u,
            format::value(uh.eval(t)?)
        ));
        Ok(())
    };
    for e in 0..mesh.elements() {
        let (lo, hi) = mesh.element(e);
        for i in 0..9 {
            row(if i == 0 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / 9.0
            })?;
        }
    }
    row(mesh.horizon())?;
    Ok(csv)
}

/// CSV `mu,N,h,err_L2,eoc_L2,err_H1,eoc_H1`.
pub fn cmd_study(a: &StudyArgs) -> anyhow::Result<String> {
    let kind = a.problem.kind()?;
    if let ProblemKind::Custom(_) = kind {
        bail!("a study needs an exact solution; the custom problem has none");
    }
    let mode = a.problem.validate(&kind)?;
    ensure!(!a.mu_list.is_empty(), "--mu-list is empty");
    for &mu in &a.mu_list {
        ensure!(
            mu.is_finite() && mu > 0.0,
            "--mu-list values must be positive, got {mu}"
        );
    }
    let scheme = a.quad.scheme()?;
    let horizon = a.problem.horizon;
    let build = |mu: f64| -> tmu_fem::Result<ProblemSpec> { kind.build(mu, horizon) };
    let report = run_study(
        kind.name(),
        &build,
        &a.mu_list,
        &a.elements.0,
        mode,
        a.error_rule,
        &scheme,
    )?;
    if let Some((mu, n, err)) = report.failures().next() {
        bail!("mu = {mu}, N = {n}: {err}");
    }

    let mut csv = String::from("mu,N,h,err_L2,eoc_L2,err_H1,eoc_H1\n");
    for block in &report.blocks {
        for r in &block.rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                format::plain(block.mu),
                r.n,
                format::plain(r.h),
                format::error(r.err_l2),
                format::eoc(r.eoc_l2),
                format::error(r.err_h1),
                format::eoc(r.eoc_h1),
            ));
        }
    }
    Ok(csv)
}

/// One line per property and a closing summary.
pub fn cmd_verify(a: &VerifyArgs) -> anyhow::Result<(String, Outcome)> {
    let config = SuiteConfig {
        seed: a.seed,
        tolerance_scale: a.tolerance_scale,
        scheme: a.quad.scheme()?,
    };
    let outcomes = run_suite(&config)?;
    let mut text = format!("seed {}\n", a.seed);
    for o in &outcomes {
        text.push_str(&format!(
            "{} {:<38} worst {} tolerance {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            format::sci(o.worst, 3),
            format::sci(o.tolerance, 3),
        ));
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    text.push_str(&format!(
        "{} of {} properties passed\n",
        outcomes.len() - failed,
        outcomes.len()
    ));
    let outcome = if failed == 0 {
        Outcome::Success
    } else {
        Outcome::ChecksFailed
    };
    Ok((text, outcome))
}
