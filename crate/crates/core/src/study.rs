//! Linear solve, error norms and convergence studies.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::assembly::{
    assemble_rhs, assemble_system, element_integral, LoadVector, RhsMode, TridiagonalMatrix,
};
use crate::error::{FemError, Result};
use crate::fem1d::{make_mesh, ExactSolution, FemFunction, ProblemSpec, ScalarFn, Source};
use crate::quadrature::QuadratureScheme;

/// Thomas algorithm without pivoting for a symmetric positive definite
/// tridiagonal system.
pub fn thomas(matrix: &TridiagonalMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.dim();
    if rhs.len() != n {
        return Err(FemError::DimensionMismatch {
            expected: n,
            got: rhs.len(),
        });
    }
    let mut diag = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let (d, r) = if i == 0 {
            (matrix.main[0], rhs[0])
        } else {
            let factor = matrix.sub[i - 1] / diag[i - 1];
            (
                matrix.main[i] - factor * matrix.sup[i - 1],
                rhs[i] - factor * y[i - 1],
            )
        };
        if d.is_nan() || d <= 0.0 {
            return Err(FemError::SingularMatrix { row: i, pivot: d });
        }
        diag.push(d);
        y.push(r);
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let upper = if i + 1 < n {
            matrix.sup[i] * x[i + 1]
        } else {
            0.0
        };
        x[i] = (y[i] - upper) / diag[i];
    }
    Ok(x)
}

/// Solve `A c = F` and wrap the coefficients as a trial-space function.
pub fn solve_tridiagonal(matrix: &TridiagonalMatrix, load: &LoadVector) -> Result<FemFunction> {
    let coefficients = thomas(matrix, &load.values)?;
    let scale = load.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let residual = matrix
        .mul_vec(&coefficients)
        .iter()
        .zip(&load.values)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    if residual > 1e-10 * scale {
        return Err(FemError::SingularMatrix {
            row: 0,
            pivot: f64::NAN,
        });
    }
    FemFunction::new(load.mesh.clone(), coefficients)
}

fn squared_error(
    uh: &FemFunction,
    exact: &ExactSolution,
    singular: bool,
    scheme: &QuadratureScheme,
    derivative: bool,
) -> Result<f64> {
    let mesh = uh.mesh();
    let n = mesh.elements();
    let mut total = 0.0;
    for e in 0..n {
        let (a, b) = mesh.element(e);
        let slope = uh.slope(e);
        let left = uh.nodal(e);
        let graded = singular && e + 1 == n;
        total += if derivative {
            element_integral(
                |t| {
                    let d = (exact.du)(t) - slope;
                    d * d
                },
                a,
                b,
                exact.wavenumber,
                graded,
                scheme,
            )?
        } else {
            element_integral(
                |t| {
                    let d = (exact.u)(t) - left - slope * (t - a);
                    d * d
                },
                a,
                b,
                exact.wavenumber,
                graded,
                scheme,
            )?
        };
    }
    Ok(total)
}

/// `‖u - u_h‖_{L²}`, graded on the last element when `singular` is set.
pub fn error_l2(
    uh: &FemFunction,
    exact: &ExactSolution,
    singular: bool,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    Ok(squared_error(uh, exact, singular, scheme, false)?.sqrt())
}

/// `|u - u_h|_{H¹}`, graded on the last element when `singular` is set.
pub fn error_h1_semi(
    uh: &FemFunction,
    exact: &ExactSolution,
    singular: bool,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    Ok(squared_error(uh, exact, singular, scheme, true)?.sqrt())
}

/// `‖w‖_{H¹_mu} = sqrt(‖w'‖² + mu ‖w‖²)`.
pub fn norm_h1mu(w: &FemFunction, mu: f64) -> f64 {
    let (grad, mass) = w.energy_parts();
    (grad + mu * mass).sqrt()
}

/// `log2(coarse / fine)`; `None` if either error is not positive.
pub fn eoc(coarse: f64, fine: f64) -> Option<f64> {
    (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2())
}

/// Convergence order between two meshes with arbitrary element counts.
pub fn eoc_between(coarse: f64, fine: f64, n_coarse: usize, n_fine: usize) -> Option<f64> {
    if n_fine == 2 * n_coarse {
        return eoc(coarse, fine);
    }
    (coarse > 0.0 && fine > 0.0 && n_fine != n_coarse)
        .then(|| (coarse / fine).ln() / (n_fine as f64 / n_coarse as f64).ln())
}

/// How error integrals are evaluated on each element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorRule {
    /// The scheme's Gauss order on oscillation panels, graded on the element
    /// touching a flagged singular endpoint.
    Graded,
    /// Gauss panels of the given order on every element, no grading.
    /// Under-resolves the `(T - t)^{-1/2}` behaviour of the H¹ integrand
    /// for the singular problem, so it underestimates that error.
    PlainGauss(usize),
}

impl ErrorRule {
    /// `(singular, scheme)` to pass to the error functions.
    pub fn resolve(
        &self,
        singular: bool,
        scheme: &QuadratureScheme,
    ) -> Result<(bool, QuadratureScheme)> {
        match *self {
            ErrorRule::Graded => Ok((singular, *scheme)),
            ErrorRule::PlainGauss(order) => Ok((false, scheme.with_order(order)?)),
        }
    }
}

impl std::fmt::Display for ErrorRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ErrorRule::Graded => f.write_str("graded"),
            ErrorRule::PlainGauss(order) => write!(f, "gauss:{order}"),
        }
    }
}

impl std::str::FromStr for ErrorRule {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "graded" {
            return Ok(ErrorRule::Graded);
        }
        s.strip_prefix("gauss:")
            .and_then(|o| o.parse().ok())
            .filter(|o| (1..=crate::quadrature::MAX_GAUSS_ORDER).contains(o))
            .map(ErrorRule::PlainGauss)
            .ok_or_else(|| FemError::InvalidArgument(format!("unknown error rule '{s}'")))
    }
}

/// One refinement level.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub err_l2: f64,
    /// NaN when undefined.
    pub eoc_l2: f64,
    pub err_h1: f64,
    pub eoc_h1: f64,
    pub elapsed: Duration,
}

/// Rows for one value of mu.
#[derive(Debug, Clone)]
pub struct StudyBlock {
    pub mu: f64,
    pub rows: Vec<ConvergenceRow>,
    pub failures: Vec<(usize, FemError)>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub problem: String,
    pub rhs_mode: RhsMode,
    pub error_rule: ErrorRule,
    pub scheme: QuadratureScheme,
    pub blocks: Vec<StudyBlock>,
}

impl StudyReport {
    pub fn block(&self, mu: f64) -> Option<&StudyBlock> {
        self.blocks.iter().find(|b| b.mu == mu)
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, usize, &FemError)> {
        self.blocks
            .iter()
            .flat_map(|b| b.failures.iter().map(move |(n, e)| (b.mu, *n, e)))
    }
}

/// Discrete solution of `spec` on `n` elements.
pub fn solve_problem(
    spec: &ProblemSpec,
    n: usize,
    mode: RhsMode,
    scheme: &QuadratureScheme,
) -> Result<FemFunction> {
    let mesh = make_mesh(spec.horizon(), n)?;
    let matrix = assemble_system(&mesh, spec.mu())?;
    let load = assemble_rhs(spec, &mesh, mode, scheme)?;
    solve_tridiagonal(&matrix, &load)
}

struct Cell {
    n: usize,
    h: f64,
    err_l2: f64,
    err_h1: f64,
    elapsed: Duration,
}

fn run_cell(
    spec: &ProblemSpec,
    n: usize,
    mode: RhsMode,
    error_rule: ErrorRule,
    scheme: &QuadratureScheme,
) -> Result<Cell> {
    let start = Instant::now();
    let uh = solve_problem(spec, n, mode, scheme)?;
    let exact = spec
        .exact()
        .ok_or_else(|| FemError::MissingData("error measurement needs an exact solution".into()))?;
    let (singular, error_scheme) = error_rule.resolve(spec.is_singular(), scheme)?;
    let err_l2 = error_l2(&uh, exact, singular, &error_scheme)?;
    let err_h1 = error_h1_semi(&uh, exact, singular, &error_scheme)?;
    Ok(Cell {
        n,
        h: uh.mesh().h(),
        err_l2,
        err_h1,
        elapsed: start.elapsed(),
    })
}

/// Assemble, solve and measure errors for every `(mu, N)` pair.
///
/// Cells run in parallel; the report is ordered by the input lists. The
/// EOC of each row is taken against the previous requested N, and the first
/// row of every block reports 0.
pub fn run_study(
    problem_name: &str,
    problem: &(dyn Fn(f64) -> Result<ProblemSpec> + Sync),
    mu_list: &[f64],
    n_list: &[usize],
    mode: RhsMode,
    error_rule: ErrorRule,
    scheme: &QuadratureScheme,
) -> Result<StudyReport> {
    if n_list.is_empty() || mu_list.is_empty() {
        return Err(FemError::InvalidArgument("empty mu or N list".into()));
    }
    if n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(FemError::InvalidArgument(
            "element counts must be positive and increasing".into(),
        ));
    }
    let specs: Vec<Result<ProblemSpec>> = mu_list.iter().map(|&mu| problem(mu)).collect();
    let cells: Vec<(usize, usize)> = (0..mu_list.len())
        .flat_map(|m| (0..n_list.len()).map(move |i| (m, i)))
        .collect();
    let results: Vec<Result<Cell>> = cells
        .par_iter()
        .map(|&(m, i)| match &specs[m] {
            Ok(spec) => run_cell(spec, n_list[i], mode, error_rule, scheme),
            Err(e) => Err(e.clone()),
        })
        .collect();

    let mut blocks = Vec::with_capacity(mu_list.len());
    let mut results = results.into_iter();
    for &mu in mu_list {
        let mut rows: Vec<ConvergenceRow> = Vec::new();
        let mut failures = Vec::new();
        let mut previous: Option<(usize, f64, f64)> = None;
        for (index, &n) in n_list.iter().enumerate() {
            match results.next().expect("one result per cell") {
                Ok(cell) => {
                    let (eoc_l2, eoc_h1) = match previous {
                        None if index == 0 => (0.0, 0.0),
                        Some((pn, pl2, ph1)) => (
                            eoc_between(pl2, cell.err_l2, pn, cell.n).unwrap_or(f64::NAN),
                            eoc_between(ph1, cell.err_h1, pn, cell.n).unwrap_or(f64::NAN),
                        ),
                        None => (f64::NAN, f64::NAN),
                    };
                    previous = Some((cell.n, cell.err_l2, cell.err_h1));
                    rows.push(ConvergenceRow {
                        n: cell.n,
                        h: cell.h,
                        err_l2: cell.err_l2,
                        eoc_l2,
                        err_h1: cell.err_h1,
                        eoc_h1,
                        elapsed: cell.elapsed,
                    });
                }
                Err(e) => {
                    previous = None;
                    failures.push((n, e));
                }
            }
        }
        blocks.push(StudyBlock { mu, rows, failures });
    }
    Ok(StudyReport {
        problem: problem_name.to_string(),
        rhs_mode: mode,
        error_rule,
        scheme: *scheme,
        blocks,
    })
}

/// Outcome of the a-priori bound check for one mu.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRecord {
    pub mu: f64,
    pub norm: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Checks `‖u_h‖_{H¹_mu} <= T ‖f‖_{L²} / sqrt(2)` for each mu, with the
/// load assembled by the direct path.
pub fn stability_check(
    f: ScalarFn,
    horizon: f64,
    mu_list: &[f64],
    n: usize,
    scheme: &QuadratureScheme,
) -> Result<Vec<StabilityRecord>> {
    let mesh = make_mesh(horizon, n)?;
    let mut f_norm_sq = 0.0;
    for e in 0..n {
        let (a, b) = mesh.element(e);
        f_norm_sq += element_integral(|t| f(t) * f(t), a, b, 0.0, false, scheme)?;
    }
    let bound = horizon * f_norm_sq.sqrt() / std::f64::consts::SQRT_2;
    mu_list
        .iter()
        .map(|&mu| {
            let spec = ProblemSpec::new(mu, horizon, Source::ClosedFormF(f.clone()))?;
            let uh = solve_problem(&spec, n, RhsMode::Direct, scheme)?;
            let norm = norm_h1mu(&uh, mu);
            Ok(StabilityRecord {
                mu,
                norm,
                bound,
                passed: norm <= bound * (1.0 + 1e-8),
            })
        })
        .collect()
}
