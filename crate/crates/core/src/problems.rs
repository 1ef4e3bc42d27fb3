//! Built-in test problems.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{FemError, Result};
use crate::fem1d::{ExactSolution, ProblemSpec, Source};

/// `u = t^2 (T - t)^{3/4}`. Its right-hand side is not in L², so only the
/// exact solution is provided and the problem is flagged singular at T.
pub fn singular(mu: f64, horizon: f64) -> Result<ProblemSpec> {
    let exact = ExactSolution::new(
        move |t| t * t * (horizon - t).powf(0.75),
        move |t| 2.0 * t * (horizon - t).powf(0.75) - 0.75 * t * t * (horizon - t).powf(-0.25),
    );
    Ok(
        ProblemSpec::new(mu, horizon, Source::Manufactured { exact, f: None })?
            .with_singular_horizon(true),
    )
}

/// `u = t^2`, `f = 2 + mu t^2`.
pub fn quadratic(mu: f64, horizon: f64) -> Result<ProblemSpec> {
    let exact = ExactSolution::new(|t| t * t, |t| 2.0 * t);
    ProblemSpec::new(
        mu,
        horizon,
        Source::Manufactured {
            exact,
            f: Some(Arc::new(move |t| 2.0 + mu * t * t)),
        },
    )
}

/// `f = 1`, `u = (1 - cos(k t)) / mu` (and `t^2 / 2` at mu = 0).
pub fn constant_f(mu: f64, horizon: f64) -> Result<ProblemSpec> {
    let k = mu.max(0.0).sqrt();
    let exact = ExactSolution::new(
        move |t| {
            let half = 0.5 * k * t;
            if half == 0.0 {
                0.5 * t * t
            } else {
                let sinc = half.sin() / half;
                0.5 * t * t * sinc * sinc
            }
        },
        move |t| if k == 0.0 { t } else { (k * t).sin() / k },
    )
    .with_wavenumber(k);
    ProblemSpec::new(
        mu,
        horizon,
        Source::Manufactured {
            exact,
            f: Some(Arc::new(|_| 1.0)),
        },
    )
}

/// Polynomial right-hand side `f(t) = Σ c_i t^i` without a known solution.
pub fn polynomial_f(mu: f64, horizon: f64, coefficients: Vec<f64>) -> Result<ProblemSpec> {
    if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
        return Err(FemError::InvalidArgument(
            "polynomial right-hand side needs finite coefficients".into(),
        ));
    }
    let f = move |t: f64| coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c);
    ProblemSpec::new(mu, horizon, Source::ClosedFormF(Arc::new(f)))
}

/// Selector for the built-in problems.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemKind {
    Singular,
    Quadratic,
    ConstantF,
    /// Polynomial right-hand side, coefficients in increasing degree.
    Custom(Vec<f64>),
}

impl ProblemKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Singular => "singular",
            ProblemKind::Quadratic => "quadratic",
            ProblemKind::ConstantF => "constant-f",
            ProblemKind::Custom(_) => "custom",
        }
    }

    pub fn build(&self, mu: f64, horizon: f64) -> Result<ProblemSpec> {
        match self {
            ProblemKind::Singular => singular(mu, horizon),
            ProblemKind::Quadratic => quadratic(mu, horizon),
            ProblemKind::ConstantF => constant_f(mu, horizon),
            ProblemKind::Custom(c) => polynomial_f(mu, horizon, c.clone()),
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = FemError;

    /// Parses `singular`, `quadratic`, `constant-f` or `custom`; the
    /// custom polynomial defaults to `f = 1` until coefficients are set.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "singular" => Ok(ProblemKind::Singular),
            "quadratic" => Ok(ProblemKind::Quadratic),
            "constant-f" => Ok(ProblemKind::ConstantF),
            "custom" => Ok(ProblemKind::Custom(vec![1.0])),
            other => Err(FemError::InvalidArgument(format!(
                "unknown problem '{other}'"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn second_derivative(g: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        let h = 1e-4;
        (g(t + h) - 2.0 * g(t) + g(t - h)) / (h * h)
    }

    #[test]
    fn manufactured_solutions_satisfy_the_ode() {
        for mu in [0.0, 1.0, 37.0] {
            for spec in [quadratic(mu, 1.0).unwrap(), constant_f(mu, 1.0).unwrap()] {
                let exact = spec.exact().unwrap();
                let f = spec.rhs().unwrap();
                for t in [0.1, 0.5, 0.9] {
                    let residual =
                        second_derivative(exact.u.as_ref(), t) + mu * (exact.u)(t) - f(t);
                    assert!(residual.abs() < 1e-5, "mu={mu} t={t}: {residual}");
                    let h = 1e-6;
                    let du = ((exact.u)(t + h) - (exact.u)(t - h)) / (2.0 * h);
                    assert!((du - (exact.du)(t)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn singular_solution_shape() {
        let spec = singular(1.0, 1.0).unwrap();
        assert!(spec.is_singular());
        assert!(spec.rhs().is_none());
        let exact = spec.exact().unwrap();
        assert_eq!((exact.u)(1.0), 0.0);
        assert_eq!((exact.u)(0.0), 0.0);
        let t = 0.6;
        let h = 1e-6;
        let du = ((exact.u)(t + h) - (exact.u)(t - h)) / (2.0 * h);
        assert!((du - (exact.du)(t)).abs() < 1e-8);
    }

    #[test]
    fn parse_names() {
        for name in ["singular", "quadratic", "constant-f", "custom"] {
            assert_eq!(name.parse::<ProblemKind>().unwrap().name(), name);
        }
        assert!("other".parse::<ProblemKind>().is_err());
        let p = polynomial_f(1.0, 1.0, vec![2.0, 0.0, 1.0]).unwrap();
        assert_eq!((p.rhs().unwrap())(3.0), 11.0);
        assert!(p.exact().is_none());
    }
}
