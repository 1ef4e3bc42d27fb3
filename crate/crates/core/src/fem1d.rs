//! Uniform mesh of (0, T) and the piecewise-linear trial space whose
//! members vanish at t = 0.

use std::fmt;
use std::sync::Arc;

use crate::error::{FemError, Result};

/// Shared, thread-safe scalar function of time.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Uniform partition of `[0, T]` into `N` elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh1D {
    horizon: f64,
    elements: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl Mesh1D {
    pub fn new(horizon: f64, elements: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(FemError::InvalidArgument(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if elements == 0 {
            return Err(FemError::InvalidArgument(
                "mesh needs at least one element".into(),
            ));
        }
        let h = horizon / elements as f64;
        let mut nodes: Vec<f64> = (0..=elements).map(|j| j as f64 * h).collect();
        nodes[elements] = horizon;
        Ok(Self {
            horizon,
            elements,
            h,
            nodes,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node coordinates t_0 = 0, ..., t_N = T.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Interval `[t_{e}, t_{e+1}]` of element `e` (zero-based).
    pub fn element(&self, e: usize) -> (f64, f64) {
        (self.nodes[e], self.nodes[e + 1])
    }

    /// Element containing `t`, taking the right-hand element at interior
    /// nodes and the last element at t = T.
    pub fn locate(&self, t: f64) -> Result<usize> {
        self.check_domain(t)?;
        let e = (t / self.h).floor() as usize;
        let mut e = e.min(self.elements - 1);
        // Correct for rounding in t / h near nodes.
        while e > 0 && t < self.nodes[e] {
            e -= 1;
        }
        while e + 1 < self.elements && t >= self.nodes[e + 1] {
            e += 1;
        }
        Ok(e)
    }

    pub fn check_domain(&self, t: f64) -> Result<()> {
        if t.is_nan() || t < 0.0 || t > self.horizon {
            return Err(FemError::Domain {
                t,
                lo: 0.0,
                hi: self.horizon,
            });
        }
        Ok(())
    }
}

/// Convenience constructor mirroring [`Mesh1D::new`].
pub fn make_mesh(horizon: f64, elements: usize) -> Result<Mesh1D> {
    Mesh1D::new(horizon, elements)
}

/// Member of the P1 trial space: nodal values at t_1..t_N, with the value
/// at t_0 fixed to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FemFunction {
    mesh: Mesh1D,
    coefficients: Vec<f64>,
}

impl FemFunction {
    pub fn new(mesh: Mesh1D, coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() != mesh.elements() {
            return Err(FemError::DimensionMismatch {
                expected: mesh.elements(),
                got: coefficients.len(),
            });
        }
        Ok(Self { mesh, coefficients })
    }

    pub fn zero(mesh: Mesh1D) -> Self {
        let n = mesh.elements();
        Self {
            mesh,
            coefficients: vec![0.0; n],
        }
    }

    /// The j-th hat function (1-based, j in 1..=N).
    pub fn hat(mesh: Mesh1D, j: usize) -> Result<Self> {
        if j == 0 || j > mesh.elements() {
            return Err(FemError::InvalidArgument(format!(
                "hat index {j} outside 1..={}",
                mesh.elements()
            )));
        }
        let mut f = Self::zero(mesh);
        f.coefficients[j - 1] = 1.0;
        Ok(f)
    }

    pub fn mesh(&self) -> &Mesh1D {
        &self.mesh
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Nodal value at node j in 0..=N (zero at j = 0).
    pub fn nodal(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.coefficients[j - 1]
        }
    }

    /// Slope on element e (zero-based).
    pub fn slope(&self, e: usize) -> f64 {
        (self.nodal(e + 1) - self.nodal(e)) / self.mesh.h()
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let e = self.mesh.locate(t)?;
        let (a, _) = self.mesh.element(e);
        if t == self.mesh.nodes()[e + 1] {
            return Ok(self.nodal(e + 1));
        }
        Ok(self.nodal(e) + self.slope(e) * (t - a))
    }

    /// Element slope at `t`, right-continuous at interior nodes and taken
    /// from the last element at t = T.
    pub fn eval_deriv(&self, t: f64) -> Result<f64> {
        let e = self.mesh.locate(t)?;
        Ok(self.slope(e))
    }

    /// Squared H¹ seminorm and squared L² norm, computed exactly.
    pub(crate) fn energy_parts(&self) -> (f64, f64) {
        let h = self.mesh.h();
        let mut grad = 0.0;
        let mut mass = 0.0;
        for e in 0..self.mesh.elements() {
            let l = self.nodal(e);
            let r = self.nodal(e + 1);
            grad += (r - l) * (r - l) / h;
            mass += h * (l * l + l * r + r * r) / 3.0;
        }
        (grad, mass)
    }
}

/// Nodal interpolant of `g`, which must vanish at t = 0.
pub fn interpolate(mesh: &Mesh1D, g: impl Fn(f64) -> f64) -> Result<FemFunction> {
    let g0 = g(0.0);
    if g0.is_nan() || g0.abs() > 1e-12 {
        return Err(FemError::ConstraintViolation(format!(
            "interpolated function must vanish at t = 0, got {g0}"
        )));
    }
    let coefficients = mesh.nodes()[1..].iter().map(|&t| g(t)).collect();
    FemFunction::new(mesh.clone(), coefficients)
}

/// Exact solution and its derivative.
#[derive(Clone)]
pub struct ExactSolution {
    pub u: ScalarFn,
    pub du: ScalarFn,
    /// Angular frequency of the fastest oscillation in `u`, used to size
    /// quadrature panels. Zero for non-oscillatory solutions.
    pub wavenumber: f64,
}

impl ExactSolution {
    pub fn new(
        u: impl Fn(f64) -> f64 + Send + Sync + 'static,
        du: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            u: Arc::new(u),
            du: Arc::new(du),
            wavenumber: 0.0,
        }
    }

    pub fn with_wavenumber(mut self, wavenumber: f64) -> Self {
        self.wavenumber = wavenumber;
        self
    }
}

impl fmt::Debug for ExactSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ExactSolution { .. }")
    }
}

/// Right-hand side description.
#[derive(Clone)]
pub enum Source {
    /// Chosen exact solution; `f` is supplied when it is a function.
    Manufactured {
        exact: ExactSolution,
        f: Option<ScalarFn>,
    },
    /// Right-hand side given pointwise.
    ClosedFormF(ScalarFn),
}

impl fmt::Debug for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Manufactured { f: rhs, .. } => f
                .debug_struct("Manufactured")
                .field("has_f", &rhs.is_some())
                .finish(),
            Source::ClosedFormF(_) => f.write_str("ClosedFormF"),
        }
    }
}

/// Problem `u'' + mu u = f` on `(0, T)` with `u(0) = u'(0) = 0`.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    mu: f64,
    horizon: f64,
    source: Source,
    known_exact: Option<ExactSolution>,
    singular_at_horizon: bool,
}

impl ProblemSpec {
    pub fn new(mu: f64, horizon: f64, source: Source) -> Result<Self> {
        if !(mu.is_finite() && mu >= 0.0) {
            return Err(FemError::InvalidArgument(format!(
                "mu must be finite and non-negative, got {mu}"
            )));
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(FemError::InvalidArgument(format!(
                "horizon must be positive and finite, got {horizon}"
            )));
        }
        if let Source::Manufactured { exact, .. } = &source {
            let u0 = (exact.u)(0.0);
            let du0 = (exact.du)(0.0);
            if !(u0.abs() <= 1e-12 && du0.abs() <= 1e-12) {
                return Err(FemError::ConstraintViolation(format!(
                    "manufactured solution must satisfy u(0) = u'(0) = 0, got {u0}, {du0}"
                )));
            }
        }
        Ok(Self {
            mu,
            horizon,
            source,
            known_exact: None,
            singular_at_horizon: false,
        })
    }

    /// Attach an exact solution to a closed-form right-hand side.
    pub fn with_known_exact(mut self, exact: ExactSolution) -> Self {
        self.known_exact = Some(exact);
        self
    }

    /// Flag an endpoint singularity at t = T in the solution derivative.
    pub fn with_singular_horizon(mut self, singular: bool) -> Self {
        self.singular_at_horizon = singular;
        self
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn is_singular(&self) -> bool {
        self.singular_at_horizon
    }

    /// Exact solution if one is known.
    pub fn exact(&self) -> Option<&ExactSolution> {
        match &self.source {
            Source::Manufactured { exact, .. } => Some(exact),
            Source::ClosedFormF(_) => self.known_exact.as_ref(),
        }
    }

    /// Pointwise right-hand side if available.
    pub fn rhs(&self) -> Option<&ScalarFn> {
        match &self.source {
            Source::Manufactured { f, .. } => f.as_ref(),
            Source::ClosedFormF(f) => Some(f),
        }
    }
}
