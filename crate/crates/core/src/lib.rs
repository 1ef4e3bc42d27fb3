//! Transformed Galerkin-Bubnov finite elements for the initial value problem
//!
//! ```text
//! u''(t) + mu u(t) = f(t)  on (0, T),   u(0) = u'(0) = 0.
//! ```
//!
//! Trial functions are continuous piecewise linears vanishing at t = 0. Test
//! functions are their images under the transformation `T_mu`, which makes
//! the discrete operator the symmetric positive definite `K + mu M` and the
//! discrete solution the `H¹_mu`-projection of the exact one.

pub mod assembly;
pub mod error;
pub mod fem1d;
pub mod problems;
pub mod quadrature;
pub mod study;
pub mod transform;
pub mod verify;

pub use assembly::{
    assemble_mass, assemble_rhs, assemble_rhs_direct, assemble_rhs_kernel,
    assemble_rhs_manufactured, assemble_stiffness, assemble_system, bilinear_transformed,
    LoadVector, RhsMode, TridiagonalMatrix,
};
pub use error::{FemError, Result};
pub use fem1d::{
    interpolate, make_mesh, ExactSolution, FemFunction, Mesh1D, ProblemSpec, ScalarFn, Source,
};
pub use problems::ProblemKind;
pub use quadrature::{gauss_nodes, integrate, integrate_graded, QuadratureScheme, SingularEnd};
pub use study::{
    eoc, error_h1_semi, error_l2, norm_h1mu, run_study, solve_problem, solve_tridiagonal,
    stability_check, ConvergenceRow, ErrorRule, StabilityRecord, StudyBlock, StudyReport,
};
pub use transform::{
    apply_complex_t, apply_tmu, apply_tmu_deriv, duhamel_reference, kernel_c, kernel_s,
    trig_moments, ComplexSample, TransformedP1, TrigMoments,
};
