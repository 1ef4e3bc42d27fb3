//! System matrix `K + mu M` and the load vector `<f, T_mu phi_j>`.
//!
//! The load vector can be built three ways:
//!
//! * **manufactured**: from an exact solution, `F_j = <u', phi_j'> + mu <u, phi_j>`.
//!   This is the only route that works for right-hand sides outside L².
//! * **kernel**: `F_j = ∫ phi_j'(t) C(t, f) + k phi_j(t) S(t, f) dt` with the
//!   convolution kernels `C` and `S`.
//! * **direct**: `F_j = ∫ f(t) (T_mu phi_j)(t) dt` with `T_mu phi_j` in closed form.

use std::fmt;

use log::warn;
use num_complex::Complex64;

use crate::error::{FemError, Result};
use crate::fem1d::{FemFunction, Mesh1D, ProblemSpec};
use crate::quadrature::{
    gauss_nodes, integrate_graded, integrate_panels, QuadratureScheme, SingularEnd,
};
use crate::transform::{oscillation_panels, TransformedP1};

/// Symmetric-storage tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub sub: Vec<f64>,
    pub main: Vec<f64>,
    pub sup: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<f64>, main: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = main.len();
        if n == 0 {
            return Err(FemError::InvalidArgument("empty matrix".into()));
        }
        for off in [&sub, &sup] {
            if off.len() != n - 1 {
                return Err(FemError::DimensionMismatch {
                    expected: n - 1,
                    got: off.len(),
                });
            }
        }
        Ok(Self { sub, main, sup })
    }

    pub fn symmetric(main: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::new(off.clone(), main, off)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sub: vec![0.0; n.saturating_sub(1)],
            main: vec![1.0; n],
            sup: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.main.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &Self) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(FemError::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let zip = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a + alpha * b).collect();
        Ok(Self {
            sub: zip(&self.sub, &other.sub),
            main: zip(&self.main, &other.main),
            sup: zip(&self.sup, &other.sup),
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut y = self.main[i] * x[i];
                if i > 0 {
                    y += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.sup[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Pivots of the LDLᵀ factorization; all positive iff the symmetric
    /// matrix is positive definite.
    pub fn ldl_pivots(&self) -> Vec<f64> {
        let mut pivots = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let d = if i == 0 {
                self.main[0]
            } else {
                self.main[i] - self.sub[i - 1] * self.sup[i - 1] / pivots[i - 1]
            };
            pivots.push(d);
        }
        pivots
    }

    pub fn is_positive_definite(&self) -> bool {
        self.is_symmetric() && self.ldl_pivots().iter().all(|&d| d > 0.0)
    }
}

/// Which strategy produced a load vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RhsMode {
    Manufactured,
    Kernel,
    Direct,
}

impl RhsMode {
    pub fn name(self) -> &'static str {
        match self {
            RhsMode::Manufactured => "manufactured",
            RhsMode::Kernel => "kernel",
            RhsMode::Direct => "direct",
        }
    }
}

impl fmt::Display for RhsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RhsMode {
    type Err = FemError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "manufactured" => Ok(RhsMode::Manufactured),
            "kernel" => Ok(RhsMode::Kernel),
            "direct" => Ok(RhsMode::Direct),
            other => Err(FemError::InvalidArgument(format!(
                "unknown rhs mode '{other}'"
            ))),
        }
    }
}

/// Entries `F_1..F_N` on a given mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadVector {
    pub mesh: Mesh1D,
    pub values: Vec<f64>,
    pub provenance: RhsMode,
}

impl LoadVector {
    pub fn new(mesh: Mesh1D, values: Vec<f64>, provenance: RhsMode) -> Result<Self> {
        if values.len() != mesh.elements() {
            return Err(FemError::DimensionMismatch {
                expected: mesh.elements(),
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(FemError::InvalidArgument(format!(
                "non-finite load entry {bad}"
            )));
        }
        Ok(Self {
            mesh,
            values,
            provenance,
        })
    }
}

/// `K_ij = ∫ phi_i' phi_j'`: `2/h` on the diagonal (`1/h` for the
/// terminal node), `-1/h` off the diagonal.
pub fn assemble_stiffness(mesh: &Mesh1D) -> TridiagonalMatrix {
    let n = mesh.elements();
    let h = mesh.h();
    let mut main = vec![2.0 / h; n];
    main[n - 1] = 1.0 / h;
    let off = vec![-1.0 / h; n - 1];
    TridiagonalMatrix {
        sub: off.clone(),
        main,
        sup: off,
    }
}

/// `M_ij = ∫ phi_i phi_j`: `2h/3` on the diagonal (`h/3` for the terminal
/// node), `h/6` off the diagonal.
pub fn assemble_mass(mesh: &Mesh1D) -> TridiagonalMatrix {
    let n = mesh.elements();
    let h = mesh.h();
    let mut main = vec![2.0 * h / 3.0; n];
    main[n - 1] = h / 3.0;
    let off = vec![h / 6.0; n - 1];
    TridiagonalMatrix {
        sub: off.clone(),
        main,
        sup: off,
    }
}

/// `K + mu M`.
pub fn assemble_system(mesh: &Mesh1D, mu: f64) -> Result<TridiagonalMatrix> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(FemError::InvalidArgument(format!(
            "mu must be finite and non-negative, got {mu}"
        )));
    }
    assemble_stiffness(mesh).add_scaled(mu, &assemble_mass(mesh))
}

/// Integral over one element, split into panels of at most one radian of
/// the wavenumber `k`, with the last panel graded toward `b` when
/// `singular_right` is set.
pub(crate) fn element_integral(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    k: f64,
    singular_right: bool,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let panels = oscillation_panels(k, b - a);
    if !singular_right {
        return integrate_panels(&g, a, b, panels, scheme);
    }
    let split = if panels == 1 {
        a
    } else {
        b - (b - a) / panels as f64
    };
    let regular = if panels == 1 {
        0.0
    } else {
        integrate_panels(&g, a, split, panels - 1, scheme)?
    };
    Ok(regular + integrate_graded(&g, split, b, SingularEnd::Right, scheme)?)
}

/// Manufactured load `F_j = ∫ u' phi_j' + mu u phi_j dt`.
pub fn assemble_rhs_manufactured(
    spec: &ProblemSpec,
    mesh: &Mesh1D,
    scheme: &QuadratureScheme,
) -> Result<LoadVector> {
    let exact = spec.exact().ok_or_else(|| {
        FemError::MissingData("the manufactured load needs an exact solution".into())
    })?;
    check_horizon(spec, mesh)?;
    let mu = spec.mu();
    let k = exact.wavenumber.max(mu.sqrt());
    let n = mesh.elements();
    let h = mesh.h();
    let mut values = vec![0.0; n];
    for e in 0..n {
        let (a, b) = mesh.element(e);
        let singular = spec.is_singular() && e + 1 == n;
        // Test functions: falling hat of node e, rising hat of node e + 1.
        let falling = element_integral(
            |t| -(exact.du)(t) / h + mu * (exact.u)(t) * (b - t) / h,
            a,
            b,
            k,
            singular,
            scheme,
        )?;
        let rising = element_integral(
            |t| (exact.du)(t) / h + mu * (exact.u)(t) * (t - a) / h,
            a,
            b,
            k,
            singular,
            scheme,
        )?;
        if e > 0 {
            values[e - 1] += falling;
        }
        values[e] += rising;
    }
    LoadVector::new(mesh.clone(), values, RhsMode::Manufactured)
}

fn check_horizon(spec: &ProblemSpec, mesh: &Mesh1D) -> Result<()> {
    let (a, b) = (spec.horizon(), mesh.horizon());
    if (a - b).abs() > 1e-14 * a.max(b) {
        return Err(FemError::InvalidArgument(format!(
            "problem horizon {a} differs from mesh horizon {b}"
        )));
    }
    Ok(())
}

fn require_rhs(spec: &ProblemSpec, mode: RhsMode) -> Result<&crate::fem1d::ScalarFn> {
    if spec.is_singular() {
        warn!(
            "{mode} load assembly on a problem flagged singular; the right-hand side may not be in L2"
        );
    }
    spec.rhs().ok_or_else(|| {
        FemError::MissingData(format!("the {mode} load needs a pointwise right-hand side"))
    })
}

/// Gauss points of every element, in increasing order, with the element
/// index and weight. Each element is split into oscillation panels.
fn element_points(
    mesh: &Mesh1D,
    k: f64,
    scheme: &QuadratureScheme,
) -> Result<Vec<(usize, f64, f64)>> {
    let rule = gauss_nodes(scheme.gauss_order)?;
    let mut points = Vec::new();
    for e in 0..mesh.elements() {
        let (a, b) = mesh.element(e);
        let panels = oscillation_panels(k, b - a);
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            let half = 0.5 * width;
            for &(x, w) in rule {
                points.push((e, lo + half * (1.0 + x), half * w));
            }
        }
    }
    Ok(points)
}

/// `C(t, f) + i S(t, f)` at increasing times, accumulated by rotating the
/// running value and adding Gauss increments between consecutive times.
fn cumulative_kernels(
    f: &dyn Fn(f64) -> f64,
    k: f64,
    times: impl Iterator<Item = f64>,
    scheme: &QuadratureScheme,
) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    let mut previous = 0.0;
    let mut value = Complex64::new(0.0, 0.0);
    for t in times {
        let len = t - previous;
        let panels = oscillation_panels(k, len);
        let re = integrate_panels(|s| (k * (t - s)).cos() * f(s), previous, t, panels, scheme)?;
        let im = integrate_panels(|s| (k * (t - s)).sin() * f(s), previous, t, panels, scheme)?;
        value = value * Complex64::from_polar(1.0, k * len) + Complex64::new(re, im);
        out.push(value);
        previous = t;
    }
    Ok(out)
}

/// Kernel load `F_j = ∫ phi_j'(t) C(t, f) + k phi_j(t) S(t, f) dt`.
pub fn assemble_rhs_kernel(
    spec: &ProblemSpec,
    mesh: &Mesh1D,
    scheme: &QuadratureScheme,
) -> Result<LoadVector> {
    let f = require_rhs(spec, RhsMode::Kernel)?;
    check_horizon(spec, mesh)?;
    let k = spec.mu().sqrt();
    let n = mesh.elements();
    let h = mesh.h();
    let points = element_points(mesh, k, scheme)?;
    let kernels = cumulative_kernels(f.as_ref(), k, points.iter().map(|p| p.1), scheme)?;
    let mut values = vec![0.0; n];
    for (&(e, t, weight), cs) in points.iter().zip(&kernels) {
        let (a, b) = mesh.element(e);
        let (c, s) = (cs.re, cs.im);
        let falling = -c / h + k * s * (b - t) / h;
        let rising = c / h + k * s * (t - a) / h;
        if e > 0 {
            values[e - 1] += weight * falling;
        }
        values[e] += weight * rising;
    }
    LoadVector::new(mesh.clone(), values, RhsMode::Kernel)
}

/// Direct load `F_j = ∫ f(t) (T_mu phi_j)(t) dt`.
pub fn assemble_rhs_direct(
    spec: &ProblemSpec,
    mesh: &Mesh1D,
    scheme: &QuadratureScheme,
) -> Result<LoadVector> {
    let f = require_rhs(spec, RhsMode::Direct)?;
    check_horizon(spec, mesh)?;
    let mu = spec.mu();
    let k = mu.sqrt();
    let n = mesh.elements();
    let points = element_points(mesh, k, scheme)?;
    let f_values: Vec<f64> = points.iter().map(|p| f(p.1)).collect();
    if let Some((p, v)) = points.iter().zip(&f_values).find(|(_, v)| !v.is_finite()) {
        return Err(FemError::NonFinite {
            location: p.1,
            value: *v,
        });
    }
    let mut values = vec![0.0; n];
    for (j, value) in values.iter_mut().enumerate() {
        let hat = TransformedP1::new(&FemFunction::hat(mesh.clone(), j + 1)?, mu)?;
        // T phi_j vanishes beyond the support of phi_j.
        let last_element = (j + 1).min(n - 1);
        let mut sum = 0.0;
        for (&(e, t, weight), fv) in points.iter().zip(&f_values) {
            if e > last_element {
                break;
            }
            sum += weight * fv * hat.on_element(e, t).0;
        }
        *value = sum;
    }
    LoadVector::new(mesh.clone(), values, RhsMode::Direct)
}

pub fn assemble_rhs(
    spec: &ProblemSpec,
    mesh: &Mesh1D,
    mode: RhsMode,
    scheme: &QuadratureScheme,
) -> Result<LoadVector> {
    match mode {
        RhsMode::Manufactured => assemble_rhs_manufactured(spec, mesh, scheme),
        RhsMode::Kernel => assemble_rhs_kernel(spec, mesh, scheme),
        RhsMode::Direct => assemble_rhs_direct(spec, mesh, scheme),
    }
}

/// `b_mu(u, T_mu w) = ∫ -u'(T_mu w)' + mu u (T_mu w) dt` by element-wise
/// quadrature of the transformed function.
pub fn bilinear_transformed(
    u: &FemFunction,
    w: &FemFunction,
    mu: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    if u.mesh() != w.mesh() {
        return Err(FemError::InvalidArgument(
            "both functions must live on the same mesh".into(),
        ));
    }
    let transformed = TransformedP1::new(w, mu)?;
    let mesh = u.mesh();
    let k = mu.sqrt();
    let mut total = 0.0;
    for e in 0..mesh.elements() {
        let (a, b) = mesh.element(e);
        let slope = u.slope(e);
        let left = u.nodal(e);
        total += integrate_panels(
            |t| {
                let (value, deriv) = transformed.on_element(e, t);
                -slope * deriv + mu * (left + slope * (t - a)) * value
            },
            a,
            b,
            oscillation_panels(k, b - a),
            scheme,
        )?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::{make_mesh, ExactSolution, Source};
    use crate::problems;
    use crate::transform::{kernel_c, kernel_s};
    use std::sync::Arc;

    fn rel(a: &[f64], b: &[f64]) -> f64 {
        let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        a.iter()
            .zip(b)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
            / scale
    }

    #[test]
    fn stiffness_examples() {
        let k = assemble_stiffness(&make_mesh(1.0, 2).unwrap());
        assert_eq!(k.main, vec![4.0, 2.0]);
        assert_eq!(k.sub, vec![-2.0]);
        assert!(k.is_symmetric());
        assert_eq!(
            assemble_stiffness(&make_mesh(1.0, 1).unwrap()).main,
            vec![1.0]
        );

        let mesh = make_mesh(1.0, 5).unwrap();
        let k = assemble_stiffness(&mesh);
        let sums: Vec<f64> = k.mul_vec(&[1.0; 5]);
        assert!((sums[0] - 1.0 / mesh.h()).abs() < 1e-12);
        for s in &sums[1..] {
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn mass_examples() {
        let m = assemble_mass(&make_mesh(1.0, 2).unwrap());
        assert!((m.main[0] - 1.0 / 3.0).abs() < 1e-16);
        assert!((m.main[1] - 1.0 / 6.0).abs() < 1e-16);
        assert!((m.sub[0] - 1.0 / 12.0).abs() < 1e-16);
        assert!((assemble_mass(&make_mesh(1.0, 1).unwrap()).main[0] - 1.0 / 3.0).abs() < 1e-16);

        // Adding the hat at t = 0 gives a partition of unity whose mass is T.
        let mesh = make_mesh(2.5, 6).unwrap();
        let m = assemble_mass(&mesh);
        let h = mesh.h();
        let interior: f64 = m.main.iter().sum::<f64>() + m.sub.iter().sum::<f64>() * 2.0;
        let boundary = h / 3.0 + 2.0 * h / 6.0;
        assert!((interior + boundary - 2.5).abs() < 1e-13);
    }

    #[test]
    fn matrices_match_quadrature_of_hats() {
        let mesh = make_mesh(1.7, 5).unwrap();
        let scheme = QuadratureScheme::default();
        let k = assemble_stiffness(&mesh);
        let m = assemble_mass(&mesh);
        let hats: Vec<FemFunction> = (1..=5)
            .map(|j| FemFunction::hat(mesh.clone(), j).unwrap())
            .collect();
        for i in 0..5 {
            for j in i..(i + 2).min(5) {
                let mut kq = 0.0;
                let mut mq = 0.0;
                for e in 0..5 {
                    let (a, b) = mesh.element(e);
                    kq += (b - a) * hats[i].slope(e) * hats[j].slope(e);
                    mq += crate::quadrature::integrate(
                        |t| hats[i].eval(t).unwrap() * hats[j].eval(t).unwrap(),
                        a + 1e-15,
                        b - 1e-15,
                        &scheme,
                    )
                    .unwrap();
                }
                let (ke, me) = if i == j {
                    (k.main[i], m.main[i])
                } else {
                    (k.sup[i], m.sup[i])
                };
                assert!((kq - ke).abs() < 1e-12);
                assert!((mq - me).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn system_is_positive_definite() {
        for n in [1, 2, 17] {
            let mesh = make_mesh(1.0, n).unwrap();
            for mu in [0.0, 1e-3, 1.0, 1e6] {
                assert!(assemble_system(&mesh, mu).unwrap().is_positive_definite());
            }
        }
        assert!(assemble_system(&make_mesh(1.0, 3).unwrap(), -1.0).is_err());
    }

    #[test]
    fn manufactured_quadratic_single_element() {
        let spec = problems::quadratic(0.0, 1.0).unwrap();
        let mesh = make_mesh(1.0, 1).unwrap();
        let load = assemble_rhs_manufactured(&spec, &mesh, &QuadratureScheme::default()).unwrap();
        assert!((load.values[0] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_data_gives_zero_load() {
        let scheme = QuadratureScheme::default();
        let mesh = make_mesh(1.0, 6).unwrap();
        let zero = ExactSolution::new(|_| 0.0, |_| 0.0);
        let spec = ProblemSpec::new(
            3.0,
            1.0,
            Source::Manufactured {
                exact: zero,
                f: Some(Arc::new(|_| 0.0)),
            },
        )
        .unwrap();
        for mode in [RhsMode::Manufactured, RhsMode::Kernel, RhsMode::Direct] {
            let load = assemble_rhs(&spec, &mesh, mode, &scheme).unwrap();
            assert!(load.values.iter().all(|&v| v == 0.0), "{mode}");
            assert_eq!(load.provenance, mode);
        }
    }

    #[test]
    fn direct_path_at_zero_mu() {
        let scheme = QuadratureScheme::default();
        let mesh = make_mesh(1.0, 4).unwrap();
        let spec = ProblemSpec::new(
            0.0,
            1.0,
            Source::ClosedFormF(Arc::new(|t: f64| (3.0 * t).exp())),
        )
        .unwrap();
        let load = assemble_rhs_direct(&spec, &mesh, &scheme).unwrap();
        for j in 1..=4 {
            let hat = FemFunction::hat(mesh.clone(), j).unwrap();
            let at_end = hat.eval(1.0).unwrap();
            let mut expected = 0.0;
            for e in 0..4 {
                let (a, b) = mesh.element(e);
                expected += integrate_panels(
                    |t| (3.0 * t).exp() * (at_end - hat.eval(t).unwrap()),
                    a,
                    b,
                    1,
                    &scheme,
                )
                .unwrap();
            }
            assert!((load.values[j - 1] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_path_at_zero_mu_uses_running_integral() {
        let scheme = QuadratureScheme::default();
        let mesh = make_mesh(1.0, 3).unwrap();
        let spec =
            ProblemSpec::new(0.0, 1.0, Source::ClosedFormF(Arc::new(|t: f64| t.cos()))).unwrap();
        let load = assemble_rhs_kernel(&spec, &mesh, &scheme).unwrap();
        for j in 1..=3 {
            let hat = FemFunction::hat(mesh.clone(), j).unwrap();
            let expected: f64 = (0..3)
                .map(|e| {
                    let (a, b) = mesh.element(e);
                    integrate_panels(|t| hat.slope(e) * t.sin(), a, b, 1, &scheme).unwrap()
                })
                .sum();
            assert!((load.values[j - 1] - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn cumulative_kernels_match_pointwise_quadrature() {
        let scheme = QuadratureScheme::default();
        let f = |s: f64| 1.0 + s * s - (2.0 * s).sin();
        for mu in [0.0, 4.0, 2500.0] {
            let times = [0.0, 0.01, 0.3, 0.31, 0.8, 1.0];
            let cs = cumulative_kernels(&f, f64::sqrt(mu), times.iter().copied(), &scheme).unwrap();
            for (t, v) in times.iter().zip(&cs) {
                assert!((v.re - kernel_c(f, mu, *t, &scheme).unwrap()).abs() < 1e-13);
                assert!((v.im - kernel_s(f, mu, *t, &scheme).unwrap()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn three_paths_agree_for_smooth_data() {
        let scheme = QuadratureScheme::default();
        for (mu, n) in [(1.0, 8), (10.0, 16), (100.0, 12)] {
            let spec = problems::quadratic(mu, 1.0).unwrap();
            let mesh = make_mesh(1.0, n).unwrap();
            let man = assemble_rhs_manufactured(&spec, &mesh, &scheme).unwrap();
            let ker = assemble_rhs_kernel(&spec, &mesh, &scheme).unwrap();
            let dir = assemble_rhs_direct(&spec, &mesh, &scheme).unwrap();
            assert!(rel(&ker.values, &man.values) < 1e-8, "kernel mu={mu}");
            assert!(rel(&dir.values, &man.values) < 1e-8, "direct mu={mu}");
        }
    }

    #[test]
    fn missing_data_is_reported() {
        let scheme = QuadratureScheme::default();
        let mesh = make_mesh(1.0, 4).unwrap();
        let spec = problems::singular(1.0, 1.0).unwrap();
        assert!(matches!(
            assemble_rhs_direct(&spec, &mesh, &scheme),
            Err(FemError::MissingData(_))
        ));
        let custom = ProblemSpec::new(1.0, 1.0, Source::ClosedFormF(Arc::new(|_| 1.0))).unwrap();
        assert!(matches!(
            assemble_rhs_manufactured(&custom, &mesh, &scheme),
            Err(FemError::MissingData(_))
        ));
        let other = make_mesh(2.0, 4).unwrap();
        assert!(assemble_rhs_kernel(&custom, &other, &scheme).is_err());
    }

    #[test]
    fn coercivity_and_symmetry_on_fixed_functions() {
        let scheme = QuadratureScheme::default();
        let mesh = make_mesh(1.0, 6).unwrap();
        let u = FemFunction::new(mesh.clone(), vec![0.3, -0.2, 0.9, 1.0, -0.4, 0.25]).unwrap();
        let w = FemFunction::new(mesh.clone(), vec![-1.0, 0.5, 0.1, 0.6, 0.7, -0.3]).unwrap();
        for mu in [0.0, 1e-3, 1.0, 1e3, 1e6] {
            let a = assemble_system(&mesh, mu).unwrap();
            let energy = a.quadratic_form(u.coefficients());
            let b = bilinear_transformed(&u, &u, mu, &scheme).unwrap();
            assert!(
                ((b - energy) / energy).abs() < 1e-9,
                "mu={mu}: {b} vs {energy}"
            );
            let uw = bilinear_transformed(&u, &w, mu, &scheme).unwrap();
            let wu = bilinear_transformed(&w, &u, mu, &scheme).unwrap();
            let cross: f64 = a
                .mul_vec(w.coefficients())
                .iter()
                .zip(u.coefficients())
                .map(|(x, y)| x * y)
                .sum();
            assert!(((uw - wu) / cross.abs().max(1.0)).abs() < 1e-9, "mu={mu}");
            assert!(
                ((uw - cross) / cross.abs().max(1.0)).abs() < 1e-9,
                "mu={mu}"
            );
        }
    }
}
