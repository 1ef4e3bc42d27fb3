//! Randomized checks of the identities the method rests on.
//!
//! Every check draws its samples from a ChaCha generator seeded by the
//! caller, so a run is reproducible from the seed alone. Each returns the
//! worst observed defect; [`run_suite`] compares those against fixed
//! tolerances.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assembly::{assemble_rhs, assemble_system, bilinear_transformed, RhsMode};
use crate::error::Result;
use crate::fem1d::{interpolate, make_mesh, FemFunction, Mesh1D};
use crate::problems;
use crate::quadrature::{integrate_panels, QuadratureScheme};
use crate::study::{error_h1_semi, error_l2, norm_h1mu, solve_problem, stability_check};
use crate::transform::{apply_complex_t, apply_tmu, oscillation_panels, TransformedP1};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn log_uniform(rng: &mut SampleRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..=hi.ln())).exp()
}

/// Random P1 function with 1..=max_elements elements on (0, horizon).
pub fn random_p1(rng: &mut SampleRng, max_elements: usize, horizon: f64) -> FemFunction {
    let n = rng.gen_range(1..=max_elements);
    let mesh = make_mesh(horizon, n).expect("valid mesh");
    random_on(rng, &mesh)
}

pub fn random_on(rng: &mut SampleRng, mesh: &Mesh1D) -> FemFunction {
    let coefficients = (0..mesh.elements())
        .map(|_| rng.gen_range(-1.0..=1.0))
        .collect();
    FemFunction::new(mesh.clone(), coefficients).expect("matching length")
}

/// Piecewise constant function on `[0, T]`.
#[derive(Debug, Clone)]
pub struct PiecewiseConstant {
    pub breaks: Vec<f64>,
    pub values: Vec<f64>,
}

impl PiecewiseConstant {
    pub fn random(rng: &mut SampleRng, horizon: f64, max_pieces: usize) -> Self {
        let pieces = rng.gen_range(1..=max_pieces);
        let mut inner: Vec<f64> = (1..pieces).map(|_| rng.gen_range(0.0..horizon)).collect();
        inner.sort_by(f64::total_cmp);
        let mut breaks = vec![0.0];
        breaks.extend(inner);
        breaks.push(horizon);
        let values = (0..pieces).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        Self { breaks, values }
    }

    fn value_on(&self, lo: f64, hi: f64) -> f64 {
        let mid = 0.5 * (lo + hi);
        let i = self.breaks.partition_point(|&b| b <= mid).saturating_sub(1);
        self.values[i.min(self.values.len() - 1)]
    }

    /// `∫_0^t`.
    fn running(&self, t: f64) -> f64 {
        let mut sum = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let (a, b) = (self.breaks[i], self.breaks[i + 1]);
            if t <= a {
                break;
            }
            sum += v * (b.min(t) - a);
        }
        sum
    }

    fn total(&self) -> f64 {
        self.running(*self.breaks.last().unwrap())
    }

    fn abs_mass(&self) -> f64 {
        self.values
            .iter()
            .zip(self.breaks.windows(2))
            .map(|(v, w)| v.abs() * (w[1] - w[0]))
            .sum()
    }
}

fn merged_breaks(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut all: Vec<f64> = a.iter().chain(b).copied().collect();
    all.sort_by(f64::total_cmp);
    all.dedup_by(|x, y| (*x - *y).abs() <= 1e-15);
    all
}

/// `|T w(T)|` over random samples; zero by construction.
pub fn check_terminal_condition(rng: &mut SampleRng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let w = random_p1(rng, 12, horizon);
        let mu = log_uniform(rng, 1e-3, 1e6);
        worst = worst.max(apply_tmu(&w, mu, horizon)?.abs());
    }
    Ok(worst)
}

/// Worst `|Re(𝒯 w)(t) - (T w)(t)|` with mu log-uniform in [1e-2, 1e6].
pub fn check_complex_oracle(rng: &mut SampleRng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let w = random_p1(rng, 12, horizon);
        let mu = log_uniform(rng, 1e-2, 1e6);
        let t = rng.gen_range(0.0..=horizon);
        let complex = apply_complex_t(&w, mu, t)?;
        worst = worst.max((complex.re - apply_tmu(&w, mu, t)?).abs());
    }
    Ok(worst)
}

/// Worst `|T(αu + βw) - αTu - βTw|`.
pub fn check_linearity(rng: &mut SampleRng, samples: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let mesh = make_mesh(horizon, rng.gen_range(1..=10))?;
        let u = random_on(rng, &mesh);
        let w = random_on(rng, &mesh);
        let (alpha, beta) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let combined: Vec<f64> = u
            .coefficients()
            .iter()
            .zip(w.coefficients())
            .map(|(x, y)| alpha * x + beta * y)
            .collect();
        let combined = FemFunction::new(mesh, combined)?;
        let mu = log_uniform(rng, 1e-3, 1e5);
        let t = rng.gen_range(0.0..=horizon);
        let lhs = apply_tmu(&combined, mu, t)?;
        let rhs = alpha * apply_tmu(&u, mu, t)? + beta * apply_tmu(&w, mu, t)?;
        worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    Ok(worst)
}

/// Sub-intervals of the mesh refined by extra break points, each tagged
/// with the element that contains it.
fn refined_pieces(mesh: &Mesh1D, extra: &[f64]) -> Vec<(usize, f64, f64)> {
    let all = merged_breaks(mesh.nodes(), extra);
    all.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let e = mesh.locate(0.5 * (w[0] + w[1])).expect("inside mesh");
            (e, w[0], w[1])
        })
        .collect()
}

/// Relative defect of
/// `∫ [-(Tu)'(t) + mu ∫_t^T (Tu)(s) ds] q(t) dt = ∫ [u'(t) + mu ∫_t^T u(s) ds] q(t) dt`
/// for random P1 `u` and piecewise constant `q`. The left side is computed
/// by nested quadrature of the transformed function.
pub fn check_transform_identity(
    rng: &mut SampleRng,
    samples: usize,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let u = random_p1(rng, 8, horizon);
        let q = PiecewiseConstant::random(rng, horizon, 6);
        let mu = log_uniform(rng, 1e-2, 1e4);
        let k = mu.sqrt();
        let tu = TransformedP1::new(&u, mu)?;
        let mesh = u.mesh();
        let pieces = refined_pieces(mesh, &q.breaks);

        // ∫_{p_i}^T (Tu)(s) ds at the left end of every piece.
        let mut tail_of_tu = vec![0.0; pieces.len() + 1];
        for (i, &(e, a, b)) in pieces.iter().enumerate().rev() {
            let piece = integrate_panels(
                |s| tu.on_element(e, s).0,
                a,
                b,
                oscillation_panels(k, b - a),
                scheme,
            )?;
            tail_of_tu[i] = tail_of_tu[i + 1] + piece;
        }
        // ∫_t^T u(s) ds in closed form.
        let tail_of_u = |t: f64, e: usize| -> f64 {
            let mut sum = 0.0;
            for j in (e + 1)..mesh.elements() {
                sum += 0.5 * mesh.h() * (u.nodal(j) + u.nodal(j + 1));
            }
            let b = mesh.element(e).1;
            let ut = u.nodal(e) + u.slope(e) * (t - mesh.element(e).0);
            sum + 0.5 * (b - t) * (ut + u.nodal(e + 1))
        };

        let mut lhs = 0.0;
        let mut rhs = 0.0;
        let mut scale = 0.0;
        for (i, &(e, a, b)) in pieces.iter().enumerate() {
            let qv = q.value_on(a, b);
            let panels = oscillation_panels(k, b - a);
            let left = integrate_panels(
                |t| {
                    let inner = integrate_panels(
                        |s| tu.on_element(e, s).0,
                        t,
                        b,
                        oscillation_panels(k, b - t),
                        scheme,
                    )
                    .expect("finite integrand");
                    -tu.on_element(e, t).1 + mu * (inner + tail_of_tu[i + 1])
                },
                a,
                b,
                panels,
                scheme,
            )?;
            let slope = u.slope(e);
            let right = integrate_panels(|t| slope + mu * tail_of_u(t, e), a, b, 1, scheme)?;
            let magnitude = integrate_panels(
                |t| slope.abs() + mu * tail_of_u(t, e).abs(),
                a,
                b,
                1,
                scheme,
            )?;
            lhs += qv * left;
            rhs += qv * right;
            scale += qv.abs() * magnitude;
        }
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    Ok(worst)
}

/// Relative defect of `∫ p(t) ∫_0^t q ds dt = ∫ (∫_t^T p ds) q(t) dt` for
/// random piecewise constant `p`, `q`.
pub fn check_integral_swap(rng: &mut SampleRng, samples: usize) -> Result<f64> {
    let scheme = QuadratureScheme::default().with_order(2)?;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let p = PiecewiseConstant::random(rng, horizon, 6);
        let q = PiecewiseConstant::random(rng, horizon, 6);
        let p_total = p.total();
        let mut lhs = 0.0;
        let mut rhs = 0.0;
        for w in merged_breaks(&p.breaks, &q.breaks).windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let (pv, qv) = (p.value_on(a, b), q.value_on(a, b));
            lhs += integrate_panels(|t| pv * q.running(t), a, b, 1, &scheme)?;
            rhs += integrate_panels(|t| (p_total - p.running(t)) * qv, a, b, 1, &scheme)?;
        }
        let scale = p.abs_mass() * q.abs_mass();
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    Ok(worst)
}

/// `‖(Tu)'‖` and `‖Tu‖` in L² by element quadrature.
fn transformed_norms(u: &FemFunction, mu: f64, scheme: &QuadratureScheme) -> Result<(f64, f64)> {
    let tu = TransformedP1::new(u, mu)?;
    let k = mu.sqrt();
    let mesh = u.mesh();
    let mut deriv = 0.0;
    let mut value = 0.0;
    for e in 0..mesh.elements() {
        let (a, b) = mesh.element(e);
        let panels = oscillation_panels(k, b - a);
        deriv += integrate_panels(|t| tu.on_element(e, t).1.powi(2), a, b, panels, scheme)?;
        value += integrate_panels(|t| tu.on_element(e, t).0.powi(2), a, b, panels, scheme)?;
    }
    Ok((deriv.sqrt(), value.sqrt()))
}

/// Worst ratios `‖(Tu)'‖ / ((1 + T sqrt(mu/2)) ‖u‖_{H¹_mu})` and the same
/// with the full H¹ norm of `Tu` in the numerator.
pub fn check_transform_bound(
    rng: &mut SampleRng,
    samples: usize,
    scheme: &QuadratureScheme,
) -> Result<(f64, f64)> {
    let mut seminorm = 0.0f64;
    let mut full = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let u = random_p1(rng, 10, horizon);
        let mu = if rng.gen_bool(0.1) {
            0.0
        } else {
            log_uniform(rng, 1e-3, 1e5)
        };
        let (d, v) = transformed_norms(&u, mu, scheme)?;
        let bound = (1.0 + horizon * (mu / 2.0).sqrt()) * norm_h1mu(&u, mu);
        if bound > 0.0 {
            seminorm = seminorm.max(d / bound);
            full = full.max((d * d + v * v).sqrt() / bound);
        }
    }
    Ok((seminorm, full))
}

/// Worst relative defect of `b_mu(u, T_mu u) = ‖u‖²_{H¹_mu}`.
pub fn check_coercivity(
    rng: &mut SampleRng,
    samples: usize,
    mus: &[f64],
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let u = random_p1(rng, 16, horizon);
        for &mu in mus {
            let energy = norm_h1mu(&u, mu).powi(2);
            let b = bilinear_transformed(&u, &u, mu, scheme)?;
            if energy > 0.0 {
                worst = worst.max(((b - energy) / energy).abs());
            }
        }
    }
    Ok(worst)
}

/// Worst `|b(u, Tw) - b(w, Tu)| / (‖u‖ ‖w‖)` in the `H¹_mu` norm.
pub fn check_symmetry(
    rng: &mut SampleRng,
    samples: usize,
    mus: &[f64],
    scheme: &QuadratureScheme,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let horizon = rng.gen_range(0.5..2.0);
        let mesh = make_mesh(horizon, rng.gen_range(1..=16))?;
        let u = random_on(rng, &mesh);
        let w = random_on(rng, &mesh);
        for &mu in mus {
            let uw = bilinear_transformed(&u, &w, mu, scheme)?;
            let wu = bilinear_transformed(&w, &u, mu, scheme)?;
            let scale = norm_h1mu(&u, mu) * norm_h1mu(&w, mu);
            if scale > 0.0 {
                worst = worst.max((uw - wu).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Worst pairwise relative (max-norm) difference between the three load
/// vectors for the quadratic and constant-f problems.
pub fn check_rhs_paths(mus: &[f64], n: usize, scheme: &QuadratureScheme) -> Result<f64> {
    let mut worst = 0.0f64;
    for &mu in mus {
        for spec in [
            problems::quadratic(mu, 1.0)?,
            problems::constant_f(mu, 1.0)?,
        ] {
            let mesh = make_mesh(1.0, n)?;
            let loads = [RhsMode::Manufactured, RhsMode::Kernel, RhsMode::Direct]
                .map(|mode| assemble_rhs(&spec, &mesh, mode, scheme).map(|l| l.values));
            let [a, b, c] = loads;
            let (a, b, c) = (a?, b?, c?);
            for (x, y) in [(&a, &b), (&a, &c), (&b, &c)] {
                let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let diff = x
                    .iter()
                    .zip(y.iter())
                    .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
                worst = worst.max(diff / scale);
            }
        }
    }
    Ok(worst)
}

/// Worst `‖u_h‖_{H¹_mu} / (T ‖f‖ / sqrt 2)` for `f = 1` and `f = 2 + t²`.
pub fn check_stability(mus: &[f64], n: usize, scheme: &QuadratureScheme) -> Result<f64> {
    let sources: [crate::fem1d::ScalarFn; 2] = [Arc::new(|_| 1.0), Arc::new(|t| 2.0 + t * t)];
    let mut worst = 0.0f64;
    for f in sources {
        for record in stability_check(f, 1.0, mus, n, scheme)? {
            worst = worst.max(record.norm / record.bound);
        }
    }
    Ok(worst)
}

/// Worst `‖u - u_h‖_{H¹_mu} / ‖u - I_h u‖_{H¹_mu}` over smooth problems;
/// at most one since `u_h` is the `H¹_mu`-projection of `u`.
pub fn check_galerkin_optimality(scheme: &QuadratureScheme) -> Result<f64> {
    let mut worst = 0.0f64;
    for mu in [0.5, 10.0, 1e3] {
        for spec in [
            problems::quadratic(mu, 1.0)?,
            problems::constant_f(mu, 1.0)?,
        ] {
            let exact = spec.exact().expect("manufactured");
            for n in [4, 16, 64] {
                let uh = solve_problem(&spec, n, RhsMode::Manufactured, scheme)?;
                let ih = interpolate(uh.mesh(), exact.u.as_ref())?;
                let energy = |w: &FemFunction| -> Result<f64> {
                    let l2 = error_l2(w, exact, false, scheme)?;
                    let h1 = error_h1_semi(w, exact, false, scheme)?;
                    Ok((h1 * h1 + mu * l2 * l2).sqrt())
                };
                worst = worst.max(energy(&uh)? / energy(&ih)?);
            }
        }
    }
    Ok(worst)
}

/// Number of non-positive LDLᵀ pivots (or asymmetric matrices) of
/// `K + mu M` over a sweep of meshes and mu.
pub fn check_positive_definite() -> Result<f64> {
    let mut bad = 0usize;
    for n in [1, 2, 7, 64] {
        let mesh = make_mesh(1.0, n)?;
        for mu in [0.0, 1e-3, 1.0, 1e3, 1e6] {
            let system = assemble_system(&mesh, mu)?;
            if !system.is_symmetric() {
                bad += 1;
            }
            bad += system
                .ldl_pivots()
                .into_iter()
                .filter(|p| *p <= 0.0)
                .count();
        }
    }
    Ok(bad as f64)
}

/// Verdict for one property.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Parameters of [`run_suite`].
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Multiplies every tolerance; values other than 1 exist for testing
    /// the failure path.
    pub tolerance_scale: f64,
    pub scheme: QuadratureScheme,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            tolerance_scale: 1.0,
            scheme: QuadratureScheme::default(),
        }
    }
}

/// Runs every property and reports one outcome each.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<PropertyOutcome>> {
    let mut rng = rng(config.seed);
    let scheme = &config.scheme;
    let scale = config.tolerance_scale;
    let mut out = Vec::new();
    let mut at_most = |name, worst: f64, tolerance: f64| {
        let tolerance = tolerance * scale;
        out.push(PropertyOutcome {
            name,
            worst,
            tolerance,
            passed: worst <= tolerance,
        });
    };
    at_most(
        "terminal condition T w(T) = 0",
        check_terminal_condition(&mut rng, 100)?,
        0.0,
    );
    at_most(
        "real part of complex transform",
        check_complex_oracle(&mut rng, 100)?,
        1e-12,
    );
    at_most("linearity of T", check_linearity(&mut rng, 100)?, 1e-12);
    at_most(
        "transform integral identity",
        check_transform_identity(&mut rng, 100, scheme)?,
        1e-9,
    );
    at_most(
        "integration-by-parts swap",
        check_integral_swap(&mut rng, 100)?,
        1e-12,
    );
    let (seminorm, _) = check_transform_bound(&mut rng, 100, scheme)?;
    at_most("bound on (T u)'", seminorm, 1.0 + 1e-10);
    let mus = [1e-3, 1.0, 1e3, 1e6];
    at_most(
        "coercivity b(u, T u) = |u|^2",
        check_coercivity(&mut rng, 200, &mus, scheme)?,
        1e-8,
    );
    at_most(
        "symmetry b(u, T w) = b(w, T u)",
        check_symmetry(&mut rng, 50, &mus, scheme)?,
        1e-8,
    );
    at_most(
        "three load paths agree",
        check_rhs_paths(&[1.0, 100.0], 64, scheme)?,
        1e-8,
    );
    at_most(
        "stability bound",
        check_stability(&[1.0, 1e3, 1e6], 256, scheme)?,
        1.0 + 1e-8,
    );
    at_most(
        "Galerkin optimality",
        check_galerkin_optimality(scheme)?,
        1.0 + 1e-8,
    );
    at_most(
        "K + mu M positive definite",
        check_positive_definite()?,
        0.0,
    );
    Ok(out)
}
