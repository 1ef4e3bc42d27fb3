//! The transformation operator `T_mu` on piecewise-linear functions.
//!
//! For `w` vanishing at t = 0,
//!
//! ```text
//! (T_mu w)(t) = ∫_t^T [ cos(k(t-s)) w'(s) - k sin(k(t-s)) w(s) ] ds,   k = sqrt(mu)
//! ```
//!
//! which is the real part of the complex operator
//!
//! ```text
//! (𝒯_mu w)(t) = i ∫_t^T e^{ik(t-s)} ( -i w'(s) + k w(s) ) ds.
//! ```
//!
//! On a P1 function every element contributes a closed-form combination of
//! four trigonometric moments, so no quadrature is involved. The complex
//! operator is evaluated by a separate route through complex exponential
//! integrals and serves as an oracle for the real one.

use num_complex::Complex64;

use crate::error::{FemError, Result};
use crate::fem1d::{FemFunction, Mesh1D};
use crate::quadrature::{integrate_panels, QuadratureScheme};

/// Below this value of `k (b - a)` the moments switch to their Taylor
/// expansions.
pub const TAYLOR_THRESHOLD: f64 = 1e-4;

/// Value of the complex transformation at one point.
pub type ComplexSample = Complex64;

/// Exact moments of the trigonometric kernel on `[a, b]` for a target
/// time `t`:
///
/// `∫ cos(k(t-s)) ds`, `∫ sin(k(t-s)) ds`, `∫ s cos(k(t-s)) ds`,
/// `∫ s sin(k(t-s)) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigMoments {
    pub cos: f64,
    pub sin: f64,
    pub s_cos: f64,
    pub s_sin: f64,
}

/// Integrals of cos(kσ), sin(kσ), σ cos(kσ), σ sin(kσ) over σ in [0, len].
#[derive(Debug, Clone, Copy)]
struct BaseIntegrals {
    c0: f64,
    s0: f64,
    c1: f64,
    s1: f64,
}

fn base_integrals(k: f64, len: f64) -> BaseIntegrals {
    let y = k * len;
    if y.abs() < TAYLOR_THRESHOLD {
        let y2 = y * y;
        BaseIntegrals {
            c0: len * (1.0 - y2 / 6.0 * (1.0 - y2 / 20.0 * (1.0 - y2 / 42.0))),
            s0: len * y * (0.5 - y2 / 24.0 * (1.0 - y2 / 30.0 * (1.0 - y2 / 56.0))),
            c1: len * len * (0.5 - y2 / 8.0 + y2 * y2 / 144.0 - y2 * y2 * y2 / 5760.0),
            s1: len * len * y * (1.0 / 3.0 - y2 / 30.0 + y2 * y2 / 840.0 - y2 * y2 * y2 / 45360.0),
        }
    } else {
        let (sy, cy) = y.sin_cos();
        let half = (0.5 * y).sin();
        let one_minus_cos = 2.0 * half * half;
        let k2 = k * k;
        BaseIntegrals {
            c0: sy / k,
            s0: one_minus_cos / k,
            c1: (y * sy - one_minus_cos) / k2,
            s1: if y.abs() < 1.0 {
                len * len * sine_first_moment_series(y)
            } else {
                (sy - y * cy) / k2
            },
        }
    }
}

/// `(sin y - y cos y) / y^2` from its power series; the closed form loses
/// about `eps / y^2` relative accuracy to cancellation for small `y`.
fn sine_first_moment_series(y: f64) -> f64 {
    // Σ (-1)^n y^(2n+1) / ((2n+1)! (2n+3))
    let y2 = y * y;
    let mut term = y;
    let mut sum = 0.0;
    for n in 0..12 {
        let n2 = 2.0 * n as f64;
        sum += term / (n2 + 3.0);
        term *= -y2 / ((n2 + 2.0) * (n2 + 3.0));
    }
    sum
}

/// Moments on `[a, b]` with the first moments taken about `a`.
#[derive(Debug, Clone, Copy)]
struct LocalMoments {
    cos: f64,
    sin: f64,
    cos1: f64,
    sin1: f64,
}

fn local_moments(a: f64, b: f64, t: f64, k: f64) -> LocalMoments {
    let base = base_integrals(k, b - a);
    let (sx, cx) = (k * (t - a)).sin_cos();
    LocalMoments {
        cos: cx * base.c0 + sx * base.s0,
        sin: sx * base.c0 - cx * base.s0,
        cos1: cx * base.c1 + sx * base.s1,
        sin1: sx * base.c1 - cx * base.s1,
    }
}

/// Closed-form kernel moments on `[a, b]`.
pub fn trig_moments(a: f64, b: f64, t: f64, sqrt_mu: f64) -> Result<TrigMoments> {
    if !(a.is_finite() && b.is_finite() && t.is_finite() && sqrt_mu.is_finite()) {
        return Err(FemError::InvalidArgument(
            "trig moments need finite inputs".into(),
        ));
    }
    if a > b || sqrt_mu < 0.0 {
        return Err(FemError::InvalidArgument(format!(
            "trig moments need a <= b and sqrt_mu >= 0, got [{a}, {b}], {sqrt_mu}"
        )));
    }
    let m = local_moments(a, b, t, sqrt_mu);
    Ok(TrigMoments {
        cos: m.cos,
        sin: m.sin,
        s_cos: a * m.cos + m.cos1,
        s_sin: a * m.sin + m.sin1,
    })
}

/// Contribution of one linear piece `w(s) = w_a + slope (s - a)` on
/// `[a, b]` to `(T w)(t)` and to the companion integral
/// `R(t) = ∫ [sin(k(t-s)) w'(s) + k cos(k(t-s)) w(s)] ds`.
fn element_contribution(a: f64, b: f64, t: f64, k: f64, w_a: f64, slope: f64) -> (f64, f64) {
    let m = local_moments(a, b, t, k);
    let value = slope * m.cos - k * (w_a * m.sin + slope * m.sin1);
    let companion = slope * m.sin + k * (w_a * m.cos + slope * m.cos1);
    (value, companion)
}

fn sqrt_mu(mu: f64) -> Result<f64> {
    if !(mu.is_finite() && mu >= 0.0) {
        return Err(FemError::InvalidArgument(format!(
            "mu must be finite and non-negative, got {mu}"
        )));
    }
    Ok(mu.sqrt())
}

/// `(T w)(t)` and `R(t)` by direct summation over the elements in `[t, T]`.
fn value_and_companion(w: &FemFunction, k: f64, t: f64) -> Result<(f64, f64)> {
    let mesh = w.mesh();
    let first = mesh.locate(t)?;
    let mut value = 0.0;
    let mut companion = 0.0;
    if t == mesh.horizon() {
        return Ok((0.0, 0.0));
    }
    for e in first..mesh.elements() {
        let (lo, b) = mesh.element(e);
        let a = lo.max(t);
        let slope = w.slope(e);
        let w_a = w.nodal(e) + slope * (a - lo);
        let (v, c) = element_contribution(a, b, t, k, w_a, slope);
        value += v;
        companion += c;
    }
    Ok((value, companion))
}

/// `(T_mu w)(t)`, exact up to rounding.
pub fn apply_tmu(w: &FemFunction, mu: f64, t: f64) -> Result<f64> {
    let k = sqrt_mu(mu)?;
    Ok(value_and_companion(w, k, t)?.0)
}

/// `(T_mu w)'(t) = -w'(t) - k R(t)`, with `w'` taken by the mesh
/// convention (right element at interior nodes, last element at T).
pub fn apply_tmu_deriv(w: &FemFunction, mu: f64, t: f64) -> Result<f64> {
    let k = sqrt_mu(mu)?;
    let (_, companion) = value_and_companion(w, k, t)?;
    Ok(-w.eval_deriv(t)? - k * companion)
}

/// `∫_0^L σ^p e^{zσ} dσ / L^{p+1}` for p = 0, 1 at `z = c L`.
fn exp_moments(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 1.0 {
        // Σ z^n / (n! (n+1)) and Σ z^n / (n! (n+2)).
        let mut term = Complex64::new(1.0, 0.0);
        let mut zeroth = Complex64::new(0.0, 0.0);
        let mut first = Complex64::new(0.0, 0.0);
        for n in 0..30 {
            let nf = n as f64;
            zeroth += term / (nf + 1.0);
            first += term / (nf + 2.0);
            term *= z / (nf + 1.0);
            if term.norm() < 1e-18 {
                break;
            }
        }
        (zeroth, first)
    } else {
        let ez = z.exp();
        let one = Complex64::new(1.0, 0.0);
        ((ez - one) / z, (z * ez - ez + one) / (z * z))
    }
}

/// `(𝒯_mu w)(t) = i ∫_t^T e^{ik(t-s)} (-i w'(s) + k w(s)) ds`, evaluated
/// element by element with complex exponential integrals.
pub fn apply_complex_t(w: &FemFunction, mu: f64, t: f64) -> Result<ComplexSample> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(FemError::InvalidArgument(format!(
            "the complex transformation needs mu > 0, got {mu}"
        )));
    }
    let k = mu.sqrt();
    let mesh = w.mesh();
    let first = mesh.locate(t)?;
    let i = Complex64::i();
    let mut total = Complex64::new(0.0, 0.0);
    if t == mesh.horizon() {
        return Ok(total);
    }
    for e in first..mesh.elements() {
        let (lo, b) = mesh.element(e);
        let a = lo.max(t);
        let len = b - a;
        let slope = w.slope(e);
        let w_a = w.nodal(e) + slope * (a - lo);
        // e^{ik(t-s)} = e^{ik(t-a)} e^{-ikσ}, σ = s - a.
        let (zeroth, first_moment) = exp_moments(Complex64::new(0.0, -k * len));
        let phase = Complex64::from_polar(1.0, k * (t - a));
        let integrand = Complex64::new(k * w_a, -slope) * zeroth * len
            + Complex64::new(k * slope, 0.0) * first_moment * len * len;
        total += phase * integrand;
    }
    Ok(i * total)
}

/// Precomputed `T_mu w` for fast repeated evaluation.
///
/// Holds `(T w)(t_j)` and `R(t_j)` at every node; values inside an element
/// are the partial-element moments plus a rotation of the node state.
#[derive(Debug, Clone)]
pub struct TransformedP1 {
    w: FemFunction,
    k: f64,
    node_value: Vec<f64>,
    node_companion: Vec<f64>,
}

impl TransformedP1 {
    pub fn new(w: &FemFunction, mu: f64) -> Result<Self> {
        let k = sqrt_mu(mu)?;
        let mesh = w.mesh();
        let n = mesh.elements();
        let mut node_value = vec![0.0; n + 1];
        let mut node_companion = vec![0.0; n + 1];
        for e in (0..n).rev() {
            let (a, b) = mesh.element(e);
            let (v, c) = element_contribution(a, b, a, k, w.nodal(e), w.slope(e));
            let (sd, cd) = (k * (a - b)).sin_cos();
            let (pv, pc) = (node_value[e + 1], node_companion[e + 1]);
            node_value[e] = v + cd * pv - sd * pc;
            node_companion[e] = c + sd * pv + cd * pc;
        }
        Ok(Self {
            w: w.clone(),
            k,
            node_value,
            node_companion,
        })
    }

    pub fn mesh(&self) -> &Mesh1D {
        self.w.mesh()
    }

    fn state(&self, t: f64) -> Result<(f64, f64)> {
        let mesh = self.w.mesh();
        let e = mesh.locate(t)?;
        let (lo, b) = mesh.element(e);
        let slope = self.w.slope(e);
        let w_t = self.w.nodal(e) + slope * (t - lo);
        let (v, c) = element_contribution(t, b, t, self.k, w_t, slope);
        let (sd, cd) = (self.k * (t - b)).sin_cos();
        let (pv, pc) = (self.node_value[e + 1], self.node_companion[e + 1]);
        Ok((v + cd * pv - sd * pc, c + sd * pv + cd * pc))
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        Ok(self.state(t)?.0)
    }

    pub fn deriv(&self, t: f64) -> Result<f64> {
        let (_, c) = self.state(t)?;
        Ok(-self.w.eval_deriv(t)? - self.k * c)
    }

    /// Value and derivative on element `e` at interior point `t`, using the
    /// slope of that element regardless of the node convention.
    pub fn on_element(&self, e: usize, t: f64) -> (f64, f64) {
        let mesh = self.w.mesh();
        let (lo, b) = mesh.element(e);
        let slope = self.w.slope(e);
        let w_t = self.w.nodal(e) + slope * (t - lo);
        let (v, c) = element_contribution(t, b, t, self.k, w_t, slope);
        let (sd, cd) = (self.k * (t - b)).sin_cos();
        let (pv, pc) = (self.node_value[e + 1], self.node_companion[e + 1]);
        (
            v + cd * pv - sd * pc,
            -slope - self.k * (c + sd * pv + cd * pc),
        )
    }
}

/// Panels needed so that each spans at most one radian of a wave with
/// wavenumber `k`.
pub fn oscillation_panels(k: f64, len: f64) -> usize {
    ((k * len).ceil() as usize).max(1)
}

/// `C(t, f) = ∫_0^t cos(k(t-s)) f(s) ds` by composite Gauss quadrature.
pub fn kernel_c(f: impl Fn(f64) -> f64, mu: f64, t: f64, scheme: &QuadratureScheme) -> Result<f64> {
    let k = sqrt_mu(mu)?;
    check_time(t)?;
    integrate_panels(
        |s| (k * (t - s)).cos() * f(s),
        0.0,
        t,
        oscillation_panels(k, t),
        scheme,
    )
}

/// `S(t, f) = ∫_0^t sin(k(t-s)) f(s) ds` by composite Gauss quadrature.
pub fn kernel_s(f: impl Fn(f64) -> f64, mu: f64, t: f64, scheme: &QuadratureScheme) -> Result<f64> {
    let k = sqrt_mu(mu)?;
    check_time(t)?;
    if k == 0.0 {
        return Ok(0.0);
    }
    integrate_panels(
        |s| (k * (t - s)).sin() * f(s),
        0.0,
        t,
        oscillation_panels(k, t),
        scheme,
    )
}

fn check_time(t: f64) -> Result<()> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(FemError::Domain {
            t,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(())
}

/// Variation-of-constants solution `u(t) = S(t, f) / sqrt(mu)` of
/// `u'' + mu u = f`, `u(0) = u'(0) = 0`.
pub fn duhamel_reference(
    f: impl Fn(f64) -> f64,
    mu: f64,
    t: f64,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    if !(mu.is_finite() && mu > 0.0) {
        return Err(FemError::InvalidArgument(format!(
            "the Duhamel formula needs mu > 0, got {mu}"
        )));
    }
    Ok(kernel_s(f, mu, t, scheme)? / mu.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::{interpolate, make_mesh};
    use std::f64::consts::PI;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn moments_degenerate_at_zero_wavenumber() {
        for t in [-3.0, 0.0, 0.4, 2.5] {
            let m = trig_moments(0.0, 1.0, t, 0.0).unwrap();
            assert_eq!((m.cos, m.sin, m.s_cos, m.s_sin), (1.0, 0.0, 0.5, 0.0));
        }
        let m = trig_moments(0.3, 0.7, 0.1, 0.0).unwrap();
        assert!(close(m.cos, 0.4, 1e-16));
        assert!(close(m.s_cos, (0.49 - 0.09) / 2.0, 1e-16));
    }

    #[test]
    fn cos_moment_over_tail() {
        for t in [0.0, 0.2, 0.55, 0.9] {
            let m = trig_moments(t, 1.0, t, PI).unwrap();
            assert!(close(m.cos, (PI * (1.0 - t)).sin() / PI, 1e-15));
        }
    }

    #[test]
    fn moments_match_quadrature() {
        let scheme = QuadratureScheme::default().with_order(16).unwrap();
        for &(a, b, t, k) in &[
            (0.0, 1.0, 0.3, 2.0),
            (0.25, 0.5, 0.0, 17.0),
            (1.0, 1.5, 1.2, 0.01),
            (0.0, 0.125, 0.9, 300.0),
        ] {
            let m = trig_moments(a, b, t, k).unwrap();
            let panels = oscillation_panels(k, b - a);
            let q = |g: &dyn Fn(f64) -> f64| integrate_panels(g, a, b, panels, &scheme).unwrap();
            assert!(close(m.cos, q(&|s| (k * (t - s)).cos()), 1e-14));
            assert!(close(m.sin, q(&|s| (k * (t - s)).sin()), 1e-14));
            assert!(close(m.s_cos, q(&|s| s * (k * (t - s)).cos()), 1e-14));
            assert!(close(m.s_sin, q(&|s| s * (k * (t - s)).sin()), 1e-14));
        }
    }

    #[test]
    fn taylor_and_analytic_branches_agree() {
        let len = 0.01;
        let k = TAYLOR_THRESHOLD / len;
        // Straddle the switch by a few ulps.
        let k_lo = f64::from_bits(k.to_bits() - 4);
        let k_hi = f64::from_bits(k.to_bits() + 4);
        assert!(k_lo * len < TAYLOR_THRESHOLD && k_hi * len >= TAYLOR_THRESHOLD);
        let below = base_integrals(k_lo, len);
        let above = base_integrals(k_hi, len);
        for (x, y) in [
            (below.c0, above.c0),
            (below.s0, above.s0),
            (below.c1, above.c1),
            (below.s1, above.s1),
        ] {
            assert!(((x - y) / y).abs() < 1e-13, "{x} vs {y}");
        }
        // Series and closed form of the sine first moment meet at y = 1.
        let series = base_integrals(1.0 - 1e-15, 1.0).s1;
        let closed = base_integrals(1.0 + 1e-15, 1.0).s1;
        assert!(((series - closed) / closed).abs() < 1e-13);

        for &(a, t) in &[(0.3, 0.1), (0.0, 0.0), (0.5, 0.9)] {
            let b = a + len;
            let lo = trig_moments(a, b, t, k_lo).unwrap();
            let hi = trig_moments(a, b, t, k_hi).unwrap();
            for (x, y) in [
                (lo.cos, hi.cos),
                (lo.sin, hi.sin),
                (lo.s_cos, hi.s_cos),
                (lo.s_sin, hi.s_sin),
            ] {
                let scale = y.abs().max(1e-300);
                assert!(
                    (x - y).abs() / scale < 1e-13 || (x - y).abs() < 1e-20,
                    "{x} vs {y}"
                );
            }
        }
    }

    #[test]
    fn moment_time_derivative_by_finite_differences() {
        let (a, b, k) = (0.2, 0.7, 3.0);
        let step = 1e-6;
        for t in [0.0, 0.45, 1.1] {
            let plus = trig_moments(a, b, t + step, k).unwrap();
            let minus = trig_moments(a, b, t - step, k).unwrap();
            let here = trig_moments(a, b, t, k).unwrap();
            let d_cos = (plus.cos - minus.cos) / (2.0 * step);
            let d_sin = (plus.sin - minus.sin) / (2.0 * step);
            assert!(close(d_cos, -k * here.sin, 1e-8));
            assert!(close(d_sin, k * here.cos, 1e-8));
        }
    }

    #[test]
    fn zero_mu_is_terminal_difference() {
        let mesh = make_mesh(1.0, 5).unwrap();
        let w = FemFunction::new(mesh, vec![0.3, -1.0, 2.0, 0.5, 1.5]).unwrap();
        for t in [0.0, 0.1, 0.4, 0.6, 0.99, 1.0] {
            let got = apply_tmu(&w, 0.0, t).unwrap();
            let expected = w.eval(1.0).unwrap() - w.eval(t).unwrap();
            assert!(close(got, expected, 1e-14), "{t}: {got} vs {expected}");
            assert!(close(
                apply_tmu_deriv(&w, 0.0, t).unwrap(),
                -w.eval_deriv(t).unwrap(),
                1e-14
            ));
        }
    }

    #[test]
    fn identity_at_mu_pi_squared() {
        // T(id)(t) = (2/k) sin(k(1-t)) - cos(k(1-t)) + t for T = 1.
        let k = PI;
        for n in [1, 4, 9] {
            let w = interpolate(&make_mesh(1.0, n).unwrap(), |t| t).unwrap();
            for t in [0.0, 0.3, 0.75] {
                let expected = 2.0 / k * (k * (1.0 - t)).sin() - (k * (1.0 - t)).cos() + t;
                assert!(close(apply_tmu(&w, k * k, t).unwrap(), expected, 1e-13));
            }
            assert!(close(apply_tmu(&w, k * k, 0.0).unwrap(), 1.0, 1e-13));
        }
    }

    #[test]
    fn terminal_value_vanishes() {
        let mesh = make_mesh(2.0, 3).unwrap();
        let w = FemFunction::new(mesh, vec![1.0, 2.0, -4.0]).unwrap();
        for mu in [0.0, 1.0, 1e6] {
            assert_eq!(apply_tmu(&w, mu, 2.0).unwrap(), 0.0);
        }
        assert_eq!(
            apply_complex_t(&w, 3.0, 2.0).unwrap(),
            Complex64::new(0.0, 0.0)
        );
        let zero = FemFunction::zero(make_mesh(1.0, 4).unwrap());
        assert_eq!(
            apply_complex_t(&zero, 3.0, 0.2).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn derivative_at_horizon_is_minus_slope() {
        let mesh = make_mesh(1.0, 4).unwrap();
        let w = FemFunction::new(mesh, vec![0.5, 0.1, 0.9, -0.2]).unwrap();
        for mu in [0.5, 7.0, 1e4] {
            let d = apply_tmu_deriv(&w, mu, 1.0).unwrap();
            assert!(close(d, -w.slope(3), 1e-14));
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let mesh = make_mesh(1.0, 7).unwrap();
        let w = FemFunction::new(mesh, vec![0.4, -0.3, 1.2, 0.8, 0.0, -0.5, 0.7]).unwrap();
        let (mu, t, step) = (7.0, 0.3, 1e-6);
        let fd = (apply_tmu(&w, mu, t + step).unwrap() - apply_tmu(&w, mu, t - step).unwrap())
            / (2.0 * step);
        assert!(close(fd, apply_tmu_deriv(&w, mu, t).unwrap(), 1e-6));
    }

    #[test]
    fn real_part_of_complex_form() {
        let mesh = make_mesh(1.5, 6).unwrap();
        let w = FemFunction::new(mesh, vec![0.2, 0.9, -0.4, 0.3, 1.1, -0.8]).unwrap();
        for mu in [0.01, 1.0, 42.0, 1e6] {
            for t in [0.0, 0.33, 0.75, 1.2, 1.5] {
                let c = apply_complex_t(&w, mu, t).unwrap();
                assert!(close(c.re, apply_tmu(&w, mu, t).unwrap(), 1e-12));
            }
        }
        assert!(apply_complex_t(&w, 0.0, 0.5).is_err());
    }

    #[test]
    fn transformed_evaluator_matches_direct_sum() {
        let mesh = make_mesh(1.0, 9).unwrap();
        let coeffs: Vec<f64> = (1..=9).map(|j| (1.7 * j as f64).cos()).collect();
        let w = FemFunction::new(mesh, coeffs).unwrap();
        for mu in [0.0, 2.0, 900.0] {
            let fast = TransformedP1::new(&w, mu).unwrap();
            for i in 0..=40 {
                let t = i as f64 / 40.0;
                assert!(close(
                    fast.value(t).unwrap(),
                    apply_tmu(&w, mu, t).unwrap(),
                    1e-12
                ));
                assert!(close(
                    fast.deriv(t).unwrap(),
                    apply_tmu_deriv(&w, mu, t).unwrap(),
                    1e-10
                ));
            }
        }
    }

    #[test]
    fn kernels_constant_source() {
        let scheme = QuadratureScheme::default();
        let t = PI / 2.0;
        let s = kernel_s(|_| 1.0, 4.0, t, &scheme).unwrap();
        assert!(close(s, 1.0, 1e-13));
        assert!(close(s / 2.0, 0.5, 1e-13));
        assert_eq!(kernel_c(|_| 1.0, 4.0, 0.0, &scheme).unwrap(), 0.0);
        assert_eq!(kernel_s(|_| 1.0, 4.0, 0.0, &scheme).unwrap(), 0.0);
        let c0 = kernel_c(|s| 3.0 * s * s, 0.0, 2.0, &scheme).unwrap();
        assert!(close(c0, 8.0, 1e-13));
        assert_eq!(kernel_s(|s| s, 0.0, 2.0, &scheme).unwrap(), 0.0);
    }

    #[test]
    fn duhamel_examples() {
        let scheme = QuadratureScheme::default();
        let u = duhamel_reference(|_| 1.0, 4.0, PI / 2.0, &scheme).unwrap();
        assert!(close(u, 0.5, 1e-13));
        assert_eq!(duhamel_reference(|_| 1.0, 4.0, 0.0, &scheme).unwrap(), 0.0);
        for mu in [0.5, 3.0, 250.0] {
            for t in [0.1, 0.7, 1.0] {
                let u = duhamel_reference(|s| 2.0 + mu * s * s, mu, t, &scheme).unwrap();
                assert!(close(u, t * t, 1e-12), "{mu} {t}: {u}");
            }
        }
        assert!(duhamel_reference(|_| 1.0, 0.0, 1.0, &scheme).is_err());
    }
}
