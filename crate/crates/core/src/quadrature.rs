//! Gauss-Legendre quadrature on panels, with geometric grading toward an
//! endpoint where the integrand has an algebraic singularity.

use std::sync::OnceLock;

use crate::error::{FemError, Result};

pub const MAX_GAUSS_ORDER: usize = 32;

/// Which end of `[a, b]` carries the singularity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Left,
    Right,
}

/// Gauss rule order plus the grading policy used by [`integrate_graded`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureScheme {
    /// Points per panel.
    pub gauss_order: usize,
    /// Number of geometric subdivisions toward a singular endpoint.
    pub grading_depth: usize,
    /// Ratio between consecutive graded panels, in (0, 1).
    pub grading_ratio: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self {
            gauss_order: 8,
            grading_depth: 50,
            grading_ratio: 0.5,
        }
    }
}

impl QuadratureScheme {
    pub fn new(gauss_order: usize, grading_depth: usize, grading_ratio: f64) -> Result<Self> {
        if !(1..=MAX_GAUSS_ORDER).contains(&gauss_order) {
            return Err(FemError::InvalidArgument(format!(
                "gauss order {gauss_order} outside 1..={MAX_GAUSS_ORDER}"
            )));
        }
        if !(grading_ratio > 0.0 && grading_ratio < 1.0) {
            return Err(FemError::InvalidArgument(format!(
                "grading ratio {grading_ratio} outside (0, 1)"
            )));
        }
        Ok(Self {
            gauss_order,
            grading_depth,
            grading_ratio,
        })
    }

    pub fn with_order(self, gauss_order: usize) -> Result<Self> {
        Self::new(gauss_order, self.grading_depth, self.grading_ratio)
    }

    pub fn with_depth(self, grading_depth: usize) -> Result<Self> {
        Self::new(self.gauss_order, grading_depth, self.grading_ratio)
    }

    fn rule(&self) -> Result<&'static [(f64, f64)]> {
        gauss_nodes(self.gauss_order)
    }
}

static RULES: [OnceLock<Vec<(f64, f64)>>; MAX_GAUSS_ORDER] =
    [const { OnceLock::new() }; MAX_GAUSS_ORDER];

/// Gauss-Legendre nodes and weights on (-1, 1), ascending in the node.
///
/// Computed once per order by Newton iteration on the Legendre polynomial
/// and cached for the lifetime of the process.
pub fn gauss_nodes(order: usize) -> Result<&'static [(f64, f64)]> {
    if !(1..=MAX_GAUSS_ORDER).contains(&order) {
        return Err(FemError::InvalidArgument(format!(
            "gauss order {order} outside 1..={MAX_GAUSS_ORDER}"
        )));
    }
    Ok(RULES[order - 1].get_or_init(|| legendre_rule(order)))
}

/// Value of P_n and its derivative at x.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let nf = n as f64;
    let mut positive = Vec::with_capacity(n.div_ceil(2));
    for i in 0..n / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        positive.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    let mut rule: Vec<(f64, f64)> = positive.iter().map(|&(x, w)| (-x, w)).collect();
    if n % 2 == 1 {
        let (_, dp) = legendre_with_derivative(n, 0.0);
        rule.push((0.0, 2.0 / (dp * dp)));
    }
    rule.extend(positive.iter().rev().copied());
    rule
}

fn checked(g: &impl Fn(f64) -> f64, t: f64) -> Result<f64> {
    let value = g(t);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(FemError::NonFinite { location: t, value })
    }
}

fn gauss_panel(g: &impl Fn(f64) -> f64, a: f64, b: f64, rule: &[(f64, f64)]) -> Result<f64> {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for &(x, w) in rule {
        sum += w * checked(g, mid + half * x)?;
    }
    Ok(half * sum)
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(FemError::InvalidArgument(format!(
            "integration interval [{a}, {b}] is not a finite ordered interval"
        )));
    }
    Ok(())
}

/// Single-panel Gauss approximation of the integral of `g` over `[a, b]`.
pub fn integrate(g: impl Fn(f64) -> f64, a: f64, b: f64, scheme: &QuadratureScheme) -> Result<f64> {
    integrate_panels(g, a, b, 1, scheme)
}

/// Composite Gauss rule with `panels` equal panels.
pub fn integrate_panels(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    check_interval(a, b)?;
    if a == b {
        return Ok(0.0);
    }
    let rule = scheme.rule()?;
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let hi = if p + 1 == panels { b } else { lo + width };
        sum += gauss_panel(&g, lo, hi, rule)?;
    }
    Ok(sum)
}

/// Relative width below which graded panels are no longer refined.
///
/// Closer to the endpoint than this, the spacing of representable `t`
/// values is too coarse to sample an algebraic singularity faithfully.
const MIN_GRADED_WIDTH: f64 = 1e-8;

/// Gauss quadrature on panels shrinking geometrically toward `singular_end`.
///
/// Panel `k` covers distances `[L r^(k+1), L r^k]` from the singular end.
/// Refinement stops after `grading_depth` panels or once a panel would be
/// narrower than `1e-8 * max(|a|, |b|, L)`. The remaining tail is summed
/// as the geometric continuation of the last two panel contributions, which
/// is exact for a pure power law; when the contributions are not geometric
/// the tail gets one more Gauss panel instead. The endpoint itself is never
/// sampled.
pub fn integrate_graded(
    g: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    singular_end: SingularEnd,
    scheme: &QuadratureScheme,
) -> Result<f64> {
    check_interval(a, b)?;
    if a == b {
        return Ok(0.0);
    }
    let rule = scheme.rule()?;
    let length = b - a;
    if scheme.grading_depth == 0 {
        return gauss_panel(&g, a, b, rule);
    }
    let ratio = scheme.grading_ratio;
    let floor = MIN_GRADED_WIDTH * a.abs().max(b.abs()).max(length);

    // Distance from the singular end mapped back to t.
    let at = |d: f64| match singular_end {
        SingularEnd::Right => b - d,
        SingularEnd::Left => a + d,
    };
    let panel = |far: f64, near: f64| -> Result<f64> {
        let (lo, hi) = match singular_end {
            SingularEnd::Right => (at(far), at(near)),
            SingularEnd::Left => (at(near), at(far)),
        };
        gauss_panel(&g, lo, hi, rule)
    };

    let mut total = 0.0;
    let mut far = length;
    let mut last = None;
    let mut before_last = None;
    for _ in 0..scheme.grading_depth {
        let near = far * ratio;
        if near < floor {
            break;
        }
        let contribution = panel(far, near)?;
        total += contribution;
        before_last = last;
        last = Some(contribution);
        far = near;
    }

    let tail = match (before_last, last) {
        (Some(p0), Some(p1)) if p0 != 0.0 && (p1 / p0) > 0.0 && (p1 / p0) < 1.0 => {
            let q = p1 / p0;
            p1 * q / (1.0 - q)
        }
        _ => panel(far, 0.0)?,
    };
    Ok(total + tail)
}
