//! Graded quadrature grids on `(−π, π)` and one-dimensional integrators
//! for the singular-weight integrals the basis machinery needs.
//!
//! Panels are graded geometrically toward each weight singularity (the
//! integrands behave like `t^α` with `α > −1` there) and capped in width
//! so that the trigonometric factors `e^{idt}` up to the maximal frequency
//! difference stay resolved by the per-panel Gauss rule.

use crate::calculus::quad::gauss_legendre;
use crate::error::{Error, Result};
use crate::Real;

use super::{BasisSpec, WeightVariant};

/// Quadrature nodes and weights realizing the `L²(−π,π)` inner product.
#[derive(Debug, Clone)]
pub struct Grid {
    pub points: Vec<Real>,
    pub weights: Vec<Real>,
    /// Distance from ±π below which the grid stops (float cannot place
    /// nodes closer to π than its ulp there). The excluded sliver carries
    /// `O(s^{1−2β})` weight mass, corrected analytically in the Gram
    /// tables.
    pub pi_cutoff: Option<Real>,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Panel edges on `(0, hi)`: geometric ladder from `hi·2^{−depth}` toward
/// `hi`, splitting any rung wider than `cap`.
fn ladder_edges(hi: Real, depth: usize, cap: Real) -> Vec<Real> {
    let mut edges = vec![0.0];
    let mut t = hi * 2f64.powi(-(depth as i32));
    edges.push(t);
    while t < hi {
        let next = (2.0 * t).min(hi);
        let width = next - t;
        if width > cap {
            let parts = (width / cap).ceil() as usize;
            for p in 1..parts {
                edges.push(t + width * p as Real / parts as Real);
            }
        }
        edges.push(next);
        t = next;
    }
    edges
}

/// Grading depth so that a truncated sliver of `t^{−2β}`-type mass stays
/// below ~1e−13 relative.
fn grading_depth(beta: Real) -> usize {
    let p = (1.0 - 2.0 * beta).max(0.05);
    ((30.0 / p).ceil() as usize).clamp(80, 650)
}

/// Builds the symmetric graded grid for a basis spec. `max_freq` is the
/// largest trigonometric frequency difference the grid must resolve
/// (usually `n_basis`).
pub fn basis_grid(spec: &BasisSpec, max_freq: usize) -> Grid {
    let gl = gauss_legendre(8);
    let cap_osc = 2.5 / (max_freq.max(4) as Real);
    let cap_hint = if spec.grid_hint > 0 {
        2.0 * std::f64::consts::PI / spec.grid_hint as Real
    } else {
        Real::INFINITY
    };
    let cap = cap_osc.min(cap_hint);
    let depth = grading_depth(spec.beta);
    let half = std::f64::consts::FRAC_PI_2;
    let pi = std::f64::consts::PI;

    // (0, π/2]: graded toward 0 (both variants are |t|^{±β} there; floats
    // are dense near 0, so the full depth is usable)
    let mut edges = ladder_edges(half, depth, cap);
    // (π/2, π): two-sided weight is singular at π, the pure one is smooth
    let mut pi_cutoff = None;
    match spec.variant {
        WeightVariant::TwoSidedWeight => {
            // distances below ~1e-12 collapse onto π in f64
            let depth_pi = depth.min(40);
            let ladder = ladder_edges(half, depth_pi, cap);
            pi_cutoff = Some(ladder[1]);
            // mirrored: π − ladder without its 0 edge, ascending toward π
            let mut upper: Vec<Real> =
                ladder.iter().skip(1).rev().map(|&e| pi - e).collect();
            edges.append(&mut upper);
        }
        WeightVariant::PureWeight => {
            let parts = ((half / cap).ceil() as usize).max(2);
            for p in 1..=parts {
                edges.push(half + half * p as Real / parts as Real);
            }
        }
    }
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-300);

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        for (&x, &wt) in gl.0.iter().zip(gl.1.iter()) {
            points.push(mid + hw * x);
            weights.push(hw * wt);
        }
    }
    // mirror to the negative half
    let n = points.len();
    let mut all_points = Vec::with_capacity(2 * n);
    let mut all_weights = Vec::with_capacity(2 * n);
    for i in (0..n).rev() {
        all_points.push(-points[i]);
        all_weights.push(weights[i]);
    }
    all_points.extend_from_slice(&points);
    all_weights.extend_from_slice(&weights);
    Grid {
        points: all_points,
        weights: all_weights,
        pi_cutoff,
    }
}

/// `∫_0^{upper} t^α·g(t) dt` for `α > −1` and a smooth bounded `g` with
/// `g(0) = g0`: geometric grading toward the singularity, panels capped at
/// `2.5/osc_scale` for oscillatory `g`, and the sliver below the ladder
/// replaced by its leading power-law term.
pub fn graded_power_integral(
    alpha: Real,
    g: &dyn Fn(Real) -> Real,
    g0: Real,
    upper: Real,
    osc_scale: Real,
    tol: Real,
) -> Result<Real> {
    if !(alpha > -1.0) {
        return Err(Error::domain(format!("integrand power must exceed −1, got {alpha}")));
    }
    if !(upper > 0.0) {
        return Err(Error::domain(format!("upper limit must be positive, got {upper}")));
    }
    let gl = gauss_legendre(15);
    // sliver cutoff: |∫_0^{t0} t^α g| ≤ |g|_∞·t0^{1+α}/(1+α) ≤ tol/10
    let gmax = g0.abs().max(1.0);
    let t0 = ((tol / 10.0) * (1.0 + alpha) / gmax)
        .powf(1.0 / (1.0 + alpha))
        .min(upper / 4.0)
        .max(1e-290);
    let depth = ((upper / t0).log2().ceil() as usize).clamp(4, 1200);
    let cap = 2.5 / osc_scale.max(1.0);
    let edges = ladder_edges(upper, depth, cap);
    let mut total = 0.0;
    let mut comp = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b > a) {
            continue;
        }
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        let mut panel = 0.0;
        if a == 0.0 {
            // leading power-law sliver
            panel = g0 * b.powf(1.0 + alpha) / (1.0 + alpha);
        } else {
            for (&x, &wt) in gl.0.iter().zip(gl.1.iter()) {
                let t = mid + hw * x;
                panel += wt * t.powf(alpha) * g(t);
            }
            panel *= hw;
        }
        // Kahan step
        let y = panel - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }
    Ok(total)
}

/// Adaptive Gauss-Legendre integration of a smooth real function.
pub fn adaptive_gl(f: &dyn Fn(Real) -> Real, a: Real, b: Real, tol: Real) -> Result<(Real, Real)> {
    fn panel(f: &dyn Fn(Real) -> Real, a: Real, b: Real) -> Real {
        let gl = gauss_legendre(15);
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        let mut s = 0.0;
        for (&x, &w) in gl.0.iter().zip(gl.1.iter()) {
            s += w * f(mid + hw * x);
        }
        s * hw
    }
    fn recurse(
        f: &dyn Fn(Real) -> Real,
        a: Real,
        b: Real,
        tol: Real,
        depth: usize,
    ) -> Result<(Real, Real)> {
        let whole = panel(f, a, b);
        let m = 0.5 * (a + b);
        let two = panel(f, a, m) + panel(f, m, b);
        let err = (two - whole).abs();
        if err <= tol || depth >= 40 {
            if err > tol && depth >= 40 {
                return Err(Error::Quadrature(format!(
                    "1-d quadrature stalled on [{a}, {b}] with error {err:.3e}"
                )));
            }
            return Ok((two, err));
        }
        let (l, el) = recurse(f, a, m, tol / 2.0, depth + 1)?;
        let (r, er) = recurse(f, m, b, tol / 2.0, depth + 1)?;
        Ok((l + r, el + er))
    }
    recurse(f, a, b, tol, 0)
}

/// `‖x‖²` and `‖y‖²` of the sharpness test vectors by graded quadrature:
/// `2∫_0^{π/2} t^{−2β} dt` and its mirrored tail version.
pub fn test_vector_norms(spec: &BasisSpec) -> Result<(Real, Real)> {
    let beta = spec.beta;
    let half = std::f64::consts::FRAC_PI_2;
    let nx2 = 2.0 * graded_power_integral(-2.0 * beta, &|_| 1.0, 1.0, half, 1.0, 1e-13)?;
    let ny2 = match spec.variant {
        // y = (π−|t|)^{−β} on π/2 < |t| < π: substitute s = π − t
        WeightVariant::TwoSidedWeight => {
            2.0 * graded_power_integral(-2.0 * beta, &|_| 1.0, 1.0, half, 1.0, 1e-13)?
        }
        // y = |t|^{−β}(π−|t|)^{−β} there: smooth factor (π−s)^{−2β}
        WeightVariant::PureWeight => {
            let pi = std::f64::consts::PI;
            2.0 * graded_power_integral(
                -2.0 * beta,
                &|s| (pi - s).powf(-2.0 * beta),
                pi.powf(-2.0 * beta),
                half,
                1.0,
                1e-13,
            )?
        }
    };
    Ok((nx2, ny2))
}
