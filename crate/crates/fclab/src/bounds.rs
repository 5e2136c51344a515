//! Closed-form theoretical bounds for the regularized calculus
//! `f ↦ (f·e_ε)(A)`, as pure evaluators.
//!
//! Everything here is deterministic arithmetic on top of [`crate::specfn`];
//! the experiment drivers overlay these curves against empirical operator
//! norms. Piecewise definitions evaluate the first-listed branch on ties.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::RealScalar;
use crate::specfn::{exp_int, gamma_fn};

/// Parameter bundle consumed by the bound evaluators.
///
/// `big_r` is the inverse resolvent radius `1/‖A⁻¹‖` (zero when `A` is not
/// invertible); `m_const` is a sectorality (or half-plane) constant and must
/// be at least one.
#[derive(Debug, Clone, Copy)]
pub struct BoundQuery<R> {
    pub eps: R,
    pub r0: R,
    pub big_r: R,
    pub phi: R,
    pub kappa: R,
    pub m_const: R,
    pub sigma: R,
    pub delta: R,
    pub c_ratio: R,
    pub k_psi: R,
}

impl<R: RealScalar> BoundQuery<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.m_const >= R::one()) {
            return Err(Error::domain(format!("M ≥ 1 required, got {}", self.m_const)));
        }
        if !(self.kappa >= R::zero() && self.kappa < R::one()) {
            return Err(Error::domain(format!("κ ∈ [0,1) required, got {}", self.kappa)));
        }
        if !(self.phi > R::zero() && self.phi < R::FRAC_PI_2()) {
            return Err(Error::domain(format!("φ ∈ (0,π/2) required, got {}", self.phi)));
        }
        if !(self.eps > R::zero()) {
            return Err(Error::domain(format!("ε > 0 required, got {}", self.eps)));
        }
        if !(self.big_r >= R::zero()) {
            return Err(Error::domain(format!("R ≥ 0 required, got {}", self.big_r)));
        }
        Ok(())
    }
}

/// Piecewise bound `b(ε, r₀, φ)` for functions holomorphic on the sector
/// and on a ball of radius `r₀` at the origin:
///
/// * `2εr₀ ≤ 1`: `Ei(εr₀cos φ) + e^{εr₀}(π−φ)`
/// * `2εr₀ > 1`: `Ei(cos φ / 2) + √e·(π−φ)`
///
/// Callers assemble the full estimate as `(M/π)·b·‖f‖`.
pub fn thm1_bound<R: RealScalar>(eps: R, r0: R, phi: R) -> Result<R> {
    if !(eps > R::zero() && r0 > R::zero()) {
        return Err(Error::domain(format!("need ε, r₀ > 0; got ε={eps}, r₀={r0}")));
    }
    if !(phi > R::zero() && phi < R::FRAC_PI_2()) {
        return Err(Error::domain(format!("φ ∈ (0,π/2) required, got {phi}")));
    }
    let two = R::of(2.0);
    if two * eps * r0 <= R::one() {
        Ok(exp_int(eps * r0 * phi.cos())? + (eps * r0).exp() * (R::PI() - phi))
    } else {
        Ok(exp_int(phi.cos() / two)? + R::E().sqrt() * (R::PI() - phi))
    }
}

/// Bound `b_κ(ε, R, φ) = Ei(εκR cos φ) + (κ/(1−κ))·e^{−εκR cos φ}` for
/// invertible operators (`R = 1/‖A⁻¹‖ > 0`), `κ ∈ (0,1)`.
pub fn expstab_bound<R: RealScalar>(eps: R, big_r: R, phi: R, kappa: R) -> Result<R> {
    if !(big_r > R::zero()) {
        return Err(Error::domain(format!(
            "expstab_bound requires R > 0 (invertible A); got {big_r} — use thm1_bound"
        )));
    }
    if !(kappa > R::zero() && kappa < R::one()) {
        return Err(Error::domain(format!("κ ∈ (0,1) required, got {kappa}")));
    }
    if !(eps > R::zero() && phi > R::zero() && phi < R::FRAC_PI_2()) {
        return Err(Error::domain(format!("need ε > 0, φ ∈ (0,π/2); got ε={eps}, φ={phi}")));
    }
    let x = eps * kappa * big_r * phi.cos();
    Ok(exp_int(x)? + kappa / (R::one() - kappa) * (-x).exp())
}

/// Uniform semigroup bound `‖e^{−tA}‖ ≤ (2M/π)(log M + 5)`.
pub fn semigroup_bound<R: RealScalar>(m: R) -> Result<R> {
    if !(m >= R::one()) {
        return Err(Error::domain(format!("M ≥ 1 required, got {m}")));
    }
    Ok(R::of(2.0) * m / R::PI() * (m.ln() + R::of(5.0)))
}

/// `c₁ = (2e^{1/5}/π)(log 10 + 2π/3) ≈ 3.42`.
pub fn c1_constant<R: RealScalar>() -> R {
    R::of(2.0) * R::of(0.2).exp() / R::PI() * (R::of(10.0).ln() + R::of(2.0) * R::PI() / R::of(3.0))
}

/// `c₂ = 2e^{1/5}/π ≈ 0.78`.
pub fn c2_constant<R: RealScalar>() -> R {
    R::of(2.0) * R::of(0.2).exp() / R::PI()
}

/// Constants and value of the segment bound
/// `‖g(A)‖ ≤ (C₁ + C₂ log(σ/ε))‖g‖ ≤ C₃ log(σe/ε)‖g‖`.
#[derive(Debug, Clone, Copy)]
pub struct HinfSegmentBound<R> {
    pub c1: R,
    pub c2: R,
    pub big_c1: R,
    pub big_c2: R,
    pub big_c3: R,
    /// `C₁ + C₂ log(σ/ε)` (the sharper two-term form).
    pub bound: R,
    /// `C₃ log(σe/ε)`.
    pub bound_log_form: R,
}

/// Segment bound for `g ∈ H∞[ε,σ]` with `C₁ = C₃ = c₁M + c₂M log M`,
/// `C₂ = c₂M`.
pub fn hinf_segment_bound<R: RealScalar>(eps: R, sigma: R, m: R) -> Result<HinfSegmentBound<R>> {
    if !(eps > R::zero() && eps < sigma && sigma.is_finite()) {
        return Err(Error::domain(format!("need 0 < ε < σ < ∞; got ε={eps}, σ={sigma}")));
    }
    if !(m >= R::one()) {
        return Err(Error::domain(format!("M ≥ 1 required, got {m}")));
    }
    let (c1, c2) = (c1_constant::<R>(), c2_constant::<R>());
    let big_c1 = c1 * m + c2 * m * m.ln();
    let big_c2 = c2 * m;
    let big_c3 = big_c1;
    let ratio = sigma / eps;
    Ok(HinfSegmentBound {
        c1,
        c2,
        big_c1,
        big_c2,
        big_c3,
        bound: big_c1 + big_c2 * ratio.ln(),
        bound_log_form: big_c3 * (ratio * R::E()).ln(),
    })
}

/// Earlier Hille-Phillips-route constants `(C̃₁, C̃₂, C̃₃) = (30M²/π, 16M³/π, 30M³/π)`
/// used for comparison tables.
pub fn vitse_constants<R: RealScalar>(m: R) -> (R, R, R) {
    let pi = R::PI();
    (
        R::of(30.0) * m * m / pi,
        R::of(16.0) * m * m * m / pi,
        R::of(30.0) * m * m * m / pi,
    )
}

/// Sector angle `θ = arccos(1/(2M)) ∈ (π/3, π/2)` that a half-plane
/// constant `M` certifies, with `M(A,θ) ≤ 2M`.
pub fn vitse_theta<R: RealScalar>(m: R) -> Result<R> {
    if !(m >= R::one()) {
        return Err(Error::domain(format!("M ≥ 1 required, got {m}")));
    }
    Ok((R::one() / (R::of(2.0) * m)).acos())
}

/// Default calibration constant in [`exp_decay_bound`]: `2e² + 1`.
pub fn default_c_kappa<R: RealScalar>() -> R {
    R::of(2.0) * R::E() * R::E() + R::one()
}

/// Exponential-decay envelope `C·e^{−εκR cos φ}` with
/// `C = C_κ·M·Ei(cos φ)`; `c_kappa = None` uses [`default_c_kappa`].
pub fn exp_decay_bound<R: RealScalar>(
    eps: R,
    big_r: R,
    phi: R,
    kappa: R,
    m: R,
    c_kappa: Option<R>,
) -> Result<R> {
    if !(kappa >= R::zero() && kappa < R::one()) {
        return Err(Error::domain(format!("κ ∈ [0,1) required, got {kappa}")));
    }
    if !(eps > R::zero() && big_r >= R::zero() && m >= R::one()) {
        return Err(Error::domain(format!(
            "need ε > 0, R ≥ 0, M ≥ 1; got ε={eps}, R={big_r}, M={m}"
        )));
    }
    if !(phi > R::zero() && phi < R::FRAC_PI_2()) {
        return Err(Error::domain(format!("φ ∈ (0,π/2) required, got {phi}")));
    }
    let ck = c_kappa.unwrap_or_else(default_c_kappa);
    let c = ck * m * exp_int(phi.cos())?;
    Ok(c * (-eps * kappa * big_r * phi.cos()).exp())
}

/// Constant `C_{α,κ} = 2Γ(α)/π + (1/π)·(2√κ/(1−√κ))·(e^{−1}α/(1−√κ))^α`
/// assembled from the two sector rays and the vertical chord (`η = √κ`).
pub fn frac_power_constant<R: RealScalar>(alpha: R, kappa: R) -> Result<R> {
    if !(alpha > R::zero() && alpha <= R::one()) {
        return Err(Error::domain(format!("α ∈ (0,1] required, got {alpha}")));
    }
    if !(kappa >= R::zero() && kappa < R::one()) {
        return Err(Error::domain(format!("κ ∈ [0,1) required, got {kappa}")));
    }
    let pi = R::PI();
    let rays = R::of(2.0) * gamma_fn(alpha)? / pi;
    if kappa == R::zero() {
        return Ok(rays);
    }
    let eta = kappa.sqrt();
    let chord = (R::of(2.0) * eta / (R::one() - eta))
        * (alpha / (R::E() * (R::one() - eta))).powf(alpha)
        / pi;
    Ok(rays + chord)
}

/// Fractional-power semigroup bound
/// `‖A^α T(t)‖ ≤ C_{α,κ}·M·(cos φ)^{−α}·t^{−α}·e^{−tκR cos φ}`.
pub fn frac_power_bound<R: RealScalar>(
    alpha: R,
    t: R,
    kappa: R,
    big_r: R,
    phi: R,
    m: R,
) -> Result<R> {
    if !(t > R::zero()) {
        return Err(Error::domain(format!("t > 0 required, got {t}")));
    }
    if !(phi > R::zero() && phi < R::FRAC_PI_2() && m >= R::one() && big_r >= R::zero()) {
        return Err(Error::domain(format!(
            "need φ ∈ (0,π/2), M ≥ 1, R ≥ 0; got φ={phi}, M={m}, R={big_r}"
        )));
    }
    let c = frac_power_constant(alpha, kappa)?;
    Ok(c * m * phi.cos().powf(-alpha) * t.powf(-alpha) * (-t * kappa * big_r * phi.cos()).exp())
}

/// Square-function route bound
/// `C·K_ψ·√(Ei(κεR cos φ))` with `C = K·C_{1/2,κ}·M·(cos φ)^{−1/2}`;
/// the `K` calibration defaults to one.
pub fn sqf_bound<R: RealScalar>(
    eps: R,
    big_r: R,
    phi: R,
    kappa: R,
    k_psi: R,
    m: R,
    k_calib: Option<R>,
) -> Result<R> {
    if !(big_r > R::zero()) {
        return Err(Error::domain(format!("R > 0 required, got {big_r}")));
    }
    if !(kappa > R::zero() && kappa < R::one() && k_psi > R::zero()) {
        return Err(Error::domain(format!(
            "need κ ∈ (0,1), K_ψ > 0; got κ={kappa}, K_ψ={k_psi}"
        )));
    }
    if !(eps > R::zero() && phi > R::zero() && phi < R::FRAC_PI_2() && m >= R::one()) {
        return Err(Error::domain("need ε > 0, φ ∈ (0,π/2), M ≥ 1"));
    }
    let k = k_calib.unwrap_or_else(R::one);
    let c = k * frac_power_constant(R::of(0.5), kappa)? * m * phi.cos().powf(R::of(-0.5));
    Ok(c * k_psi * exp_int(kappa * eps * big_r * phi.cos())?.sqrt())
}

/// Hilbert-space uniform-basis-constant bound `ub ≤ 2m·N^{1−0.32/κ²}`.
pub fn nikolski_ub_bound<R: RealScalar>(n: usize, m: R, kappa_basis: R) -> Result<R> {
    if n == 0 {
        return Err(Error::domain("N ≥ 1 required"));
    }
    if !(m >= R::one() && kappa_basis >= R::one()) {
        return Err(Error::domain(format!(
            "need m ≥ 1 and κ ≥ 1; got m={m}, κ={kappa_basis}"
        )));
    }
    let expo = R::one() - R::of(0.32) / (kappa_basis * kappa_basis);
    Ok(R::of(2.0) * m * R::of(n as f64).powf(expo))
}

/// Transference-route comparison curve
/// `η(δ,ε) = c·|log(εδ)|` for `δε ≤ 1/2`, else `2c`.
pub fn haase_rozendaal_eta<R: RealScalar>(delta: R, eps: R, c_abs: R) -> Result<R> {
    if !(delta > R::zero() && eps > R::zero() && c_abs > R::zero()) {
        return Err(Error::domain(format!(
            "need δ, ε, c > 0; got δ={delta}, ε={eps}, c={c_abs}"
        )));
    }
    let p = delta * eps;
    if p <= R::of(0.5) {
        Ok(c_abs * p.ln().abs())
    } else {
        Ok(R::of(2.0) * c_abs)
    }
}

/// `K₀`: infimum over a fixed log grid `ε ∈ [1e-12, 1e3]` of
/// `(1+1/ε)^{e^{−ε}}·ε`, deflated by 1e-4 so the grid minimum stays on
/// the safe side of the true infimum; lies in `(0,1)`.
pub fn k0_constant() -> f64 {
    static K0: OnceLock<f64> = OnceLock::new();
    *K0.get_or_init(|| {
        let n = 3001;
        let mut min = f64::INFINITY;
        for i in 0..n {
            let e = 10f64.powf(-12.0 + 15.0 * i as f64 / (n - 1) as f64);
            // (1+1/ε)^{e^{-ε}}·ε in log form
            let v = ((-e).exp() * (1.0 / e).ln_1p() + e.ln()).exp();
            if v < min {
                min = v;
            }
        }
        min * (1.0 - 1e-4)
    })
}

/// `K₁ = log(1 + 1/K₀)`.
pub fn k1_constant() -> f64 {
    (1.0 / k0_constant()).ln_1p()
}

/// Truncation index `N_ε = ⌊2·Ei(ε)/log c⌋` of the multiplier bound.
pub fn n_eps(eps: f64, c: f64) -> Result<usize> {
    if !(c > 1.0) {
        return Err(Error::domain(format!("c > 1 required, got {c}")));
    }
    let v = 2.0 * exp_int(eps)? / c.ln();
    Ok(if v < 0.0 { 0 } else { v.floor() as usize })
}

/// Assembled multiplier bound for a lacunary diagonal with ratio `c`.
#[derive(Debug, Clone, Copy)]
pub struct MultiplierBound {
    pub n_eps: usize,
    pub k_eps: f64,
    /// Contribution `π·ub(N_ε)` of the head projections.
    pub head: f64,
    /// Contribution `m·e^{−k_ε}(K₁/log c + 1)` of the lacunary tail.
    pub tail: f64,
    pub value: f64,
}

/// Upper bound `π·ub(N_ε) + m·e^{−k_ε}(K₁/log c + 1)` on
/// `‖(f·e_ε)(A)‖/‖f‖` for the lacunary multiplier `λ_n = cⁿ`.
///
/// `ub_of_neps` supplies the uniform basis constant of the first `N`
/// basis vectors (or an upper bound for it, e.g. `N·m` on a general
/// space or the Nikolski bound on a Hilbert space). The threshold
/// `ε_c = 1/(√c − 1)`; `k_ε = K₀` below it and `max(K₀, cε)` above.
pub fn multiplier_upper_bound(
    eps: f64,
    c: f64,
    m_basis: f64,
    ub_of_neps: impl Fn(usize) -> f64,
) -> Result<MultiplierBound> {
    if !(c > 1.0) {
        return Err(Error::domain(format!("c > 1 required, got {c}")));
    }
    if !(eps > 0.0 && m_basis >= 1.0) {
        return Err(Error::domain(format!(
            "need ε > 0 and m ≥ 1; got ε={eps}, m={m_basis}"
        )));
    }
    let n_eps = n_eps(eps, c)?;
    let k0 = k0_constant();
    let eps_c = 1.0 / (c.sqrt() - 1.0);
    let k_eps = if eps <= eps_c { k0 } else { k0.max(c * eps) };
    let head = if n_eps == 0 {
        0.0
    } else {
        std::f64::consts::PI * ub_of_neps(n_eps)
    };
    let tail = m_basis * (-k_eps).exp() * (k1_constant() / c.ln() + 1.0);
    Ok(MultiplierBound {
        n_eps,
        k_eps,
        head,
        tail,
        value: head + tail,
    })
}

/// Hilbert-space refinement `(K₃/log c + 1)·m·Ei(ε)^{1−0.32/κ²}`;
/// `K₃` is a calibration constant (default one).
pub fn hilbert_multiplier_bound(
    eps: f64,
    c: f64,
    m_basis: f64,
    kappa_basis: f64,
    k3: Option<f64>,
) -> Result<f64> {
    if !(c > 1.0 && eps > 0.0 && m_basis >= 1.0 && kappa_basis >= 1.0) {
        return Err(Error::domain(format!(
            "need c > 1, ε > 0, m ≥ 1, κ ≥ 1; got c={c}, ε={eps}, m={m_basis}, κ={kappa_basis}"
        )));
    }
    let k3 = k3.unwrap_or(1.0);
    let expo = 1.0 - 0.32 / (kappa_basis * kappa_basis);
    Ok((k3 / c.ln() + 1.0) * m_basis * exp_int(eps)?.powf(expo))
}

/// Per-dyadic-piece constant of the Besov-class calculus bound:
/// `c₁M + c₂M log M + c₂M log 4` (each band-limited piece lives on a
/// segment with `σ/ε = 4`).
pub fn besov_piece_bound<R: RealScalar>(m: R) -> Result<R> {
    if !(m >= R::one()) {
        return Err(Error::domain(format!("M ≥ 1 required, got {m}")));
    }
    let (c1, c2) = (c1_constant::<R>(), c2_constant::<R>());
    Ok(c1 * m + c2 * m * m.ln() + c2 * m * R::of(4.0).ln())
}

/// Grid-search infimum of `(M(φ)/π)·b(ε, 1/(kσ), φ)·e^{(σ−ε)/(kσ)}` over
/// `φ ∈ (ω, π/2)` (65-point grid) and `k ∈ {1,…,20}`. Returns the value
/// and the minimizing `(φ, k)`.
pub fn hinf_interval_bound_gridsearch(
    eps: f64,
    sigma: f64,
    omega: f64,
    m_of_phi: impl Fn(f64) -> f64,
) -> Result<(f64, f64, usize)> {
    if !(eps > 0.0 && eps < sigma && sigma.is_finite()) {
        return Err(Error::domain(format!("need 0 < ε < σ < ∞; got ε={eps}, σ={sigma}")));
    }
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&omega) {
        return Err(Error::domain(format!("ω ∈ [0,π/2) required, got {omega}")));
    }
    let mut best = (f64::INFINITY, omega, 1usize);
    for i in 1..=64 {
        let phi = omega + (std::f64::consts::FRAC_PI_2 - omega) * i as f64 / 65.0;
        for k in 1..=20usize {
            let r0 = 1.0 / (k as f64 * sigma);
            let v = m_of_phi(phi) / std::f64::consts::PI
                * thm1_bound(eps, r0, phi)?
                * ((sigma - eps) / (k as f64 * sigma)).exp();
            if v < best.0 {
                best = (v, phi, k);
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::exp_int;
    use approx::assert_relative_eq;
    use std::f64::consts::{E, FRAC_PI_3, FRAC_PI_4, PI};

    #[test]
    fn thm1_large_branch_value() {
        // 2εr₀ > 1, φ = π/3: Ei(1/4) + √e·(2π/3)
        let v = thm1_bound(1.0, 1.0, FRAC_PI_3).unwrap();
        let expect = exp_int(0.25).unwrap() + E.sqrt() * (PI - FRAC_PI_3);
        assert_relative_eq!(v, expect, max_relative = 1e-14);
        assert_relative_eq!(v, 4.497356389009573, max_relative = 1e-9);
    }

    #[test]
    fn thm1_branches_meet_at_seam() {
        for &phi in &[0.3, FRAC_PI_4, 1.2] {
            let r0 = 2.0;
            let eps = 1.0 / (2.0 * r0);
            let first = thm1_bound(eps, r0, phi).unwrap();
            let second = thm1_bound(eps * (1.0 + 1e-12), r0, phi).unwrap();
            assert!((first / second - 1.0).abs() < 1e-9, "seam mismatch at φ={phi}");
            // coarser sanity on a grid around the seam: within a factor 4
            let lo = thm1_bound(eps * 0.9, r0, phi).unwrap();
            let hi = thm1_bound(eps * 1.1, r0, phi).unwrap();
            assert!(lo / hi < 4.0 && hi / lo < 4.0);
        }
    }

    #[test]
    fn thm1_logarithmic_slope() {
        // raw-linear fit of b against log(1/ε) has slope 1 ± 0.05
        let (r0, phi) = (1.0, FRAC_PI_4);
        let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..40 {
            let eps = 10f64.powf(-10.0 + 8.0 * i as f64 / 39.0);
            let x = (1.0 / eps).ln();
            let y = thm1_bound(eps, r0, phi).unwrap();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn expstab_value_and_monotone_decay() {
        let v = expstab_bound(1.0, 1.0, FRAC_PI_4, 0.5).unwrap();
        let x = 2f64.sqrt() / 4.0;
        let expect = exp_int(x).unwrap() + (-x).exp();
        assert_relative_eq!(v, expect, max_relative = 1e-14);
        assert_relative_eq!(v, 1.4892982431696362, max_relative = 1e-9);

        // monotone decay beyond 1/(κR cos φ)
        let (big_r, phi, kappa) = (1.0, FRAC_PI_4, 0.5);
        let start = 1.0 / (kappa * big_r * phi.cos());
        let mut prev = f64::INFINITY;
        for i in 0..30 {
            let eps = start * (1.0 + i as f64);
            let v = expstab_bound(eps, big_r, phi, kappa).unwrap();
            assert!(v < prev);
            prev = v;
        }
        assert!(expstab_bound(1.0, 0.0, FRAC_PI_4, 0.5).is_err());
    }

    #[test]
    fn semigroup_bound_values() {
        assert_relative_eq!(semigroup_bound(1.0).unwrap(), 10.0 / PI, max_relative = 1e-15);
        assert_relative_eq!(
            semigroup_bound(E).unwrap(),
            2.0 * E / PI * 6.0,
            max_relative = 1e-15
        );
        let mut prev = 0.0;
        for i in 0..20 {
            let m = 1.0 + i as f64;
            let v = semigroup_bound(m).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(semigroup_bound(0.5).is_err());
    }

    #[test]
    fn hinf_constants_and_vitse_dominance() {
        let c1: f64 = c1_constant();
        let c2: f64 = c2_constant();
        assert!((c1 - 3.42).abs() < 0.01, "c1 = {c1}");
        assert!((c2 - 0.78).abs() < 0.01, "c2 = {c2}");

        for i in 0..50 {
            let m = 10f64.powf(4.0 * i as f64 / 49.0);
            let b = hinf_segment_bound(1.0, E, m).unwrap();
            let (v1, v2, v3) = vitse_constants(m);
            assert!(b.big_c1 <= v1, "C1 {} > {v1} at M={m}", b.big_c1);
            assert!(b.big_c2 <= v2);
            assert!(b.big_c3 <= v3);
            // two-term form is dominated by the single-log form
            assert!(b.bound <= b.bound_log_form * (1.0 + 1e-12));
        }

        // M = 1, σ/ε = e: log form equals 2·C₃
        let b = hinf_segment_bound(1.0, E, 1.0).unwrap();
        assert_relative_eq!(b.bound_log_form, 2.0 * b.big_c3, max_relative = 1e-14);
        assert!(hinf_segment_bound(2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn vitse_theta_values() {
        assert_relative_eq!(vitse_theta(1.0).unwrap(), FRAC_PI_3, max_relative = 1e-14);
        assert_relative_eq!(vitse_theta(5.0).unwrap(), 0.1f64.acos(), max_relative = 1e-14);
        assert!(vitse_theta(1e12).unwrap() < std::f64::consts::FRAC_PI_2);
        assert!(vitse_theta(1e12).unwrap() > 1.57);
        assert!(vitse_theta(0.3).is_err());
    }

    #[test]
    fn exp_decay_shape() {
        // R = 0: flat in ε
        let a = exp_decay_bound(1.0, 0.0, FRAC_PI_4, 0.5, 1.0, None).unwrap();
        let b = exp_decay_bound(7.0, 0.0, FRAC_PI_4, 0.5, 1.0, None).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-14);
        // exponential law: bound(ε)/bound(2ε) = e^{εκR cos φ}
        let (eps, big_r, phi, kappa) = (3.0, 1.0, FRAC_PI_4, 0.5);
        let r1 = exp_decay_bound(eps, big_r, phi, kappa, 1.0, None).unwrap();
        let r2 = exp_decay_bound(2.0 * eps, big_r, phi, kappa, 1.0, None).unwrap();
        assert_relative_eq!(r1 / r2, (eps * kappa * big_r * phi.cos()).exp(), max_relative = 1e-12);
        // log-slope in ε equals −κR cos φ
        let slope = (r2.ln() - r1.ln()) / eps;
        assert_relative_eq!(slope, -0.5 * 2f64.sqrt() / 2.0, max_relative = 1e-12);
    }

    #[test]
    fn sqf_bound_values() {
        // κεR cos φ = 1 ⇒ value = C·K_ψ·√Ei(1)
        let phi = FRAC_PI_4;
        let kappa = 0.5;
        let eps = 1.0 / (kappa * phi.cos());
        let v = sqf_bound(eps, 1.0, phi, kappa, 1.0, 1.0, None).unwrap();
        let c = frac_power_constant(0.5, kappa).unwrap() * phi.cos().powf(-0.5);
        assert_relative_eq!(v, c * exp_int(1.0f64).unwrap().sqrt(), max_relative = 1e-13);
        assert_relative_eq!(exp_int(1.0f64).unwrap().sqrt(), 0.4683843874378399, max_relative = 1e-9);
        // Ei decreasing: doubling the argument shrinks the bound
        let v2 = sqf_bound(2.0 * eps, 1.0, phi, kappa, 1.0, 1.0, None).unwrap();
        assert!(v2 < v);
        assert!(sqf_bound(1.0, 0.0, phi, kappa, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn sqf_bound_half_slope() {
        // log value against log log(1/ε): slope 1/2 ± 0.05
        let (big_r, phi, kappa) = (1.0, FRAC_PI_4, 0.5);
        let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..40 {
            let eps = 10f64.powf(-10.0 + 8.0 * i as f64 / 39.0);
            let x = (1.0f64 / eps).ln().ln();
            let y = sqf_bound(eps, big_r, phi, kappa, 1.0, 1.0, None).unwrap().ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope - 0.5).abs() < 0.05, "slope {slope}");
    }

    #[test]
    fn frac_power_constant_limits() {
        // κ = 0: chord vanishes, C = 2Γ(α)/π
        for &alpha in &[0.25, 0.5, 1.0] {
            let c = frac_power_constant(alpha, 0.0).unwrap();
            assert_relative_eq!(
                c,
                2.0 * crate::specfn::gamma_fn(alpha).unwrap() / PI,
                max_relative = 1e-14
            );
        }
        // R = 0, α = 1: classical analytic-semigroup derivative shape C·M/(t cos φ)
        let b = frac_power_bound(1.0, 2.0, 0.0, 0.0, FRAC_PI_4, 1.0).unwrap();
        let c = frac_power_constant(1.0, 0.0).unwrap();
        assert_relative_eq!(b, c / (2.0 * FRAC_PI_4.cos()), max_relative = 1e-14);
        assert!(frac_power_bound(1.5, 1.0, 0.0, 0.0, FRAC_PI_4, 1.0).is_err());
    }

    #[test]
    fn nikolski_values() {
        assert_relative_eq!(nikolski_ub_bound(1, 3.0, 2.0).unwrap(), 6.0, max_relative = 1e-15);
        // κ = 1: exponent 0.68
        let v = nikolski_ub_bound(100, 1.0, 1.0).unwrap();
        assert_relative_eq!(v, 2.0 * 100f64.powf(0.68), max_relative = 1e-14);
        // κ → ∞: exponent → 1
        let v = nikolski_ub_bound(100, 1.0, 1e9).unwrap();
        assert_relative_eq!(v, 200.0, max_relative = 1e-6);
    }

    #[test]
    fn eta_branches() {
        let c = 1.3;
        assert_relative_eq!(
            haase_rozendaal_eta(1e-3, 1e-3, c).unwrap(),
            c * 6.0 * 10f64.ln(),
            max_relative = 1e-12
        );
        // tie δε = 1/2 takes the log branch
        assert_relative_eq!(
            haase_rozendaal_eta(0.5, 1.0, c).unwrap(),
            c * 2f64.ln(),
            max_relative = 1e-12
        );
        assert_relative_eq!(haase_rozendaal_eta(2.0, 1.0, c).unwrap(), 2.0 * c, max_relative = 1e-15);
    }

    #[test]
    fn k0_in_unit_interval() {
        let k0 = k0_constant();
        assert!(k0 > 0.0 && k0 < 1.0, "K0 = {k0}");
        // h(ε) = (1+1/ε)^{e^{-ε}}·ε really stays above K0 on a finer grid
        for i in 0..5000 {
            let e = 10f64.powf(-12.0 + 15.0 * i as f64 / 4999.0);
            let h = ((-e).exp() * (1.0 / e).ln_1p() + e.ln()).exp();
            assert!(h >= k0, "h(ε) dipped below K0 at ε={e}");
        }
        assert_relative_eq!(k1_constant(), (1.0 + 1.0 / k0_constant()).ln(), max_relative = 1e-15);
    }

    #[test]
    fn multiplier_bound_pieces() {
        // c = 2, ε = 1e-6: N_ε = 38
        assert_eq!(n_eps(1e-6, 2.0).unwrap(), 38);
        let b = multiplier_upper_bound(1e-6, 2.0, 1.0, |n| n as f64).unwrap();
        assert_eq!(b.n_eps, 38);
        assert_relative_eq!(b.head, PI * 38.0, max_relative = 1e-14);

        // ε large enough that N_ε = 0: pure exponential tail with k_ε = cε
        let eps = 40.0;
        let b = multiplier_upper_bound(eps, 2.0, 1.0, |_| panic!("head must be skipped")).unwrap();
        assert_eq!(b.n_eps, 0);
        assert_relative_eq!(b.k_eps, 2.0 * eps, max_relative = 1e-14);
        assert!(b.value < 1e-30);
    }

    #[test]
    fn hilbert_refinement_power_law() {
        // exact power law in Ei: fitted slope equals the exponent
        let kappa = 2.0;
        let expo = 1.0 - 0.32 / (kappa * kappa);
        let mut pts = vec![];
        for i in 0..20 {
            let eps = 10f64.powf(-9.0 + 6.0 * i as f64 / 19.0);
            let v = hilbert_multiplier_bound(eps, 2.0, 1.0, kappa, None).unwrap();
            pts.push((exp_int(eps).unwrap().ln(), v.ln()));
        }
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert_relative_eq!(slope, expo, max_relative = 1e-10);
    }

    #[test]
    fn gridsearch_improves_on_fixed_choice() {
        let m_of_phi = |phi: f64| 1.0 / phi.sin();
        let (best, phi, k) = hinf_interval_bound_gridsearch(0.01, 1.0, 0.0, m_of_phi).unwrap();
        // must not exceed the k = 5, φ = arccos(1/2M)-style default
        let fixed = m_of_phi(FRAC_PI_3) / PI
            * thm1_bound(0.01, 1.0 / (5.0 * 1.0), FRAC_PI_3).unwrap()
            * ((1.0f64 - 0.01) / 5.0).exp();
        assert!(best <= fixed * (1.0 + 1e-12));
        assert!(phi > 0.0 && phi < std::f64::consts::FRAC_PI_2);
        assert!((1..=20).contains(&k));
    }

    #[test]
    fn bound_query_validation() {
        let mut q = BoundQuery {
            eps: 1.0,
            r0: 1.0,
            big_r: 1.0,
            phi: FRAC_PI_4,
            kappa: 0.5,
            m_const: 1.0,
            sigma: 2.0,
            delta: 1.0,
            c_ratio: 2.0,
            k_psi: 1.0,
        };
        assert!(q.validate().is_ok());
        q.m_const = 0.9;
        assert!(q.validate().is_err());
        q.m_const = 1.0;
        q.kappa = 1.0;
        assert!(q.validate().is_err());
    }
}
