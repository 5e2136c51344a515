//! Fourier coefficients against singular power weights:
//! `c_{n,α} = ∫_{−π/2}^{π/2} |t|^α e^{int} dt = 2∫_0^{π/2} t^α cos(nt) dt`,
//! the envelope constants `d_{k,α} = 2∫_0^{kπ/2} t^α cos t dt`, and the
//! coefficient vectors of the sharpness test functions.

use crate::error::{Error, Result};
use crate::{Cplx, Real};

use super::quadgrid::graded_power_integral;
use super::{BasisSpec, CoeffOrigin, CoeffVector, WeightVariant};

/// `c_{n,α}` for `n ≥ 1`, `α ∈ (−1,1)`; real by symmetry. Absolute error
/// well below 1e−9 (graded panels toward the singularity, panel width
/// capped against the oscillation).
pub fn fourier_coeff_c(n: usize, alpha: Real) -> Result<Real> {
    if n == 0 {
        return Err(Error::domain("fourier_coeff_c needs n ≥ 1; use fourier_coeff_c0"));
    }
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::domain(format!("α ∈ (−1,1) required, got {alpha}")));
    }
    let nf = n as Real;
    let v = graded_power_integral(
        alpha,
        &|t| (nf * t).cos(),
        1.0,
        std::f64::consts::FRAC_PI_2,
        nf,
        1e-11,
    )?;
    Ok(2.0 * v)
}

/// The zero-frequency coefficient `c_{0,α} = 2∫_0^{π/2} t^α dt`.
pub fn fourier_coeff_c0(alpha: Real) -> Result<Real> {
    if !(alpha > -1.0 && alpha < 1.0) {
        return Err(Error::domain(format!("α ∈ (−1,1) required, got {alpha}")));
    }
    Ok(2.0 * std::f64::consts::FRAC_PI_2.powf(1.0 + alpha) / (1.0 + alpha))
}

/// Envelope constants `d_{k,α} = 2∫_0^{kπ/2} t^α cos t dt`, `k ∈ {1,3}`,
/// `α ∈ (−1,0]`; they satisfy `d_{3,α}·n^{−1−α} ≤ c_{n,α} ≤ d_{1,α}·n^{−1−α}`.
pub fn d_constant(k: usize, alpha: Real) -> Result<Real> {
    if k != 1 && k != 3 {
        return Err(Error::domain(format!("k ∈ {{1,3}} required, got {k}")));
    }
    if !(alpha > -1.0 && alpha <= 0.0) {
        return Err(Error::domain(format!("α ∈ (−1,0] required, got {alpha}")));
    }
    let hi = k as Real * std::f64::consts::FRAC_PI_2;
    let v = graded_power_integral(alpha, &|t| t.cos(), 1.0, hi, 1.0, 1e-12)?;
    Ok(2.0 * v)
}

/// Which named test vector to expand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestVector {
    /// `x(t) = |t|^{−β}·1_{(0,π/2)}(|t|)`, expanded in the primal basis.
    XHead,
    /// The tail vector supported on `π/2 < |t| < π`, expanded in the dual
    /// basis: `(π−|t|)^{−β}` for the two-sided weight,
    /// `|t|^{−β}(π−|t|)^{−β}` for the pure weight.
    YTail,
}

/// Coefficients of the sharpness test vectors. For `XHead` the
/// coefficients are `x_1 = c_{0,−2β}/(2π)`, `x_{2k} = x_{2k+1} =
/// c_{k,−2β}/(2π)`: real and positive. For `YTail` they are
/// `(−1)^k·c_{k,−2β}` (two-sided) resp. `(−1)^k·c_{k,−β}` (pure weight).
pub fn test_vector_coeffs(spec: &BasisSpec, which: TestVector) -> Result<CoeffVector> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut values = Vec::with_capacity(spec.n_basis);
    match which {
        TestVector::XHead => {
            let alpha = -2.0 * spec.beta;
            let mut cache: Vec<Real> = vec![fourier_coeff_c0(alpha)?];
            for n in 1..=spec.n_basis {
                let k = BasisSpec::frequency(n).unsigned_abs() as usize;
                while cache.len() <= k {
                    cache.push(fourier_coeff_c(cache.len(), alpha)?);
                }
                values.push(Cplx::new(cache[k] / two_pi, 0.0));
            }
            Ok(CoeffVector {
                values,
                origin: CoeffOrigin::Primal,
            })
        }
        TestVector::YTail => {
            let alpha = match spec.variant {
                WeightVariant::TwoSidedWeight => -2.0 * spec.beta,
                WeightVariant::PureWeight => -spec.beta,
            };
            let mut cache: Vec<Real> = vec![fourier_coeff_c0(alpha)?];
            for n in 1..=spec.n_basis {
                let k = BasisSpec::frequency(n).unsigned_abs() as usize;
                while cache.len() <= k {
                    cache.push(fourier_coeff_c(cache.len(), alpha)?);
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                values.push(Cplx::new(sign * cache[k], 0.0));
            }
            Ok(CoeffVector {
                values,
                origin: CoeffOrigin::Dual,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::gamma_fn;
    use approx::assert_relative_eq;

    #[test]
    fn elementary_value_alpha_zero() {
        // α = 0, n = 1: 2∫_0^{π/2} cos t dt = 2
        assert_relative_eq!(fourier_coeff_c(1, 0.0).unwrap(), 2.0, max_relative = 1e-11);
        assert_relative_eq!(d_constant(1, 0.0).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn asymptotic_constant() {
        // c_{n,α}·n^{1+α} → C_{1,α} = −2 sin(απ/2)·Γ(α+1); at α = −0.8
        // the limit is ≈ 8.732
        let alpha = -0.8;
        let c1 = -2.0 * (alpha * std::f64::consts::FRAC_PI_2).sin() * gamma_fn(alpha + 1.0).unwrap();
        assert_relative_eq!(c1, 8.732, max_relative = 2e-4);
        let drift_small = (fourier_coeff_c(64, alpha).unwrap() * 64f64.powf(1.0 + alpha) - c1).abs();
        let drift_large = (fourier_coeff_c(4096, alpha).unwrap() * 4096f64.powf(1.0 + alpha) - c1).abs();
        assert!(drift_large < drift_small);
        assert!(drift_large < 0.02 * c1.abs());
    }

    #[test]
    fn bracket_between_d_constants() {
        for &alpha in &[-0.9, -0.6, -0.3, 0.0] {
            let d1 = d_constant(1, alpha).unwrap();
            let d3 = d_constant(3, alpha).unwrap();
            for &n in &[1usize, 2, 3, 5, 9, 17, 64, 257] {
                let c = fourier_coeff_c(n, alpha).unwrap();
                let scaled = c * (n as f64).powf(1.0 + alpha);
                assert!(
                    d3 - 1e-8 <= scaled && scaled <= d1 + 1e-8,
                    "bracket failed at n={n}, α={alpha}: {d3} ≤ {scaled} ≤ {d1}"
                );
            }
        }
    }

    #[test]
    fn d3_positive_left_of_minus_half() {
        for &alpha in &[-0.99, -0.75, -0.5] {
            assert!(d_constant(3, alpha).unwrap() > 0.0, "d3 must be positive at α={alpha}");
        }
    }

    #[test]
    fn d_diverges_like_inverse_one_plus_alpha() {
        // d_{k,α}·(1+α) → 2 as α → −1⁺
        for &k in &[1usize, 3] {
            let near = d_constant(k, -0.999).unwrap() * (1.0 - 0.999);
            assert!((near - 2.0).abs() < 0.05, "k={k}: {near}");
        }
    }

    #[test]
    fn coefficient_symmetry_and_positivity() {
        let spec = BasisSpec::new(0.4, WeightVariant::TwoSidedWeight, 21, 0).unwrap();
        let x = test_vector_coeffs(&spec, TestVector::XHead).unwrap();
        for n in 1..=spec.n_basis {
            let v = x.values[n - 1];
            assert!(v.im == 0.0 && v.re > 0.0, "x_{n} must be real positive");
        }
        // x_{2k} = x_{2k+1} exactly
        for k in 1..=10 {
            assert_eq!(x.values[2 * k - 1], x.values[2 * k]);
        }
        // y_{2k} = (−1)^k·2π·x_{2k}
        let y = test_vector_coeffs(&spec, TestVector::YTail).unwrap();
        for k in 1..=10 {
            let expect = 2.0 * std::f64::consts::PI * x.values[2 * k - 1].re
                * if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(y.values[2 * k - 1].re, expect, max_relative = 1e-12);
            assert_eq!(y.values[2 * k - 1], y.values[2 * k]);
        }
    }

    #[test]
    fn coefficient_decay_exponent() {
        // fitted decay of x_{2k} in k is −1+2β for β = 0.45, k ∈ [8, 512]
        let beta = 0.45;
        let spec = BasisSpec::new(beta, WeightVariant::TwoSidedWeight, 1025, 0).unwrap();
        let x = test_vector_coeffs(&spec, TestVector::XHead).unwrap();
        let (mut sx, mut sy, mut sxx, mut sxy, mut m) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let mut k = 8usize;
        while k <= 512 {
            let lx = (k as f64).ln();
            let ly = x.values[2 * k - 1].re.ln();
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            m += 1.0;
            k *= 2;
        }
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        assert!(
            (slope - (-1.0 + 2.0 * beta)).abs() < 0.03,
            "decay exponent {slope} vs {}",
            -1.0 + 2.0 * beta
        );
    }

    #[test]
    fn domain_errors() {
        assert!(fourier_coeff_c(0, -0.5).is_err());
        assert!(fourier_coeff_c(3, -1.0).is_err());
        assert!(fourier_coeff_c(3, 1.0).is_err());
        assert!(d_constant(2, -0.5).is_err());
        assert!(d_constant(3, 0.5).is_err());
    }
}
