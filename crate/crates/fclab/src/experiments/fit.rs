//! Ordinary least-squares slope fitting on transformed coordinates; every
//! asymptotic claim the experiments check becomes a fitted exponent.

use crate::error::{Error, Result};
use crate::specfn::exp_int;
use crate::Real;

/// Abscissa transform for [`fit_log_exponent`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XTransform {
    /// `x = log(1/ε)`: power laws `y ~ ε^{−p}` fit slope `p`.
    LogInvEps,
    /// `x = log log(1/ε)`: logarithmic growth `y ~ |log ε|^p` fits `p`.
    LogLogInvEps,
    /// `x = log Ei(ε)`: growth `y ~ Ei(ε)^p` fits `p`.
    LogEi,
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub slope: Real,
    pub intercept: Real,
    pub stderr: Real,
    pub n: usize,
}

/// Plain least squares `y ≈ slope·x + intercept` with the slope's
/// standard error.
pub fn fit_linear(x: &[Real], y: &[Real]) -> Result<FitResult> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return Err(Error::Numeric("fit needs at least two matched points".into()));
    }
    let nf = n as Real;
    let mx = x.iter().sum::<Real>() / nf;
    let my = y.iter().sum::<Real>() / nf;
    let sxx: Real = x.iter().map(|&v| (v - mx) * (v - mx)).sum();
    let sxy: Real = x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::Numeric("degenerate abscissae in fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: Real = x
        .iter()
        .zip(y)
        .map(|(&a, &b)| {
            let r = b - (slope * a + intercept);
            r * r
        })
        .sum();
    let stderr = if n > 2 {
        (ss_res / ((nf - 2.0) * sxx)).sqrt()
    } else {
        0.0
    };
    Ok(FitResult {
        slope,
        intercept,
        stderr,
        n,
    })
}

/// Fits `log y` against the transformed abscissa; requires at least 8
/// rows, positive values, and strictly monotone transformed abscissae.
pub fn fit_log_exponent(eps: &[Real], values: &[Real], transform: XTransform) -> Result<FitResult> {
    if eps.len() < 8 {
        return Err(Error::Numeric(format!(
            "slope fits need at least 8 rows, got {}",
            eps.len()
        )));
    }
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Numeric("log fit needs strictly positive values".into()));
    }
    let mut x = Vec::with_capacity(eps.len());
    for &e in eps {
        let v = match transform {
            XTransform::LogInvEps => (1.0 / e).ln(),
            XTransform::LogLogInvEps => {
                if e >= 1.0 {
                    return Err(Error::Numeric(format!(
                        "log log(1/ε) undefined at ε = {e} ≥ 1"
                    )));
                }
                (1.0 / e).ln().ln()
            }
            XTransform::LogEi => exp_int(e)?.ln(),
        };
        x.push(v);
    }
    let monotone = x.windows(2).all(|w| w[1] > w[0]) || x.windows(2).all(|w| w[1] < w[0]);
    if !monotone {
        return Err(Error::Numeric(
            "transformed abscissae are not strictly monotone".into(),
        ));
    }
    let y: Vec<Real> = values.iter().map(|v| v.ln()).collect();
    fit_linear(&x, &y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn eps_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn exact_power_law_recovers_slope() {
        let eps = eps_grid(-9.0, -1.0, 12);
        let vals: Vec<f64> = eps.iter().map(|e| 3.0 * e.powf(-0.7)).collect();
        let fit = fit_log_exponent(&eps, &vals, XTransform::LogInvEps).unwrap();
        assert_relative_eq!(fit.slope, 0.7, max_relative = 1e-12);
        assert!(fit.stderr < 1e-12);
    }

    #[test]
    fn log_growth_recovers_unit_slope() {
        let eps = eps_grid(-9.0, -2.0, 16);
        let vals: Vec<f64> = eps.iter().map(|e| (1.0f64 / e).ln()).collect();
        let fit = fit_log_exponent(&eps, &vals, XTransform::LogLogInvEps).unwrap();
        assert_relative_eq!(fit.slope, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn noisy_fractional_exponent() {
        // |log ε|^{0.6} with 1% multiplicative noise recovers 0.6 ± 0.02
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let eps = eps_grid(-10.0, -2.0, 40);
        let vals: Vec<f64> = eps
            .iter()
            .map(|e| (1.0f64 / e).ln().powf(0.6) * (1.0 + 0.01 * (rng.gen::<f64>() - 0.5)))
            .collect();
        let fit = fit_log_exponent(&eps, &vals, XTransform::LogLogInvEps).unwrap();
        assert!((fit.slope - 0.6).abs() < 0.02, "slope {}", fit.slope);
    }

    #[test]
    fn ei_transform_matches_exponent() {
        let eps = eps_grid(-8.0, -3.0, 10);
        let vals: Vec<f64> = eps
            .iter()
            .map(|e| crate::specfn::exp_int(*e).unwrap().powf(0.43))
            .collect();
        let fit = fit_log_exponent(&eps, &vals, XTransform::LogEi).unwrap();
        assert_relative_eq!(fit.slope, 0.43, max_relative = 1e-10);
    }

    #[test]
    fn validation_paths() {
        let eps = eps_grid(-8.0, -3.0, 6);
        let vals = vec![1.0; 6];
        assert!(fit_log_exponent(&eps, &vals, XTransform::LogInvEps).is_err()); // < 8 rows
        let eps = eps_grid(-8.0, -3.0, 8);
        let mut vals = vec![1.0; 8];
        vals[3] = -2.0;
        assert!(fit_log_exponent(&eps, &vals, XTransform::LogInvEps).is_err()); // negative
        assert!(fit_linear(&[1.0, 1.0], &[2.0, 3.0]).is_err()); // degenerate
    }
}
