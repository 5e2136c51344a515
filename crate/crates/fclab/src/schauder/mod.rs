//! Weighted trigonometric Schauder bases on `L²(−π,π)`, their dual bases,
//! Fourier-coefficient asymptotics, multiplier operators realized on a
//! graded quadrature grid, projection constants, certified lower-bound
//! pairings and square-function integrals.

pub mod coeffs;
pub mod constants;
pub mod quadgrid;
pub mod sqf;
pub mod synthesis;

pub use coeffs::{d_constant, fourier_coeff_c, fourier_coeff_c0, test_vector_coeffs, TestVector};
pub use constants::{
    pairing_lower_bound, projection_constants, PairingEngine, ProjectionConstants, ProjectionMode,
};
pub use sqf::{
    besselian_coeff_check, dual_sqf_constant_samples, k_beta, sqf_sharpness_pairing,
    square_function_integral, PsiKind, SqfInput,
};
pub use synthesis::{multiplier_operator, multiplier_operator_with, synthesis_matrix, Synthesis};

use crate::error::{Error, Result};
use crate::{Cplx, Real};

/// Weight shape of the basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightVariant {
    /// `w_β(t) = |t|^β` on `|t| < π/2`, `(π−|t|)^{−β}` on `|t| ≥ π/2`;
    /// `β ∈ (1/4, 1/2)`.
    TwoSidedWeight,
    /// `|t|^β` throughout; `β ∈ (1/3, 1/2)`.
    PureWeight,
}

/// Description of a truncated weighted trigonometric basis
/// `{w(t)·e^{±ikt}}` with the index map `n = 2k ↔ e^{ikt}`,
/// `n = 2k+1 ↔ e^{−ikt}` (so `n = 1` is the zero frequency).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisSpec {
    pub beta: Real,
    pub variant: WeightVariant,
    /// Number of basis functions (indices `1..=n_basis`).
    pub n_basis: usize,
    /// Panel-count hint for the grid discretization; zero = automatic.
    pub grid_hint: usize,
}

impl BasisSpec {
    pub fn new(beta: Real, variant: WeightVariant, n_basis: usize, grid_hint: usize) -> Result<Self> {
        let ok = match variant {
            WeightVariant::TwoSidedWeight => beta > 0.25 && beta < 0.5,
            WeightVariant::PureWeight => beta > 1.0 / 3.0 && beta < 0.5,
        };
        if !ok {
            return Err(Error::domain(format!(
                "β = {beta} outside the admissible range of {variant:?}"
            )));
        }
        if n_basis == 0 {
            return Err(Error::domain("basis truncation must be positive"));
        }
        Ok(BasisSpec {
            beta,
            variant,
            n_basis,
            grid_hint,
        })
    }

    /// Frequency of basis index `n ≥ 1`.
    #[inline]
    pub fn frequency(n: usize) -> i64 {
        if n % 2 == 0 {
            (n / 2) as i64
        } else {
            -((n / 2) as i64)
        }
    }

    /// The weight `w(t)`.
    #[inline]
    pub fn weight(&self, t: Real) -> Real {
        let a = t.abs();
        match self.variant {
            WeightVariant::TwoSidedWeight => {
                if a < std::f64::consts::FRAC_PI_2 {
                    a.powf(self.beta)
                } else {
                    (std::f64::consts::PI - a).powf(-self.beta)
                }
            }
            WeightVariant::PureWeight => a.powf(self.beta),
        }
    }

    /// The dual weight `1/(2π·w(t))`.
    #[inline]
    pub fn dual_weight(&self, t: Real) -> Real {
        1.0 / (2.0 * std::f64::consts::PI * self.weight(t))
    }

    /// Basis function `φ_n(t)`.
    #[inline]
    pub fn basis_fn(&self, n: usize, t: Real) -> Cplx {
        let f = Self::frequency(n) as Real;
        Cplx::from_polar(self.weight(t), f * t)
    }

    /// Dual basis function `φ*_n(t)`.
    #[inline]
    pub fn dual_fn(&self, n: usize, t: Real) -> Cplx {
        let f = Self::frequency(n) as Real;
        Cplx::from_polar(self.dual_weight(t), f * t)
    }
}

/// Coefficient vector of one of the named test vectors, with the side of
/// the expansion it refers to.
#[derive(Debug, Clone)]
pub struct CoeffVector {
    pub values: Vec<Cplx>,
    pub origin: CoeffOrigin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoeffOrigin {
    /// Expansion `x = Σ x_n φ_n` (coefficients from the dual pairing).
    Primal,
    /// Expansion `y = Σ y_n φ*_n` (coefficients from the primal pairing).
    Dual,
}

impl CoeffVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_ranges_per_variant() {
        assert!(BasisSpec::new(0.3, WeightVariant::TwoSidedWeight, 8, 0).is_ok());
        assert!(BasisSpec::new(0.2, WeightVariant::TwoSidedWeight, 8, 0).is_err());
        assert!(BasisSpec::new(0.3, WeightVariant::PureWeight, 8, 0).is_err());
        assert!(BasisSpec::new(0.4, WeightVariant::PureWeight, 8, 0).is_ok());
        assert!(BasisSpec::new(0.5, WeightVariant::PureWeight, 8, 0).is_err());
    }

    #[test]
    fn index_map() {
        assert_eq!(BasisSpec::frequency(1), 0);
        assert_eq!(BasisSpec::frequency(2), 1);
        assert_eq!(BasisSpec::frequency(3), -1);
        assert_eq!(BasisSpec::frequency(8), 4);
        assert_eq!(BasisSpec::frequency(9), -4);
    }

    #[test]
    fn weight_shapes() {
        let two = BasisSpec::new(0.4, WeightVariant::TwoSidedWeight, 4, 0).unwrap();
        let pure = BasisSpec::new(0.4, WeightVariant::PureWeight, 4, 0).unwrap();
        // vanishes at 0, blows up toward ±π for the two-sided variant
        assert!(two.weight(1e-8) < 1e-3);
        assert!(two.weight(std::f64::consts::PI - 1e-8) > 1e3);
        assert!(pure.weight(std::f64::consts::PI - 1e-8) < 2.0);
        // symmetric
        assert_eq!(two.weight(0.7), two.weight(-0.7));
    }
}
