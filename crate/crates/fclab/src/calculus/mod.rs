//! Finite-dimensional Riesz-Dunford functional calculus: operator models,
//! contour construction, adaptive contour quadrature, sectorality-constant
//! estimation, and operator norms.

pub mod norm;
pub mod path;
pub mod quad;
pub mod sector;

pub use norm::{operator_norm, operator_norm_op, MatOp, NormOutcome, WeightedOp};
pub use path::{build_keyhole_path, ContourPath, PathVariant, Segment};
pub use quad::{
    apply_spectral, default_path, dunford_values, resolvent_apply, riesz_dunford, semigroup_apply,
    DiagApplied, HoloFn,
};
pub use sector::{sectorality_constant, SectorEstimate, SectorSampling};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::schauder::Synthesis;
use crate::{Cplx, Real};

/// Tolerances and limits for the adaptive contour quadrature.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: Real,
    pub rel_tol: Real,
    pub max_panel_depth: usize,
    pub ray_truncation_tol: Real,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-9,
            max_panel_depth: 38,
            ray_truncation_tol: 1e-13,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.ray_truncation_tol > 0.0) {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if self.max_panel_depth == 0 {
            return Err(Error::domain("max_panel_depth must be at least 1"));
        }
        Ok(())
    }
}

/// A finite-dimensional sectorial operator in one of three representations.
#[derive(Debug, Clone)]
pub enum OperatorModel {
    /// Exact diagonal in an orthonormal basis.
    DiagonalOnb { eigenvalues: Vec<Cplx> },
    /// Multiplier in a weighted Schauder basis, realized on a quadrature
    /// grid through the synthesis/dual-synthesis pair.
    SchauderMultiplier {
        synthesis: Arc<Synthesis>,
        multiplier: Vec<Cplx>,
    },
    /// Dense complex matrix (a debugging surface; the named experiments
    /// use the other two kinds).
    Dense { matrix: CMatrix },
}

impl OperatorModel {
    /// Diagonal model with spectrum in the open right sector.
    pub fn diagonal(eigenvalues: Vec<Cplx>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::domain("diagonal model needs at least one eigenvalue"));
        }
        for &l in &eigenvalues {
            if !(l.norm() > 0.0) || !l.re.is_finite() || !l.im.is_finite() {
                return Err(Error::domain(format!("eigenvalue {l} must be finite and nonzero")));
            }
            if l.arg().abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(Error::domain(format!(
                    "eigenvalue {l} lies outside the open right sector"
                )));
            }
        }
        Ok(OperatorModel::DiagonalOnb { eigenvalues })
    }

    /// Lacunary diagonal `diag(c, c², …, cⁿ)`.
    pub fn lacunary(c: Real, n: usize) -> Result<Self> {
        if !(c > 1.0) {
            return Err(Error::domain(format!("lacunary ratio must exceed 1, got {c}")));
        }
        let mut eigs = Vec::with_capacity(n);
        for k in 1..=n {
            let v = c.powi(k as i32);
            if !v.is_finite() {
                return Err(Error::domain(format!("c^{k} overflows f64")));
            }
            eigs.push(Cplx::new(v, 0.0));
        }
        Self::diagonal(eigs)
    }

    pub fn dense(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::domain("dense model must be square"));
        }
        Ok(OperatorModel::Dense { matrix })
    }

    /// Model dimension: eigenvalue count, multiplier length, or matrix size.
    pub fn dim(&self) -> usize {
        match self {
            OperatorModel::DiagonalOnb { eigenvalues } => eigenvalues.len(),
            OperatorModel::SchauderMultiplier { multiplier, .. } => multiplier.len(),
            OperatorModel::Dense { matrix } => matrix.rows(),
        }
    }

    /// Spectrum when the representation carries it exactly.
    pub fn spectrum(&self) -> Option<&[Cplx]> {
        match self {
            OperatorModel::DiagonalOnb { eigenvalues } => Some(eigenvalues),
            OperatorModel::SchauderMultiplier { multiplier, .. } => Some(multiplier),
            OperatorModel::Dense { .. } => None,
        }
    }

    /// `dist(σ(A), 0)` for spectral representations.
    pub fn dist_origin(&self) -> Option<Real> {
        self.spectrum()
            .map(|s| s.iter().map(|z| z.norm()).fold(Real::MAX, Real::min))
    }

    /// Maximal `|arg λ|` over the spectrum (the sector half-angle the
    /// model certifies).
    pub fn angular_spread(&self) -> Option<Real> {
        self.spectrum()
            .map(|s| s.iter().map(|z| z.arg().abs()).fold(0.0, Real::max))
    }
}
