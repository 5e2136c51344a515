//! Basis projection constants `m ≤ κ ≤ ub` and the certified pairing
//! lower bounds for multiplier norms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Real;

use super::coeffs::{test_vector_coeffs, TestVector};
use super::quadgrid::test_vector_norms;
use super::synthesis::Synthesis;
use super::{BasisSpec, WeightVariant};

/// How to measure the subset-projection constants.
#[derive(Debug, Clone, Copy)]
pub enum ProjectionMode {
    /// Full enumeration of the `2^N − 1` subsets (requires `N ≤ 12`).
    ExactSmall,
    /// Interval sweep plus seeded random subsets; `ub` is then a lower
    /// estimate only.
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct ProjectionConstants {
    /// `sup_n ‖P_{{n}}‖`.
    pub m: Real,
    /// Interval constant `sup ‖P_[k,ℓ]‖` (sampled intervals in
    /// `Sampled` mode).
    pub kappa: Real,
    /// Uniform constant `sup_σ ‖P_σ‖`; exact in `ExactSmall` mode,
    /// otherwise a certified-from-below sample maximum.
    pub ub_lower: Real,
    pub ub_exact: bool,
}

const NORM_TOL: Real = 1e-7;

/// Measures `m`, `κ` and `ub` of the realized basis.
pub fn projection_constants(syn: &Synthesis, mode: ProjectionMode) -> Result<ProjectionConstants> {
    let n = syn.spec.n_basis;
    let m = syn.m_constant();

    let mut kappa: Real = m;
    let intervals: Vec<(usize, usize)> = match mode {
        ProjectionMode::ExactSmall => {
            if n > 12 {
                return Err(Error::domain(format!(
                    "exact subset enumeration is capped at N = 12, got {n}"
                )));
            }
            (1..=n)
                .flat_map(|k| (k..=n).map(move |l| (k, l)))
                .collect()
        }
        ProjectionMode::Sampled { .. } => {
            let mut iv = Vec::new();
            for l in 1..=n {
                iv.push((1, l)); // prefixes
            }
            let mut w = 2usize;
            while w <= n {
                let stride = (w / 2).max(1);
                let mut k = 1usize;
                while k + w - 1 <= n {
                    iv.push((k, k + w - 1));
                    k += stride;
                }
                w *= 2;
            }
            for k in (1..=n).step_by((n / 16).max(1)) {
                iv.push((k, n)); // suffixes
            }
            iv
        }
    };
    for (k, l) in intervals {
        let subset: Vec<usize> = (k..=l).collect();
        kappa = kappa.max(syn.projection_norm(&subset, NORM_TOL)?);
    }

    let (ub_lower, ub_exact) = match mode {
        ProjectionMode::ExactSmall => {
            let mut ub = kappa;
            for mask in 1u32..(1u32 << n) {
                let subset: Vec<usize> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                ub = ub.max(syn.projection_norm(&subset, NORM_TOL)?);
            }
            (ub, true)
        }
        ProjectionMode::Sampled { seed, samples } => {
            let mut ub = kappa;
            // the sign pattern behind the conditionality witness: whole
            // index pairs, every other pair
            let alt: Vec<usize> = (1..=n).filter(|i| (i / 2) % 2 == 0).collect();
            if !alt.is_empty() {
                ub = ub.max(syn.projection_norm(&alt, NORM_TOL)?);
            }
            let alt2: Vec<usize> = (1..=n).filter(|i| (i / 2) % 2 == 1).collect();
            if !alt2.is_empty() {
                ub = ub.max(syn.projection_norm(&alt2, NORM_TOL)?);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let subset: Vec<usize> = (1..=n).filter(|_| rng.gen::<bool>()).collect();
                if !subset.is_empty() {
                    ub = ub.max(syn.projection_norm(&subset, NORM_TOL)?);
                }
            }
            (ub, false)
        }
    };
    Ok(ProjectionConstants {
        m,
        kappa,
        ub_lower,
        ub_exact,
    })
}

/// Precomputed pairing series `Σ_n weight_n · e^{−cⁿ ε}` with its
/// normalization, evaluated in `log ε` so extreme epsilons stay exact.
#[derive(Debug, Clone)]
pub struct PairingEngine {
    /// Per-index series weights (`x_n²` or `|x_n y_n|`).
    weights: Vec<Real>,
    ln_c: Real,
    scale: Real,
}

impl PairingEngine {
    /// Lower-bound engine for the two-sided-weight multiplier family:
    /// series weights `x_n²`, scale `2π/(‖x‖·‖y‖)`.
    pub fn alternating(spec: &BasisSpec, c: Real, n_max: usize) -> Result<Self> {
        if spec.variant != WeightVariant::TwoSidedWeight {
            return Err(Error::domain(
                "the alternating pairing needs the two-sided weight variant",
            ));
        }
        if !(c > 1.0) {
            return Err(Error::domain(format!("lacunary ratio must exceed 1, got {c}")));
        }
        let mut wide = *spec;
        wide.n_basis = n_max;
        let x = test_vector_coeffs(&wide, TestVector::XHead)?;
        let weights: Vec<Real> = x.values.iter().map(|v| v.re * v.re).collect();
        let (nx2, ny2) = test_vector_norms(spec)?;
        let scale = 2.0 * std::f64::consts::PI / (nx2.sqrt() * ny2.sqrt());
        Ok(PairingEngine {
            weights,
            ln_c: c.ln(),
            scale,
        })
    }

    /// Lower-bound engine for the pure-weight family: series weights
    /// `|x_n·y_n|`, lacunary ratio fixed at 2, scale `1/(‖x‖·‖y‖)`.
    pub fn signed(spec: &BasisSpec, n_max: usize) -> Result<Self> {
        if spec.variant != WeightVariant::PureWeight {
            return Err(Error::domain(
                "the signed pairing needs the pure weight variant",
            ));
        }
        let mut wide = *spec;
        wide.n_basis = n_max;
        let x = test_vector_coeffs(&wide, TestVector::XHead)?;
        let y = test_vector_coeffs(&wide, TestVector::YTail)?;
        let weights: Vec<Real> = x
            .values
            .iter()
            .zip(&y.values)
            .map(|(a, b)| (a.re * b.re).abs())
            .collect();
        let (nx2, ny2) = test_vector_norms(spec)?;
        Ok(PairingEngine {
            weights,
            ln_c: 2f64.ln(),
            scale: 1.0 / (nx2.sqrt() * ny2.sqrt()),
        })
    }

    /// Certified lower bound at `ε = e^{ln_eps}`. Truncating the series
    /// only lowers the value, so the result is a valid bound for any
    /// truncation at least as long as the engine's.
    pub fn lower_bound_ln(&self, ln_eps: Real) -> Real {
        let mut sum = 0.0;
        for (i, &w) in self.weights.iter().enumerate() {
            let n = (i + 1) as Real;
            let ln_t = n * self.ln_c + ln_eps;
            if ln_t > 6.58 {
                // e^{−e^{6.58}} underflows; later terms vanish identically
                break;
            }
            sum += w * (-(ln_t.exp())).exp();
        }
        self.scale * sum
    }

    pub fn lower_bound(&self, eps: Real) -> Real {
        self.lower_bound_ln(eps.ln())
    }

    /// Number of series terms that are not identically zero at this ε.
    pub fn active_terms(&self, ln_eps: Real) -> usize {
        let cutoff = (6.58 - ln_eps) / self.ln_c;
        (cutoff.ceil().max(0.0) as usize).min(self.weights.len())
    }
}

fn engine_n_max(ln_eps_min: Real, ln_c: Real) -> usize {
    (((6.6 - ln_eps_min) / ln_c).ceil() as usize + 2).max(8)
}

/// Certified lower bound on `‖(g·e_ε)(A)‖` for the alternating-sign
/// multiplier over the lacunary diagonal `λ_n = cⁿ` on the two-sided
/// weighted basis: `2π·Σ_n e^{−cⁿε}x_n² / (‖x‖·‖y‖)`.
pub fn pairing_lower_bound(spec: &BasisSpec, eps: Real, c: Real) -> Result<Real> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("ε > 0 required, got {eps}")));
    }
    let engine = PairingEngine::alternating(spec, c, engine_n_max(eps.ln(), c.ln()))?;
    Ok(engine.lower_bound(eps))
}
