//! Square-function integrals `∫_0^∞ ‖ψ(tA)x‖² dt/t`, the Besselian
//! coefficient inequalities of the pure-weight basis, and the signed
//! sharpness pairing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{OperatorModel, QuadConfig};
use crate::error::{Error, Result};
use crate::{Cplx, Real};

use super::constants::PairingEngine;
use super::quadgrid::adaptive_gl;
use super::synthesis::Synthesis;
use super::{BasisSpec, WeightVariant};

/// The auxiliary functions used in square-function estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiKind {
    /// `ψ(z) = √z·e^{−z}`.
    SqrtZExp,
    /// `ψ(z) = z·e^{−z}`.
    ZExp,
}

impl PsiKind {
    #[inline]
    pub fn eval(self, z: Cplx) -> Cplx {
        match self {
            PsiKind::SqrtZExp => z.sqrt() * (-z).exp(),
            PsiKind::ZExp => z * (-z).exp(),
        }
    }

    /// Vanishing order at zero.
    #[inline]
    fn order(self) -> Real {
        match self {
            PsiKind::SqrtZExp => 0.5,
            PsiKind::ZExp => 1.0,
        }
    }

    /// Per-mode closed form `∫_0^∞ |ψ(tλ)|² dt/t` for `Re λ > 0`:
    /// `Γ(2s)·(|λ|/(2·Re λ))^{2s}` with `s` the vanishing order
    /// (Γ(1) = Γ(2) = 1 for the two kinds here).
    pub fn mode_integral(self, lambda: Cplx) -> Result<Real> {
        if !(lambda.re > 0.0) {
            return Err(Error::domain(format!(
                "square-function integral diverges for Re λ ≤ 0, got {lambda}"
            )));
        }
        let ratio = lambda.norm() / (2.0 * lambda.re);
        Ok(match self {
            PsiKind::SqrtZExp => ratio,
            PsiKind::ZExp => ratio * ratio,
        })
    }
}

/// Input vector for the square-function integral: coefficients in the
/// model's eigenbasis or a grid function.
#[derive(Debug, Clone, Copy)]
pub enum SqfInput<'a> {
    Coeffs(&'a [Cplx]),
    GridFn(&'a [Cplx]),
}

/// `∫_0^∞ ‖ψ(tA)x‖² dt/t`.
///
/// Diagonal models with coefficient input use the exact per-mode closed
/// form; Schauder models evaluate the Gram quadratic form along a
/// log-substituted adaptive quadrature in `t`.
pub fn square_function_integral(
    model: &OperatorModel,
    psi: PsiKind,
    x: SqfInput<'_>,
    q: &QuadConfig,
) -> Result<Real> {
    match (model, x) {
        (OperatorModel::DiagonalOnb { eigenvalues }, SqfInput::Coeffs(c)) => {
            if c.len() != eigenvalues.len() {
                return Err(Error::domain("coefficient length mismatch"));
            }
            let mut total = 0.0;
            for (&l, &cv) in eigenvalues.iter().zip(c) {
                total += cv.norm_sqr() * psi.mode_integral(l)?;
            }
            Ok(total)
        }
        (
            OperatorModel::SchauderMultiplier {
                synthesis,
                multiplier,
            },
            input,
        ) => {
            let coeffs = match input {
                SqfInput::Coeffs(c) => c.to_vec(),
                SqfInput::GridFn(g) => synthesis.analysis(g),
            };
            schauder_sqf(synthesis, multiplier, &coeffs, psi, q, GramSide::Primal)
        }
        (OperatorModel::DiagonalOnb { .. }, SqfInput::GridFn(_)) => Err(Error::domain(
            "diagonal models take coefficient input",
        )),
        (OperatorModel::Dense { .. }, _) => Err(Error::domain(
            "square-function integrals need a spectral representation",
        )),
    }
}

enum GramSide {
    Primal,
    Dual,
}

fn schauder_sqf(
    syn: &Synthesis,
    lambda: &[Cplx],
    coeffs: &[Cplx],
    psi: PsiKind,
    _q: &QuadConfig,
    side: GramSide,
) -> Result<Real> {
    if lambda.iter().any(|l| !(l.re > 0.0)) {
        return Err(Error::domain(
            "square-function integral diverges: spectrum touches the closed left half-plane",
        ));
    }
    let idx: Vec<usize> = (1..=syn.spec.n_basis).collect();
    let gram = match side {
        GramSide::Primal => syn.gram_primal(&idx),
        GramSide::Dual => syn.gram_dual(&idx),
    };
    let n = idx.len();
    let quad_form = |v: &[Cplx]| -> Real {
        let mut acc = 0.0;
        for i in 0..n {
            let row = &gram[i * n..(i + 1) * n];
            let mut s = Cplx::new(0.0, 0.0);
            for (g, c) in row.iter().zip(v) {
                s += c * g;
            }
            acc += (v[i].conj() * s).re;
        }
        acc.max(0.0)
    };

    let s = psi.order();
    let min_re = lambda.iter().map(|l| l.re).fold(Real::MAX, Real::min);
    let max_abs = lambda.iter().map(|l| l.norm()).fold(0.0, Real::max);

    // leading small-t coefficient: ψ(tλ) ≈ (tλ)^s ⇒ F(t) ≈ t^{2s}·B
    let lead: Vec<Cplx> = lambda
        .iter()
        .zip(coeffs)
        .map(|(l, c)| l.powf(s) * c)
        .collect();
    let b_small = quad_form(&lead);
    let tol = 1e-11 * b_small.max(1e-30);
    let t_lo = ((tol * 2.0 * s / b_small.max(1e-300)).powf(1.0 / (2.0 * s)) / max_abs)
        .min(1e-3 / max_abs);
    let t_hi = 740.0 / min_re;

    let f_of_u = |u: Real| -> Real {
        let t = u.exp();
        let v: Vec<Cplx> = lambda
            .iter()
            .zip(coeffs)
            .map(|(l, c)| psi.eval(l * t) * c)
            .collect();
        quad_form(&v)
    };
    let (main, _err) = adaptive_gl(&f_of_u, t_lo.ln(), t_hi.ln(), 1e-10 * b_small.max(1e-12))?;
    let small_piece = b_small * t_lo.powf(2.0 * s) / (2.0 * s);
    Ok(main.max(0.0) + small_piece)
}

/// Samples of the dual-side square-function constant `K_ψ²` over seeded
/// random grid vectors: the adjoint multiplier acts diagonally on the
/// dual basis, so each sample is a Gram quadratic form in the dual table.
pub fn dual_sqf_constant_samples(
    syn: &Synthesis,
    lambda: &[Cplx],
    psi: PsiKind,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<Real>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = syn.grid.len();
    let mut out = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let y: Vec<Cplx> = (0..g)
            .map(|_| Cplx::new(rng.gen::<Real>() - 0.5, rng.gen::<Real>() - 0.5))
            .collect();
        let norm2 = syn.grid_norm(&y).powi(2);
        if norm2 == 0.0 {
            continue;
        }
        let coeffs = syn.dual_analysis(&y);
        let v = schauder_sqf(syn, lambda, &coeffs, psi, &QuadConfig::default(), GramSide::Dual)?;
        out.push(v / norm2);
    }
    Ok(out)
}

/// `ℓ^q` norm of the sequence `(n^{expo})_{n≥1}`, requiring `q·expo < −1`;
/// finite head plus the integral tail bound.
pub fn lq_norm_power_seq(expo: Real, q: Real) -> Result<Real> {
    if !(q > 0.0) || !(q * expo < -1.0) {
        return Err(Error::domain(format!(
            "ℓ^q norm of n^{expo} diverges for q = {q}"
        )));
    }
    let head: Real = (1..=20_000u64).map(|n| (n as Real).powf(q * expo)).sum();
    let tail = 20_000f64.powf(q * expo + 1.0) / (-(q * expo) - 1.0);
    Ok((head + tail).powf(1.0 / q))
}

/// `K_β = ‖(n^{β−1})‖_q` with `1/q = (3−2β)/4`.
pub fn k_beta(beta: Real) -> Result<Real> {
    lq_norm_power_seq(beta - 1.0, 4.0 / (3.0 - 2.0 * beta))
}

/// Young-route coefficient inequality of the pure-weight basis:
/// returns `(‖(x_n)‖_r, ‖x‖_{L²}·‖(n^{−1+β})‖_q)` with `1/q = 1/2 + 1/r`;
/// admissible for `r > 2/(1−2β)`.
pub fn besselian_coeff_check(syn: &Synthesis, x: &[Cplx], r: Real) -> Result<(Real, Real)> {
    if syn.spec.variant != WeightVariant::PureWeight {
        return Err(Error::domain("the Young inequality check is for the pure weight"));
    }
    let beta = syn.spec.beta;
    if !(r > 2.0 / (1.0 - 2.0 * beta)) {
        return Err(Error::domain(format!(
            "r = {r} is not admissible; need r > {}",
            2.0 / (1.0 - 2.0 * beta)
        )));
    }
    let coeffs = syn.analysis(x);
    let lhs = coeffs
        .iter()
        .map(|c| c.norm().powf(r))
        .sum::<Real>()
        .powf(1.0 / r);
    let q = 1.0 / (0.5 + 1.0 / r);
    let rhs = syn.grid_norm(x) * lq_norm_power_seq(beta - 1.0, q)?;
    Ok((lhs, rhs))
}

/// Certified lower bound for `‖(g·e_ε)(A)‖` on the pure-weight basis with
/// `λ_n = 2ⁿ`: `Σ_n e^{−2ⁿε}|x_n y_n| / (‖x‖·‖y‖)`.
pub fn sqf_sharpness_pairing(spec: &BasisSpec, eps: Real) -> Result<Real> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("ε > 0 required, got {eps}")));
    }
    let n_max = (((6.6 - eps.ln()) / 2f64.ln()).ceil() as usize + 2).max(8);
    let engine = PairingEngine::signed(spec, n_max)?;
    Ok(engine.lower_bound(eps))
}
