//! The named experiment suites.

use rayon::prelude::*;

use crate::bounds::{
    self, c1_constant, c2_constant, exp_decay_bound, expstab_bound, haase_rozendaal_eta,
    hinf_segment_bound, multiplier_upper_bound, nikolski_ub_bound, semigroup_bound, sqf_bound,
    thm1_bound, vitse_constants, vitse_theta,
};
use crate::calculus::{
    apply_spectral, build_keyhole_path, dunford_values, sectorality_constant, HoloFn,
    OperatorModel, PathVariant, QuadConfig, SectorSampling,
};
use crate::error::{Error, Result};
use crate::schauder::{
    dual_sqf_constant_samples, projection_constants, square_function_integral,
    test_vector_coeffs, BasisSpec, PairingEngine, ProjectionMode, PsiKind, SqfInput, Synthesis,
    TestVector, WeightVariant,
};
use crate::specfn::exp_int;
use crate::{Cplx, Real};

use super::{
    fit_linear, fit_log_exponent, EpsGrid, ExperimentConfig, ExperimentResult, NamedFit, Table,
    Verdict, XTransform,
};

/// Declared numerical tolerance for ordering checks between certified
/// lower bounds, grid-realized empirical norms and closed-form upper
/// bounds (grid discretization and power-iteration tolerances both sit
/// well inside it).
const ORDER_TOL: Real = 0.02;

fn verdict(name: &str, pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        name: name.into(),
        pass,
        detail: detail.into(),
    }
}

fn named_fit(name: &str, fit: super::FitResult) -> NamedFit {
    NamedFit {
        name: name.into(),
        fit,
    }
}

/// Multiplier-norm evaluation with one tolerance retry; power iteration
/// can stagnate below a tight tolerance when the leading singular values
/// nearly coincide.
fn norm_with_retry(syn: &Synthesis, idx: &[usize], diag: &[Cplx]) -> Result<Real> {
    match syn.multiplier_norm_subset(idx, diag, 1e-8) {
        Ok(v) => Ok(v),
        Err(Error::Numeric(_)) => syn.multiplier_norm_subset(idx, diag, 1e-5),
        Err(e) => Err(e),
    }
}

/// `±e^{−cⁿε}` with the alternating pair signs `(−1)^{⌊n/2⌋}`, computed in
/// log space; entries whose exponent underflows are exact zeros.
fn alternating_diag(n: usize, ln_c: Real, ln_eps: Real) -> Vec<Cplx> {
    (1..=n)
        .map(|k| {
            let ln_t = k as Real * ln_c + ln_eps;
            let mag = if ln_t > 6.58 { 0.0 } else { (-(ln_t.exp())).exp() };
            let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
            Cplx::new(sign * mag, 0.0)
        })
        .collect()
}

/// Sign-patterned `sgn(y_n)·e^{−cⁿε}` for the pure-weight family.
fn signed_diag(signs: &[Real], ln_c: Real, ln_eps: Real) -> Vec<Cplx> {
    signs
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let ln_t = (i + 1) as Real * ln_c + ln_eps;
            let mag = if ln_t > 6.58 { 0.0 } else { (-(ln_t.exp())).exp() };
            Cplx::new(s * mag, 0.0)
        })
        .collect()
}

fn active_terms(n: usize, ln_c: Real, ln_eps: Real) -> usize {
    let cutoff = (6.58 - ln_eps) / ln_c;
    (cutoff.ceil().max(1.0) as usize + 1).min(n)
}

// ---------------------------------------------------------------------------
// ei
// ---------------------------------------------------------------------------

/// Envelope and log-comparison checks for the exponential integral over
/// an x-grid.
pub fn run_ei_suite(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = cfg
        .eps
        .unwrap_or(EpsGrid {
            min: 1e-8,
            max: 50.0,
            count: 200,
        });
    let mut rows = Vec::new();
    let mut sandwich_ok = true;
    let mut eq16_ok = true;
    let mut monotone_ok = true;
    let mut prev = Real::INFINITY;
    for x in grid.values() {
        let v = exp_int(x)?;
        let (lo, hi) = crate::specfn::gautschi_window(x)?;
        let mut pass = lo < v && v < hi;
        sandwich_ok &= pass;
        if x < 0.5 {
            let ok = v < (1.0 / x).ln();
            eq16_ok &= ok;
            pass &= ok;
        }
        monotone_ok &= v < prev;
        prev = v;
        rows.push(vec![x, lo, v, hi, if pass { 1.0 } else { 0.0 }]);
    }
    Ok(ExperimentResult {
        name: "ei".into(),
        table: Table {
            columns: vec!["eps".into(), "lower".into(), "Ei".into(), "upper".into(), "pass".into()],
            rows,
        },
        fits: vec![],
        verdicts: vec![
            verdict("ei_sandwich", sandwich_ok, "envelope brackets Ei on the full grid"),
            verdict("ei_below_log", eq16_ok, "Ei(x) < log(1/x) on (0, 1/2)"),
            verdict("ei_monotone", monotone_ok, "Ei strictly decreasing"),
        ],
        unstable: false,
    })
}

// ---------------------------------------------------------------------------
// sharpness (two-sided weight, alternating multiplier)
// ---------------------------------------------------------------------------

/// Lower/empirical/upper sweep for the alternating multiplier on the
/// two-sided weighted basis; fits the lower curve's exponent in
/// `|log ε|`.
pub fn run_thm1_sharpness(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = cfg.eps.unwrap_or(EpsGrid {
        min: 1e-8,
        max: 1e-2,
        count: 33,
    });
    let delta = cfg.delta;
    let beta = cfg.beta.unwrap_or(0.5 - delta / 4.0);
    let c = cfg.c;
    let ln_c = c.ln();
    let eps_values = grid.values();
    let eps_min = eps_values[0];

    let n_eps_max = bounds::n_eps(eps_min, c)?;
    let n = if cfg.n_basis > 0 { cfg.n_basis } else { n_eps_max + 20 };
    let margin_ok = n >= n_eps_max + 20;

    let spec = BasisSpec::new(beta, WeightVariant::TwoSidedWeight, n, cfg.grid)?;
    let syn = Synthesis::new(spec)?;
    let series_len = (((6.6 - eps_min.ln()) / ln_c).ceil() as usize + 2).max(n);
    let engine = PairingEngine::alternating(&spec, c, series_len)?;
    let pc = projection_constants(
        &syn,
        ProjectionMode::Sampled {
            seed: cfg.seed,
            samples: 16,
        },
    )?;
    let m_basis = pc.m.max(1.0);
    let kappa_basis = pc.kappa.max(1.0);

    let idx: Vec<usize> = (1..=n).collect();
    let per_eps: Result<Vec<Vec<Real>>> = eps_values
        .par_iter()
        .map(|&eps| {
            let ln_eps = eps.ln();
            let lower = engine.lower_bound_ln(ln_eps);
            let n_active = active_terms(n, ln_c, ln_eps);
            let diag = alternating_diag(n_active, ln_c, ln_eps);
            let emp = norm_with_retry(&syn, &idx[..n_active], &diag)?;
            let ub_banach = multiplier_upper_bound(eps, c, m_basis, |k| k as Real * m_basis)?;
            let ub_nik = multiplier_upper_bound(eps, c, m_basis, |k| {
                nikolski_ub_bound(k, m_basis, kappa_basis)
                    .unwrap_or(Real::INFINITY)
                    .min(k as Real * m_basis)
            })?;
            Ok(vec![
                eps,
                lower,
                emp,
                ub_banach.value,
                ub_nik.value,
                ub_banach.n_eps as Real,
            ])
        })
        .collect();
    let rows = per_eps?;

    let lowers: Vec<Real> = rows.iter().map(|r| r[1]).collect();
    let emps: Vec<Real> = rows.iter().map(|r| r[2]).collect();
    let mut ordering_ok = true;
    for r in &rows {
        if !(r[1] <= r[2] * (1.0 + ORDER_TOL) && r[2] <= r[3] * (1.0 + ORDER_TOL)) {
            ordering_ok = false;
        }
    }

    let lower_fit = fit_log_exponent(&eps_values, &lowers, XTransform::LogLogInvEps)?;
    let emp_fit = fit_log_exponent(&eps_values, &emps, XTransform::LogLogInvEps)?;
    let target = 1.0 - delta;
    let exponent_ok = (lower_fit.slope - target).abs() <= 0.1;

    // truncation / discretization stability probes
    let unstable = {
        let mut worst: Real = 0.0;
        let probes = [0usize, eps_values.len() / 2, eps_values.len() - 1];
        // doubling the basis truncation (tail entries are exact zeros, so
        // this mostly guards the bookkeeping)
        let spec2 = BasisSpec::new(beta, WeightVariant::TwoSidedWeight, 2 * n, cfg.grid)?;
        let syn2 = Synthesis::new(spec2)?;
        let idx2: Vec<usize> = (1..=2 * n).collect();
        // halving the grid panel cap (the real discretization axis)
        let spec3 = BasisSpec::new(beta, WeightVariant::TwoSidedWeight, n, cfg.grid)?;
        let syn3 = Synthesis::new_with_max_freq(spec3, 2 * n)?;
        for &p in &probes {
            let eps = eps_values[p];
            let ln_eps = eps.ln();
            let base = rows[p][2];
            let n_active2 = active_terms(2 * n, ln_c, ln_eps);
            let d2 = alternating_diag(n_active2, ln_c, ln_eps);
            let v2 = norm_with_retry(&syn2, &idx2[..n_active2], &d2)?;
            let n_active = active_terms(n, ln_c, ln_eps);
            let d3 = alternating_diag(n_active, ln_c, ln_eps);
            let v3 = norm_with_retry(&syn3, &idx[..n_active], &d3)?;
            worst = worst.max(((v2 - base) / base).abs());
            worst = worst.max(((v3 - base) / base).abs());
        }
        worst >= 0.01
    };

    Ok(ExperimentResult {
        name: "sharpness".into(),
        table: Table {
            columns: vec![
                "eps".into(),
                "lower".into(),
                "empirical".into(),
                "upper_banach".into(),
                "upper_nikolski".into(),
                "n_eps".into(),
            ],
            rows,
        },
        fits: vec![
            named_fit("lower_loglog", lower_fit.clone()),
            named_fit("empirical_loglog", emp_fit),
        ],
        verdicts: vec![
            verdict(
                "lower_exponent",
                exponent_ok,
                format!(
                    "fitted {:.4} vs target {target:.4} ± 0.1 (stderr {:.2e})",
                    lower_fit.slope, lower_fit.stderr
                ),
            ),
            verdict(
                "ordering",
                ordering_ok,
                format!("lower ≤ empirical ≤ upper within {ORDER_TOL:.0e} on every row"),
            ),
            verdict(
                "truncation_margin",
                margin_ok,
                format!("N = {n} vs N_ε + 20 = {}", n_eps_max + 20),
            ),
        ],
        unstable,
    })
}

// ---------------------------------------------------------------------------
// expstab (diagonal lacunary family)
// ---------------------------------------------------------------------------

/// Dominance of the invertible-model bound and the exponential-decay
/// envelope over the test-function panel on `diag(cⁿ)`.
pub fn run_expstab_suite(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = cfg.eps.unwrap_or(EpsGrid {
        min: 1e-8,
        max: 10.0,
        count: 40,
    });
    let dim = if cfg.n_basis > 0 { cfg.n_basis.min(64) } else { 64 };
    let c = cfg.c;
    let phi = cfg.phi;
    let kappa = cfg.kappa;
    let model = OperatorModel::lacunary(c, dim)?;
    let big_r = model.dist_origin().unwrap();
    let m_est = sectorality_constant(&model, phi, &SectorSampling::default())?.value;
    let q = QuadConfig::default();

    // (label, f, sup norm on the sector, sup norm on sector ∪ B_{1/2})
    let panel: Vec<(&str, HoloFn, Real, Real)> = vec![
        ("one", HoloFn::one(), 1.0, 1.0),
        ("cayley", HoloFn::cayley(), 1.0, 3.0),
        ("invshift", HoloFn::inv_shift(), 1.0, 2.0),
    ];
    let r0 = 0.5;

    let eps_values = grid.values();
    let per_eps: Result<Vec<Vec<Real>>> = eps_values
        .par_iter()
        .map(|&eps| {
            let mut row = vec![eps];
            for (_, f, _, _) in &panel {
                let fe = f.times_exp(eps);
                let applied = apply_spectral(&model, &fe, &q)?;
                let emp = applied.values.iter().map(|v| v.norm()).fold(0.0, Real::max);
                row.push(emp);
            }
            // alternating multiplier on the orthonormal diagonal: the norm
            // is the largest modulus
            let ln_eps = eps.ln();
            let alt = alternating_diag(dim, c.ln(), ln_eps);
            let emp_alt = alt.iter().map(|v| v.norm()).fold(0.0, Real::max);
            row.push(emp_alt);
            row.push(m_est / std::f64::consts::PI * thm1_bound(eps, r0, phi)?);
            row.push(m_est / std::f64::consts::PI * expstab_bound(eps, big_r, phi, kappa)?);
            row.push(exp_decay_bound(eps, big_r, phi, kappa, m_est, None)?);
            Ok(row)
        })
        .collect();
    let rows = per_eps?;

    // dominance verdicts
    let mut bk_ok = true;
    let mut thm1_ok = true;
    let mut decay_ok = true;
    for r in &rows {
        let (bt, bk, bd) = (r[5], r[6], r[7]);
        for (i, (_, _, norm_phi, norm_omega)) in panel.iter().enumerate() {
            let emp = r[1 + i];
            bk_ok &= emp <= bk * norm_phi * (1.0 + 1e-6) + 1e-280;
            thm1_ok &= emp <= bt * norm_omega * (1.0 + 1e-6) + 1e-280;
        }
        bk_ok &= r[4] <= bk * (1.0 + 1e-6) + 1e-280; // alternating: sup |μ| = 1
        decay_ok &= r[1] <= bd * (1.0 + 1e-6) + 1e-280; // f ≡ 1 against the decay envelope
    }

    // decay slope of log‖e_ε(A)‖ against ε on the exponential tail
    let tail_start = 2.0 / (kappa * big_r * phi.cos());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in &rows {
        if r[0] >= tail_start && r[1] > 1e-250 {
            xs.push(r[0]);
            ys.push(r[1].ln());
        }
    }
    let (decay_fit, slope_ok, slope_detail) = if xs.len() >= 2 {
        let fit = fit_linear(&xs, &ys)?;
        let ok = fit.slope <= -kappa * big_r * phi.cos() + 0.02;
        let detail = format!(
            "fitted {:.4} ≤ −κR cos φ + 0.02 = {:.4}",
            fit.slope,
            -kappa * big_r * phi.cos() + 0.02
        );
        (Some(fit), ok, detail)
    } else {
        (None, true, "grid does not reach the exponential regime; slope not fitted".to_string())
    };

    Ok(ExperimentResult {
        name: "expstab".into(),
        table: Table {
            columns: vec![
                "eps".into(),
                "emp_one".into(),
                "emp_cayley".into(),
                "emp_invshift".into(),
                "emp_alt".into(),
                "bound_thm1_unit".into(),
                "bound_bk_unit".into(),
                "bound_decay".into(),
            ],
            rows,
        },
        fits: decay_fit.map(|f| named_fit("decay_slope", f)).into_iter().collect(),
        verdicts: vec![
            verdict("bk_dominance", bk_ok, "empirical ≤ (M/π)·b_κ·‖f‖ on every row"),
            verdict("thm1_dominance", thm1_ok, "empirical ≤ (M/π)·b·‖f‖ on every row"),
            verdict("decay_envelope", decay_ok, "‖e_ε(A)‖ ≤ C·e^{−εκR cos φ}"),
            verdict("decay_slope", slope_ok, slope_detail),
        ],
        unstable: false,
    })
}

// ---------------------------------------------------------------------------
// sqf (pure weight, Besselian dual)
// ---------------------------------------------------------------------------

/// Square-function suite: diagonal control, dual-side constant samples,
/// signed sharpness pairing, empirical norms and the Ei-exponent fits.
pub fn run_sqf_suite(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let grid = cfg.eps.unwrap_or(EpsGrid {
        min: 1e-120,
        max: 1e-20,
        count: 33,
    });
    let delta = cfg.delta;
    let beta = cfg.beta.unwrap_or(0.5 - delta / 3.0);
    let ln2 = 2f64.ln();
    let eps_values = grid.values();
    let eps_min = eps_values[0];

    let n_eps_max = bounds::n_eps(eps_min, 2.0)?;
    let n = if cfg.n_basis > 0 { cfg.n_basis } else { n_eps_max + 20 };
    let spec = BasisSpec::new(beta, WeightVariant::PureWeight, n, cfg.grid)?;
    let syn = Synthesis::new(spec)?;
    let series_len = (((6.6 - eps_min.ln()) / ln2).ceil() as usize + 2).max(n);
    let engine = PairingEngine::signed(&spec, series_len)?;

    // sign pattern of the dual-side coefficients drives the multiplier
    let mut sign_spec = spec;
    sign_spec.n_basis = n;
    let y = test_vector_coeffs(&sign_spec, TestVector::YTail)?;
    let signs: Vec<Real> = y.values.iter().map(|v| v.re.signum()).collect();

    let idx: Vec<usize> = (1..=n).collect();
    let per_eps: Result<Vec<Vec<Real>>> = eps_values
        .par_iter()
        .map(|&eps| {
            let ln_eps = eps.ln();
            let lower = engine.lower_bound_ln(ln_eps);
            let n_active = active_terms(n, ln2, ln_eps);
            let diag = signed_diag(&signs[..n_active], ln2, ln_eps);
            let emp = norm_with_retry(&syn, &idx[..n_active], &diag)?;
            let ei = exp_int(eps)?;
            Ok(vec![eps, lower, emp, ei.powf(0.5 - delta / 6.0)])
        })
        .collect();
    let rows = per_eps?;

    // diagonal orthonormal control: K_ψ² = 1/2 exactly
    let diag_model = OperatorModel::lacunary(2.0, 12)?;
    let coeffs: Vec<Cplx> = (0..12).map(|k| Cplx::new(1.0 / (1.0 + k as Real), 0.2)).collect();
    let sq = square_function_integral(
        &diag_model,
        PsiKind::SqrtZExp,
        SqfInput::Coeffs(&coeffs),
        &QuadConfig::default(),
    )?;
    let norm2: Real = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let kpsi_diag_ok = (sq / norm2 - 0.5).abs() <= 1e-10;

    // dual-side constant samples at a moderate truncation (the constant
    // is ε-free; 2ⁿ must stay in range)
    let n_small = n.clamp(8, 24);
    let mut small = spec;
    small.n_basis = n_small;
    let syn_small = Synthesis::new(small)?;
    let lambda_small: Vec<Cplx> = (1..=n_small).map(|k| Cplx::new(2f64.powi(k as i32), 0.0)).collect();
    let kpsi_samples =
        dual_sqf_constant_samples(&syn_small, &lambda_small, PsiKind::SqrtZExp, 6, cfg.seed)?;
    let kpsi2_max = kpsi_samples.iter().copied().fold(0.0, Real::max);
    let kpsi_finite_ok = kpsi2_max.is_finite() && kpsi2_max > 0.0;

    // theory overlay at the sampled constants (calibration K = 1)
    let m_small = sectorality_constant(
        &crate::schauder::multiplier_operator_with(syn_small.clone(), lambda_small.clone())?,
        cfg.phi,
        &SectorSampling {
            radial_points: 24,
            levels: 1,
        },
    )?
    .value;
    let sqf_theory_ref = sqf_bound(
        eps_values[eps_values.len() / 2],
        2.0,
        cfg.phi,
        cfg.kappa,
        kpsi2_max.sqrt(),
        m_small.max(1.0),
        None,
    )?;

    let lowers: Vec<Real> = rows.iter().map(|r| r[1]).collect();
    let emps: Vec<Real> = rows.iter().map(|r| r[2]).collect();
    let lower_fit = fit_log_exponent(&eps_values, &lowers, XTransform::LogLogInvEps)?;
    let upper_fit = fit_log_exponent(&eps_values, &emps, XTransform::LogEi)?;
    let target_lower = 0.5 - delta;
    let target_upper = 0.5 - delta / 6.0 + 0.05;
    let lower_ok = (lower_fit.slope - target_lower).abs() <= 0.1;
    let upper_ok = upper_fit.slope <= target_upper;
    let ordering_ok = rows.iter().all(|r| r[1] <= r[2] * (1.0 + ORDER_TOL));

    // discretization stability probe: refine the grid cap
    let unstable = {
        let syn_fine = Synthesis::new_with_max_freq(spec, 2 * n)?;
        let mut worst: Real = 0.0;
        for &p in &[0usize, eps_values.len() - 1] {
            let ln_eps = eps_values[p].ln();
            let n_active = active_terms(n, ln2, ln_eps);
            let diag = signed_diag(&signs[..n_active], ln2, ln_eps);
            let v = norm_with_retry(&syn_fine, &idx[..n_active], &diag)?;
            worst = worst.max(((v - rows[p][2]) / rows[p][2]).abs());
        }
        worst >= 0.01
    };

    Ok(ExperimentResult {
        name: "sqf".into(),
        table: Table {
            columns: vec![
                "eps".into(),
                "lower".into(),
                "empirical".into(),
                "ei_shape".into(),
            ],
            rows,
        },
        fits: vec![
            named_fit("lower_loglog", lower_fit.clone()),
            named_fit("empirical_log_ei", upper_fit.clone()),
        ],
        verdicts: vec![
            verdict(
                "kpsi_diagonal",
                kpsi_diag_ok,
                format!("diagonal K_ψ² = {:.12} vs 1/2", sq / norm2),
            ),
            verdict(
                "kpsi_dual_finite",
                kpsi_finite_ok,
                format!("max sampled K_ψ² = {kpsi2_max:.4} (theory ref {sqf_theory_ref:.4})"),
            ),
            verdict(
                "lower_exponent",
                lower_ok,
                format!(
                    "fitted {:.4} vs target {target_lower:.4} ± 0.1 (stderr {:.2e})",
                    lower_fit.slope, lower_fit.stderr
                ),
            ),
            verdict(
                "upper_exponent",
                upper_ok,
                format!("fitted {:.4} ≤ {target_upper:.4} in log Ei", upper_fit.slope),
            ),
            verdict("ordering", ordering_ok, "lower ≤ empirical on every row"),
        ],
        unstable,
    })
}

// ---------------------------------------------------------------------------
// vitse (constant comparisons)
// ---------------------------------------------------------------------------

/// Constant tables over an M-grid: the two-term segment bound against the
/// Hille-Phillips-route constants, the semigroup bound, the per-piece
/// Besov constant, and the half-plane comparison curves.
pub fn run_vitse_comparison(_cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let count = 50;
    let ms: Vec<Real> = (0..count)
        .map(|i| 10f64.powf(4.0 * i as Real / (count - 1) as Real))
        .collect();
    let (eps_ref, delta_ref) = (1e-3, 1.0);
    let mut rows = Vec::new();
    let mut dominance_ok = true;
    for &m in &ms {
        let b = hinf_segment_bound(1.0, std::f64::consts::E, m)?;
        let (v1, v2, v3) = vitse_constants(m);
        dominance_ok &= b.big_c1 <= v1 && b.big_c2 <= v2 && b.big_c3 <= v3;
        let theta = vitse_theta(m)?;
        let eta = haase_rozendaal_eta(delta_ref, eps_ref, 1.0)?;
        let ours = 2.0 * m / std::f64::consts::PI * thm1_bound(eps_ref, delta_ref, theta)?;
        rows.push(vec![
            m,
            b.big_c1,
            v1,
            b.big_c2,
            v2,
            b.big_c3,
            v3,
            semigroup_bound(m)?,
            30.0 * m * m / std::f64::consts::PI,
            crate::bounds::besov_piece_bound(m)?,
            theta,
            eta,
            ours,
        ]);
    }

    let c1: Real = c1_constant();
    let c2: Real = c2_constant();
    let c1_ok = (c1 - 3.42).abs() <= 0.01;
    let c2_ok = (c2 - 0.78).abs() <= 0.01;

    // shape of the M-dependence: log C₃ against log(M(log M + 1)) on the
    // asymptotic half of the grid
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for r in &rows {
        if r[0] >= 100.0 {
            xs.push((r[0] * (r[0].ln() + 1.0)).ln());
            ys.push(r[5].ln());
        }
    }
    let shape_fit = fit_linear(&xs, &ys)?;
    let shape_ok = (shape_fit.slope - 1.0).abs() <= 0.05;

    Ok(ExperimentResult {
        name: "vitse".into(),
        table: Table {
            columns: vec![
                "M".into(),
                "C1".into(),
                "C1_hp".into(),
                "C2".into(),
                "C2_hp".into(),
                "C3".into(),
                "C3_hp".into(),
                "semigroup".into(),
                "semigroup_hp".into(),
                "besov_piece".into(),
                "theta".into(),
                "eta_ref".into(),
                "ours_ref".into(),
            ],
            rows,
        },
        fits: vec![named_fit("c3_shape", shape_fit.clone())],
        verdicts: vec![
            verdict("c1_value", c1_ok, format!("c1 = {c1:.6} vs 3.42 ± 0.01")),
            verdict("c2_value", c2_ok, format!("c2 = {c2:.6} vs 0.78 ± 0.01")),
            verdict("dominance", dominance_ok, "C_i ≤ C̃_i on the full M grid"),
            verdict(
                "m_logm_shape",
                shape_ok,
                format!("log C3 vs log(M(log M+1)) slope {:.4} vs 1 ± 0.05", shape_fit.slope),
            ),
        ],
        unstable: false,
    })
}

// ---------------------------------------------------------------------------
// quadcheck (oracle battery)
// ---------------------------------------------------------------------------

struct QuadCase {
    dim: usize,
    f_id: usize,
    variant_id: usize,
    max_rel_alive: Real,
    max_abs_dead: Real,
    pass: bool,
}

const ALIVE_THRESHOLD: Real = 1e-12;
const ORACLE_RTOL: Real = 1e-8;
const SHARED_PATH_RTOL: Real = 1e-6;

fn admissible_variants(f: &HoloFn) -> Vec<(usize, PathVariant)> {
    let mut out = Vec::new();
    if f.pow_zero > 0.0 {
        out.push((0, PathVariant::SectorBoundary));
    }
    if f.holo_radius > 0.0 {
        out.push((1, PathVariant::BallUnionSector));
    }
    out.push((2, PathVariant::BallComplementSector));
    out.push((3, PathVariant::ChordKeyhole));
    out
}

/// Diagonal-oracle battery over the lacunary family: entrywise `f(λ)` to
/// relative 1e-8 on alive entries (per-eigenvalue contours, where the
/// quadrature noise stays at the scale of each answer), path independence
/// across admissible shared-path variants within their combined error
/// estimates, homomorphism and panel-refinement order checks. Shared-path
/// entrywise errors are recorded against a 1e-6 sanity threshold: entries
/// ten-plus orders below the result scale cancel too heavily on a shared
/// contour for 1e-8 to be meaningful there.
pub fn run_quadrature_validation(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let q = QuadConfig::default();
    let max_dim = if cfg.n_basis > 0 { cfg.n_basis.min(64) } else { 64 };
    let dims: Vec<usize> = (1..=max_dim).collect();

    let cases: Result<Vec<Vec<QuadCase>>> = dims
        .par_iter()
        .map(|&dim| {
            let model = OperatorModel::lacunary(2.0, dim)?;
            let spectrum = model.spectrum().unwrap().to_vec();
            let lam_max = spectrum.last().unwrap().re;
            let eps_dim = 1.0 / lam_max;
            let fns: Vec<HoloFn> = vec![
                HoloFn::exp_eps(eps_dim),
                HoloFn::rational_decay(),
                HoloFn::inv_shift(),
                HoloFn::sqrt_exp(),
            ];
            let mut out = Vec::new();
            for (f_id, f) in fns.iter().enumerate() {
                let exact: Vec<Cplx> = spectrum.iter().map(|&l| f.eval(l)).collect();
                let scale = exact.iter().map(|v| v.norm()).fold(0.0, Real::max);

                // the 1e-8 entrywise oracle: one contour per eigenvalue
                let per_eig = apply_spectral(&model, f, &q)?;
                let mut oracle_rel: Real = 0.0;
                let mut oracle_dead: Real = 0.0;
                for (v, e) in per_eig.values.iter().zip(&exact) {
                    if e.norm() >= ALIVE_THRESHOLD * scale {
                        oracle_rel = oracle_rel.max((v - e).norm() / e.norm());
                    } else {
                        oracle_dead = oracle_dead.max(v.norm());
                    }
                }
                out.push(QuadCase {
                    dim,
                    f_id,
                    variant_id: 10,
                    max_rel_alive: oracle_rel,
                    max_abs_dead: oracle_dead,
                    pass: oracle_rel <= ORACLE_RTOL && oracle_dead <= ALIVE_THRESHOLD * scale,
                });

                let mut variant_results: Vec<(usize, Vec<Cplx>, Vec<Real>)> = Vec::new();
                for (variant_id, variant) in admissible_variants(f) {
                    // ball-union detours must stay inside the holomorphy
                    // ball; the others hug the spectral gap at the origin
                    let r = match variant {
                        PathVariant::SectorBoundary => 0.0,
                        PathVariant::BallUnionSector => {
                            let mut r = if f.holo_radius.is_finite() {
                                f.holo_radius / 2.0
                            } else {
                                1.0
                            };
                            if f.rate > 0.0 {
                                r = r.min(1.0 / (2.0 * f.rate));
                            }
                            r.min(1.0)
                        }
                        _ => 2.0 * (1.0 - 2.0f64.powi(-10)),
                    };
                    let path = build_keyhole_path(std::f64::consts::FRAC_PI_4, r, variant)?;
                    let d = dunford_values(&model, f, &path, &q)?;
                    let mut max_rel_alive: Real = 0.0;
                    let mut max_abs_dead: Real = 0.0;
                    for (v, e) in d.values.iter().zip(&exact) {
                        if e.norm() >= ALIVE_THRESHOLD * scale {
                            max_rel_alive = max_rel_alive.max((v - e).norm() / e.norm());
                        } else {
                            max_abs_dead = max_abs_dead.max(v.norm());
                        }
                    }
                    let pass = max_rel_alive <= SHARED_PATH_RTOL
                        && max_abs_dead <= ALIVE_THRESHOLD * scale;
                    out.push(QuadCase {
                        dim,
                        f_id,
                        variant_id,
                        max_rel_alive,
                        max_abs_dead,
                        pass,
                    });
                    variant_results.push((variant_id, d.values, d.errors));
                }
                // path independence within combined error estimates
                for i in 0..variant_results.len() {
                    for j in i + 1..variant_results.len() {
                        let (_, va, ea) = &variant_results[i];
                        let (_, vb, eb) = &variant_results[j];
                        for k in 0..va.len() {
                            let tol = 10.0 * (ea[k] + eb[k]) + 1e-13 * scale;
                            if (va[k] - vb[k]).norm() > tol {
                                out.push(QuadCase {
                                    dim,
                                    f_id,
                                    variant_id: 99,
                                    max_rel_alive: (va[k] - vb[k]).norm(),
                                    max_abs_dead: tol,
                                    pass: false,
                                });
                            }
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let flat: Vec<QuadCase> = cases?.into_iter().flatten().collect();

    // homomorphism on a product pair
    let model = OperatorModel::lacunary(2.0, 8)?;
    let f = HoloFn::rational_decay();
    let g = HoloFn::exp_eps(0.25);
    let fg = f.times_exp(0.25);
    let pf = apply_spectral(&model, &f, &q)?;
    let pg = apply_spectral(&model, &g, &q)?;
    let pfg = apply_spectral(&model, &fg, &q)?;
    let prods: Vec<Cplx> = (0..8).map(|k| pf.values[k] * pg.values[k]).collect();
    let prod_scale = prods.iter().map(|v| v.norm()).fold(0.0, Real::max);
    let mut hom_dev: Real = 0.0;
    for k in 0..8 {
        // entries below the alive band are compared absolutely
        let denom = prods[k].norm().max(ALIVE_THRESHOLD * prod_scale);
        hom_dev = hom_dev.max((prods[k] - pfg.values[k]).norm() / denom);
    }
    let hom_ok = hom_dev <= 1e-8;

    // refinement order on a fixed analytic piece: GL15 at h vs h/2 on a
    // chord integral of e^{-z}/(z-4)
    let order_p = {
        let rule = crate::calculus::quad::gauss_legendre(15);
        let seg = |a: Real, b: Real, panels: usize| -> Cplx {
            let from = Cplx::new(1.0, -3.0);
            let to = Cplx::new(1.0, 3.0);
            let dir = to - from;
            let mut acc = Cplx::new(0.0, 0.0);
            for p in 0..panels {
                let pa = a + (b - a) * p as Real / panels as Real;
                let pb = a + (b - a) * (p + 1) as Real / panels as Real;
                let mid = 0.5 * (pa + pb);
                let hw = 0.5 * (pb - pa);
                for (&x, &w) in rule.0.iter().zip(rule.1.iter()) {
                    let z = from + dir * (mid + hw * x);
                    acc += (-z).exp() / (z - 4.0) * dir * (w * hw);
                }
            }
            acc
        };
        let reference = seg(0.0, 1.0, 64);
        let e1 = (seg(0.0, 1.0, 1) - reference).norm();
        let e2 = (seg(0.0, 1.0, 2) - reference).norm();
        if e2 > 0.0 { (e1 / e2).log2() } else { 30.0 }
    };
    let order_ok = order_p >= 10.0;

    let battery_ok = flat.iter().filter(|c| c.variant_id == 10).all(|c| c.pass);
    let shared_ok = flat.iter().filter(|c| c.variant_id < 10).all(|c| c.pass);
    let indep_ok = !flat.iter().any(|c| c.variant_id == 99);
    let worst = flat
        .iter()
        .filter(|c| c.variant_id == 10)
        .map(|c| c.max_rel_alive)
        .fold(0.0, Real::max);
    let rows: Vec<Vec<Real>> = flat
        .iter()
        .map(|c| {
            vec![
                c.dim as Real,
                c.f_id as Real,
                c.variant_id as Real,
                c.max_rel_alive,
                c.max_abs_dead,
                if c.pass { 1.0 } else { 0.0 },
            ]
        })
        .collect();

    Ok(ExperimentResult {
        name: "quadcheck".into(),
        table: Table {
            columns: vec![
                "dim".into(),
                "f_id".into(),
                "variant_id".into(),
                "max_rel_alive".into(),
                "max_abs_dead".into(),
                "pass".into(),
            ],
            rows,
        },
        fits: vec![],
        verdicts: vec![
            verdict(
                "diagonal_oracle",
                battery_ok,
                format!("worst alive relative error {worst:.3e} ≤ {ORACLE_RTOL:.0e}"),
            ),
            verdict(
                "shared_path_sanity",
                shared_ok,
                format!("shared-variant batteries within {SHARED_PATH_RTOL:.0e}"),
            ),
            verdict(
                "path_independence",
                indep_ok,
                "admissible variants agree within combined error estimates",
            ),
            verdict(
                "homomorphism",
                hom_ok,
                format!("max product deviation {hom_dev:.3e}"),
            ),
            verdict(
                "refinement_order",
                order_ok,
                format!("observed order p = {order_p:.1} ≥ 10"),
            ),
        ],
        unstable: false,
    })
}
