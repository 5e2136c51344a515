//! Operator norms with respect to (optionally weighted) ℓ² inner products,
//! by power iteration on the Gram composition `T*T`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{weighted_norm, CMatrix};
use crate::{Cplx, Real};

/// Square operator acting on a (possibly weighted) coordinate space,
/// exposing its adjoint with respect to that inner product.
pub trait WeightedOp: Sync {
    fn dim(&self) -> usize;
    fn weights(&self) -> Option<&[Real]>;
    fn apply(&self, x: &[Cplx]) -> Vec<Cplx>;
    /// Adjoint w.r.t. the weighted inner product `Σ w_i x_i conj(y_i)`.
    fn apply_adjoint(&self, x: &[Cplx]) -> Vec<Cplx>;
}

/// Dense matrix viewed as a [`WeightedOp`]; the weighted adjoint is
/// `W^{-1} A^H W`.
pub struct MatOp<'a> {
    pub mat: &'a CMatrix,
    pub weights: Option<&'a [Real]>,
}

impl WeightedOp for MatOp<'_> {
    fn dim(&self) -> usize {
        self.mat.rows()
    }

    fn weights(&self) -> Option<&[Real]> {
        self.weights
    }

    fn apply(&self, x: &[Cplx]) -> Vec<Cplx> {
        self.mat.matvec(x)
    }

    fn apply_adjoint(&self, x: &[Cplx]) -> Vec<Cplx> {
        match self.weights {
            None => self.mat.adjoint_matvec(x),
            Some(w) => {
                let wx: Vec<Cplx> = x.iter().zip(w).map(|(v, &wi)| v * wi).collect();
                let mut out = self.mat.adjoint_matvec(&wx);
                for (o, &wi) in out.iter_mut().zip(w) {
                    *o /= wi;
                }
                out
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct NormOutcome {
    pub value: Real,
    pub iterations: usize,
    pub last_rel_change: Real,
}

pub const DEFAULT_NORM_SEED: u64 = 0x5ec7_0a1b;

/// Largest singular value of `op` w.r.t. its weighted inner product, by
/// power iteration on `T*T` from a deterministically seeded start vector.
pub fn operator_norm_op(
    op: &dyn WeightedOp,
    tol: Real,
    max_iter: usize,
    seed: u64,
) -> Result<NormOutcome> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("norm tolerance must be positive, got {tol}")));
    }
    let n = op.dim();
    if n == 0 {
        return Ok(NormOutcome {
            value: 0.0,
            iterations: 0,
            last_rel_change: 0.0,
        });
    }
    let w = op.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut v: Vec<Cplx> = (0..n)
        .map(|_| Cplx::new(rng.gen::<Real>() - 0.5, rng.gen::<Real>() - 0.5))
        .collect();
    let nv = weighted_norm(&v, w);
    if nv == 0.0 {
        return Err(Error::Numeric("degenerate start vector".into()));
    }
    v.iter_mut().for_each(|x| *x /= nv);

    let mut sigma_prev = -1.0;
    let mut stable = 0;
    let mut last_change = Real::INFINITY;
    for it in 1..=max_iter {
        let u = op.apply(&v);
        let sigma = weighted_norm(&u, w);
        if sigma == 0.0 {
            return Ok(NormOutcome {
                value: 0.0,
                iterations: it,
                last_rel_change: 0.0,
            });
        }
        let mut back = op.apply_adjoint(&u);
        let nb = weighted_norm(&back, w);
        if nb == 0.0 {
            return Ok(NormOutcome {
                value: sigma,
                iterations: it,
                last_rel_change: 0.0,
            });
        }
        back.iter_mut().for_each(|x| *x /= nb);
        v = back;

        last_change = ((sigma - sigma_prev) / sigma).abs();
        if last_change <= tol {
            stable += 1;
            if stable >= 3 {
                return Ok(NormOutcome {
                    value: sigma,
                    iterations: it,
                    last_rel_change: last_change,
                });
            }
        } else {
            stable = 0;
        }
        sigma_prev = sigma;
    }
    Err(Error::Numeric(format!(
        "power iteration stalled after {max_iter} iterations (last relative change {last_change:.3e}); \
         the leading singular values may be nearly degenerate"
    )))
}

/// Largest singular value of a matrix w.r.t. the (optionally weighted)
/// inner product.
pub fn operator_norm(mat: &CMatrix, weights: Option<&[Real]>, tol: Real) -> Result<Real> {
    if let Some(w) = weights {
        if w.len() != mat.rows() || w.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::domain(
                "weights must be strictly positive and match the dimension",
            ));
        }
    }
    let op = MatOp { mat, weights };
    Ok(operator_norm_op(&op, tol, 5000, DEFAULT_NORM_SEED)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn identity_and_diagonal() {
        let id = CMatrix::identity(4);
        assert_relative_eq!(operator_norm(&id, None, 1e-12).unwrap(), 1.0, max_relative = 1e-10);
        let d = CMatrix::from_diag(&[c(3.0, 0.0), c(-4.0, 0.0)]);
        assert_relative_eq!(operator_norm(&d, None, 1e-12).unwrap(), 4.0, max_relative = 1e-10);
        // weighted inner products leave diagonal norms alone
        let w = [0.25, 7.0];
        assert_relative_eq!(
            operator_norm(&d, Some(&w), 1e-12).unwrap(),
            4.0,
            max_relative = 1e-10
        );
    }

    /// Characteristic-polynomial oracle: Faddeev-LeVerrier coefficients of
    /// the 5×5 Gram matrix, largest root by bisection, independent of the
    /// power-iteration path.
    fn charpoly_norm_oracle(a: &CMatrix) -> f64 {
        let g = a.adjoint().matmul(a);
        let n = g.rows();
        let mut coeffs = vec![1.0f64]; // monic
        let mut b = CMatrix::identity(n);
        for k in 1..=n {
            let ak = g.matmul(&b);
            let tr: Cplx = (0..n).map(|i| ak[(i, i)]).sum();
            let ck = -tr.re / k as f64;
            coeffs.push(ck);
            b = ak.clone();
            for i in 0..n {
                b[(i, i)] += Cplx::new(ck, 0.0);
            }
        }
        let p = |x: f64| -> f64 {
            let mut acc = 0.0;
            for &cf in &coeffs {
                acc = acc * x + cf;
            }
            acc
        };
        // Gershgorin upper bound for the largest eigenvalue
        let mut hi: f64 = 0.0;
        for i in 0..n {
            let row: f64 = (0..n).map(|j| g[(i, j)].norm()).sum();
            hi = hi.max(row);
        }
        hi += 1.0;
        let mut lo = hi;
        while p(lo) > 0.0 && lo > 1e-12 {
            lo *= 0.5;
        }
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if p(m) > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        (0.5 * (lo + hi)).sqrt()
    }

    #[test]
    fn random_5x5_matches_charpoly_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut rows = vec![];
        for _ in 0..5 {
            let mut row = vec![];
            for _ in 0..5 {
                row.push(c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
            }
            rows.push(row);
        }
        let a = CMatrix::from_rows(&rows);
        let oracle = charpoly_norm_oracle(&a);
        let pi = operator_norm(&a, None, 1e-12).unwrap();
        assert_relative_eq!(pi, oracle, max_relative = 1e-8);
    }

    #[test]
    fn weighted_adjoint_is_consistent() {
        use crate::linalg::weighted_dot;
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.2), c(0.3, -1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.7)],
        ]);
        let w = [0.5, 3.0];
        let op = MatOp {
            mat: &a,
            weights: Some(&w),
        };
        let x = vec![c(0.4, 0.1), c(-0.2, 0.9)];
        let y = vec![c(1.0, -1.0), c(0.5, 0.25)];
        let lhs = weighted_dot(&op.apply(&x), &y, Some(&w));
        let rhs = weighted_dot(&x, &op.apply_adjoint(&y), Some(&w));
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12);
        assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-12);
    }

    #[test]
    fn zero_operator() {
        let z = CMatrix::zeros(3, 3);
        assert_eq!(operator_norm(&z, None, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn rejects_bad_weights() {
        let id = CMatrix::identity(2);
        assert!(operator_norm(&id, Some(&[1.0, 0.0]), 1e-10).is_err());
        assert!(operator_norm(&id, Some(&[1.0]), 1e-10).is_err());
    }
}
