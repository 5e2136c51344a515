//! Small dense complex-matrix kernels: storage, products, LU solve with
//! partial pivoting, and compensated accumulation. Dimensions here are at
//! most a few thousand, so everything is straightforward row-major code.

use crate::error::{Error, Result};
use crate::{Cplx, Real};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Cplx>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Cplx::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Cplx::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[Cplx]) -> Self {
        let mut m = CMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Cplx>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        CMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Cplx] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Cplx] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[Cplx] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[Cplx]) -> Vec<Cplx> {
        assert_eq!(x.len(), self.cols);
        let mut out = vec![Cplx::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc = Cplx::new(0.0, 0.0);
            for (a, b) in row.iter().zip(x) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// `A^H x`.
    pub fn adjoint_matvec(&self, x: &[Cplx]) -> Vec<Cplx> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Cplx::new(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            let row = self.row(i);
            let xi = x[i];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Cplx::new(0.0, 0.0) {
                    continue;
                }
                let orow = other.row(k);
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut out = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&mut self, s: Cplx) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn add_assign(&mut self, other: &CMatrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// Entrywise maximum modulus.
    pub fn max_abs(&self) -> Real {
        self.data.iter().map(|z| z.norm()).fold(0.0, Real::max)
    }

    /// Solve `self · X = B` by LU with partial pivoting (consumes a copy).
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        if !self.is_square() {
            return Err(Error::Numeric("solve requires a square matrix".into()));
        }
        let n = self.rows;
        assert_eq!(b.rows, n);
        let mut lu = self.clone();
        let mut x = b.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for k in 0..n {
            // pivot search
            let (mut pmax, mut prow) = (0.0, k);
            for i in k..n {
                let a = lu[(i, k)].norm();
                if a > pmax {
                    pmax = a;
                    prow = i;
                }
            }
            if pmax < 1e-300 {
                return Err(Error::Numeric(format!("singular matrix in LU at column {k}")));
            }
            if prow != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, prow * n + j);
                }
                for j in 0..x.cols {
                    x.data.swap(k * x.cols + j, prow * x.cols + j);
                }
                piv.swap(k, prow);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= f * v;
                }
                for j in 0..x.cols {
                    let v = x[(k, j)];
                    x[(i, j)] -= f * v;
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let pivot = lu[(k, k)];
            for j in 0..x.cols {
                let mut acc = x[(k, j)];
                for i in k + 1..n {
                    acc -= lu[(k, i)] * x[(i, j)];
                }
                x[(k, j)] = acc / pivot;
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.rows))
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Cplx;
    fn index(&self, (i, j): (usize, usize)) -> &Cplx {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx {
        &mut self.data[i * self.cols + j]
    }
}

/// Neumaier-compensated complex accumulator. The contour quadrature sums
/// many near-cancelling panel values; plain summation would contribute
/// its own noise floor on top of the analytic cancellation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum_re: Real,
    c_re: Real,
    sum_im: Real,
    c_im: Real,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Cplx) {
        fn neumaier(sum: &mut Real, comp: &mut Real, v: Real) {
            let t = *sum + v;
            if sum.abs() >= v.abs() {
                *comp += (*sum - t) + v;
            } else {
                *comp += (v - t) + *sum;
            }
            *sum = t;
        }
        neumaier(&mut self.sum_re, &mut self.c_re, z.re);
        neumaier(&mut self.sum_im, &mut self.c_im, z.im);
    }

    #[inline]
    pub fn value(&self) -> Cplx {
        Cplx::new(self.sum_re + self.c_re, self.sum_im + self.c_im)
    }
}

/// Weighted inner product `Σ w_i x_i conj(y_i)`; `weights = None` is the
/// Euclidean one.
pub fn weighted_dot(x: &[Cplx], y: &[Cplx], weights: Option<&[Real]>) -> Cplx {
    let mut acc = CompensatedSum::new();
    match weights {
        Some(w) => {
            for ((a, b), wi) in x.iter().zip(y).zip(w) {
                acc.add(a * b.conj() * *wi);
            }
        }
        None => {
            for (a, b) in x.iter().zip(y) {
                acc.add(a * b.conj());
            }
        }
    }
    acc.value()
}

pub fn weighted_norm(x: &[Cplx], weights: Option<&[Real]>) -> Real {
    weighted_dot(x, x, weights).re.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Cplx {
        Cplx::new(re, im)
    }

    #[test]
    fn lu_solves_known_inverse() {
        // [[1,10],[0,2]] inverse is [[1,-5],[0,1/2]]
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(10.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]);
        let inv = a.inverse().unwrap();
        assert_relative_eq!(inv[(0, 0)].re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(inv[(0, 1)].re, -5.0, max_relative = 1e-14);
        assert_relative_eq!(inv[(1, 1)].re, 0.5, max_relative = 1e-14);
        let prod = a.matmul(&inv);
        let mut id = prod.clone();
        id.add_assign(&{
            let mut m = CMatrix::identity(2);
            m.scale(c(-1.0, 0.0));
            m
        });
        assert!(id.max_abs() < 1e-14);
    }

    #[test]
    fn lu_complex_roundtrip() {
        let a = CMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(-1.0, 0.5), c(0.0, 3.0)],
            vec![c(0.0, -1.0), c(4.0, 0.0), c(1.0, 1.0)],
            vec![c(5.0, 2.0), c(0.3, 0.0), c(-2.0, 1.0)],
        ]);
        let x = CMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-3.0, 0.0)], vec![c(0.5, -0.5)]]);
        let b = a.matmul(&x);
        let solved = a.solve(&b).unwrap();
        for i in 0..3 {
            assert_relative_eq!(solved[(i, 0)].re, x[(i, 0)].re, max_relative = 1e-12);
            assert_relative_eq!(solved[(i, 0)].im, x[(i, 0)].im, epsilon = 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = CMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]]);
        assert!(a.inverse().is_err());
    }

    #[test]
    fn adjoint_matvec_consistent() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(0.0, 2.0)],
            vec![c(3.0, 0.0), c(-1.0, 0.5)],
        ]);
        let x = vec![c(0.7, -0.2), c(1.5, 0.4)];
        let y = vec![c(-0.3, 0.9), c(2.0, 0.0)];
        // <Ax, y> = <x, A^H y>
        let lhs = weighted_dot(&a.matvec(&x), &y, None);
        let rhs = weighted_dot(&x, &a.adjoint_matvec(&y), None);
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-14);
        assert_relative_eq!(lhs.im, rhs.im, max_relative = 1e-14);
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut cs = CompensatedSum::new();
        let vals = [1e16, 1.0, -1e16, 1.0];
        for &v in &vals {
            cs.add(c(v, 0.0));
        }
        assert_relative_eq!(cs.value().re, 2.0, max_relative = 1e-15);
    }
}
