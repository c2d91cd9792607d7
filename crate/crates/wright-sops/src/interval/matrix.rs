use nalgebra::DMatrix;

use super::Interval;
use super::round::{add_up, mul_up};
use crate::error::{Error, Result};

/// Dense row-major matrix of intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_point(p: &DMatrix<f64>) -> Self {
        let mut m = Self::zeros(p.nrows(), p.ncols());
        for i in 0..p.nrows() {
            for j in 0..p.ncols() {
                m[(i, j)] = Interval::point(p[(i, j)]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].mid())
    }

    pub fn mul_vec(&self, v: &[Interval]) -> Vec<Interval> {
        assert_eq!(v.len(), self.cols, "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter().zip(v).map(|(&a, &x)| a * x).sum()
            })
            .collect()
    }

    pub fn mul(&self, other: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntervalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Interval::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Product with a point matrix on the left.
    pub fn left_mul_point(p: &DMatrix<f64>, m: &IntervalMatrix) -> IntervalMatrix {
        IntervalMatrix::from_point(p).mul(m)
    }

    pub fn sub(&self, other: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &IntervalMatrix) -> IntervalMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    /// Upper bound on the induced infinity norm.
    pub fn norm_inf_upper(&self) -> f64 {
        (0..self.rows).map(|i| (0..self.cols).fold(0.0, |acc, j| add_up(acc, self[(i, j)].mag()))).fold(0.0, f64::max)
    }

    /// Every entry contains the matching entry of `p`.
    pub fn contains_point(&self, p: &DMatrix<f64>) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)].contains(p[(i, j)])))
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

/// Floating-point inverse of the midpoint matrix. No rigor is claimed.
pub fn approx_mid_inverse(a: &IntervalMatrix) -> Result<DMatrix<f64>> {
    if a.rows != a.cols {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix is not square", a.rows, a.cols)));
    }
    let inv = a.mid().try_inverse().ok_or(Error::SingularMidpoint)?;
    if inv.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularMidpoint);
    }
    Ok(inv)
}

/// Upper bound on `|p| · g` for a point matrix and a non-negative vector.
pub(crate) fn abs_mul_upper(p: &DMatrix<f64>, g: &[f64]) -> Vec<f64> {
    (0..p.nrows()).map(|i| (0..p.ncols()).fold(0.0, |acc, j| add_up(acc, mul_up(p[(i, j)].abs(), g[j])))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_inverse() {
        let inv = approx_mid_inverse(&IntervalMatrix::identity(2)).unwrap();
        assert_eq!(inv, DMatrix::identity(2, 2));
    }

    #[test]
    fn diagonal_inverse() {
        let mut m = IntervalMatrix::zeros(2, 2);
        m[(0, 0)] = Interval::point(2.0);
        m[(1, 1)] = Interval::point(4.0);
        let inv = approx_mid_inverse(&m).unwrap();
        assert_eq!(inv[(0, 0)], 0.5);
        assert_eq!(inv[(1, 1)], 0.25);
        assert_eq!(inv[(0, 1)], 0.0);
    }

    #[test]
    fn singular_midpoint_reported() {
        let m = IntervalMatrix::zeros(3, 3);
        assert_eq!(approx_mid_inverse(&m).unwrap_err(), Error::SingularMidpoint);
    }

    #[test]
    fn product_encloses_point_product() {
        let a = DMatrix::from_row_slice(2, 2, &[0.1, 0.2, 0.3, 0.7]);
        let b = DMatrix::from_row_slice(2, 2, &[1.0 / 3.0, -0.4, 0.9, 2.0 / 7.0]);
        let prod = IntervalMatrix::from_point(&a).mul(&IntervalMatrix::from_point(&b));
        assert!(prod.contains_point(&(&a * &b)));
    }

    #[test]
    fn abs_mul_bounds() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 0.25]);
        let r = abs_mul_upper(&p, &[1.0, 2.0]);
        assert_eq!(r, vec![5.0, 1.0]);
    }
}
