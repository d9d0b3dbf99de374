//! Skew-symmetric matrices and their Pfaffians over exact and floating scalars.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::LaurentU;

/// Largest size developed along the first row; bigger float matrices are
/// reduced by skew-tridiagonalization.
pub const DEVELOPMENT_MAX: usize = 12;

const FLOAT_SKEW_TOL: f64 = 1e-12;

/// Scalars a [`SkewMatrix`] may hold.
pub trait PfScalar:
    Clone + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// `a + b == 0`, exactly for exact rings and within `1e-12` for floats.
    fn cancels(a: &Self, b: &Self) -> bool;

    /// Pfaffian of an even-sized skew matrix; exact rings always develop.
    fn pfaffian_even(m: &SkewMatrix<Self>) -> Self {
        m.pfaffian_development()
    }
}

impl PfScalar for LaurentU {
    fn cancels(a: &Self, b: &Self) -> bool {
        (a + b).is_zero()
    }
}

impl PfScalar for f64 {
    fn cancels(a: &Self, b: &Self) -> bool {
        (a + b).abs() <= FLOAT_SKEW_TOL * (1.0 + a.abs().max(b.abs()))
    }

    fn pfaffian_even(m: &SkewMatrix<Self>) -> Self {
        if m.size() <= DEVELOPMENT_MAX {
            m.pfaffian_development()
        } else {
            let c = SkewMatrix {
                size: m.size,
                data: m.data.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
            };
            c.pfaffian_elimination().re
        }
    }
}

impl PfScalar for Complex64 {
    fn cancels(a: &Self, b: &Self) -> bool {
        (a + b).norm() <= FLOAT_SKEW_TOL * (1.0 + a.norm().max(b.norm()))
    }

    fn pfaffian_even(m: &SkewMatrix<Self>) -> Self {
        if m.size() <= DEVELOPMENT_MAX {
            m.pfaffian_development()
        } else {
            m.pfaffian_elimination()
        }
    }
}

/// Square matrix with `A + Aᵀ = 0`, stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkewMatrix<T> {
    size: usize,
    data: Vec<T>,
}

impl<T: PfScalar> SkewMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::NotSquare);
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        let m = Self { size, data };
        for i in 0..size {
            for j in i..size {
                if !T::cancels(m.get(i, j), m.get(j, i)) {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(m)
    }

    /// Builds the matrix from its strict upper triangle `f(i, j)`, `i < j`.
    pub fn from_upper(size: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = vec![T::zero(); size * size];
        for i in 0..size {
            for j in i + 1..size {
                let v = f(i, j);
                data[j * size + i] = -v.clone();
                data[i * size + j] = v;
            }
        }
        Self { size, data }
    }

    pub fn zeros(size: usize) -> Self {
        Self {
            size,
            data: vec![T::zero(); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.size.max(1)).map(<[T]>::to_vec).take(self.size).collect()
    }

    /// Block-diagonal sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.size, other.size);
        Self::from_upper(a + b, |i, j| {
            if j < a {
                self.get(i, j).clone()
            } else if i >= a {
                other.get(i - a, j - a).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self::from_upper(idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    pub fn pfaffian(&self) -> T {
        if self.size == 0 {
            T::one()
        } else if self.size % 2 == 1 {
            T::zero()
        } else {
            T::pfaffian_even(self)
        }
    }

    /// `pf(A) = Σ_{j>0} (−1)^{j+1} a_{0j} pf(A with rows/cols 0, j removed)`; zero entries skipped.
    pub fn pfaffian_development(&self) -> T {
        let idx: Vec<usize> = (0..self.size).collect();
        self.develop(&idx)
    }

    fn develop(&self, idx: &[usize]) -> T {
        match idx.len() {
            0 => return T::one(),
            n if n % 2 == 1 => return T::zero(),
            2 => return self.get(idx[0], idx[1]).clone(),
            _ => {}
        }
        let mut acc = T::zero();
        let mut rest: Vec<usize> = Vec::with_capacity(idx.len() - 2);
        for j in 1..idx.len() {
            let a = self.get(idx[0], idx[j]);
            if a.is_zero() {
                continue;
            }
            rest.clear();
            rest.extend(idx[1..].iter().enumerate().filter(|(p, _)| p + 1 != j).map(|(_, &x)| x));
            let term = a.clone() * self.develop(&rest);
            acc = if j % 2 == 1 { acc + term } else { acc - term };
        }
        acc
    }
}

impl SkewMatrix<Complex64> {
    /// Parlett–Reid skew-tridiagonalization with partial pivoting.
    pub fn pfaffian_elimination(&self) -> Complex64 {
        let n = self.size;
        if n % 2 == 1 {
            return Complex64::zero();
        }
        let mut a = DMatrix::from_row_slice(n, n, &self.data);
        let mut pf = Complex64::one();
        for k in (0..n.saturating_sub(1)).step_by(2) {
            let kp = (k + 1..n)
                .max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))
                .unwrap_or(k + 1);
            if kp != k + 1 {
                a.swap_rows(k + 1, kp);
                a.swap_columns(k + 1, kp);
                pf = -pf;
            }
            let pivot = a[(k, k + 1)];
            if pivot == Complex64::zero() {
                return Complex64::zero();
            }
            pf *= pivot;
            if k + 2 < n {
                let tau: Vec<Complex64> = (k + 2..n).map(|c| a[(k, c)] / pivot).collect();
                let col: Vec<Complex64> = (k + 2..n).map(|r| a[(r, k + 1)]).collect();
                for (i, r) in (k + 2..n).enumerate() {
                    for (j, c) in (k + 2..n).enumerate() {
                        a[(r, c)] += tau[i] * col[j] - col[i] * tau[j];
                    }
                }
            }
        }
        pf
    }

    pub fn determinant(&self) -> Complex64 {
        DMatrix::from_row_slice(self.size, self.size, &self.data).determinant()
    }
}

impl SkewMatrix<f64> {
    pub fn determinant(&self) -> f64 {
        DMatrix::from_row_slice(self.size, self.size, &self.data).determinant()
    }

    pub fn to_complex(&self) -> SkewMatrix<Complex64> {
        SkewMatrix {
            size: self.size,
            data: self.data.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
        }
    }
}

/// Free-function form of [`SkewMatrix::pfaffian`].
pub fn pfaffian<T: PfScalar>(a: &SkewMatrix<T>) -> T {
    a.pfaffian()
}

/// `|pf(A)² − det(A)| ≤ 1e-9·(1 + |det A|)`.
pub fn pfaffian_sq_is_det(a: &SkewMatrix<Complex64>) -> bool {
    let pf = a.pfaffian();
    let det = a.determinant();
    (pf * pf - det).norm() <= 1e-9 * (1.0 + det.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational;

    #[test]
    fn two_by_two() {
        let a = SkewMatrix::from_rows(vec![vec![0.0, 3.0], vec![-3.0, 0.0]]).unwrap();
        assert_eq!(a.pfaffian(), 3.0);
        assert_eq!(a.determinant(), 9.0);
        assert!(pfaffian_sq_is_det(&a.to_complex()));
    }

    #[test]
    fn standard_blocks() {
        // Blocks [[0, −λ], [λ, 0]] have pf = −λ each.
        let a = SkewMatrix::from_upper(4, |i, j| match (i, j) {
            (0, 1) => -2.0,
            (2, 3) => -5.0,
            _ => 0.0,
        });
        assert_eq!(a.pfaffian(), 10.0);
    }

    #[test]
    fn odd_size_vanishes() {
        let a = SkewMatrix::from_upper(3, |i, j| (i + 2 * j) as f64);
        assert_eq!(a.pfaffian(), 0.0);
        assert!(pfaffian_sq_is_det(&a.to_complex()));
    }

    #[test]
    fn rejects_non_skew() {
        let err = SkewMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap_err();
        assert_eq!(err, Error::NotSkew);
        let err = SkewMatrix::from_rows(vec![vec![0.0, 1.0]]).unwrap_err();
        assert_eq!(err, Error::NotSquare);
    }

    #[test]
    fn exact_entries() {
        let u = LaurentU::u();
        let a = SkewMatrix::from_upper(2, |_, _| u.scale(&rational(1, 3)));
        assert_eq!(a.pfaffian(), LaurentU::monomial(rational(1, 3), 1));
    }

    #[test]
    fn elimination_agrees_with_development() {
        let a = SkewMatrix::from_upper(8, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + j) % 3) as f64 * 0.5)
        });
        let d = a.pfaffian_development();
        let e = a.pfaffian_elimination();
        assert!((d - e).norm() <= 1e-10 * (1.0 + d.norm()));
    }
}
