//! Brute-force exterior algebra `Λℝⁿ` on blade bitmasks, used as an oracle.

use crate::error::{Error, Result};
use crate::topdegree::pfaffian::SkewMatrix;

pub const ORACLE_MAX_DIM: usize = 10;

/// Dense multivector: `coeffs[mask]` multiplies `e_{i₁}∧…∧e_{i_r}`, `i₁ < … < i_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    n: usize,
    coeffs: Vec<f64>,
}

fn reorder_sign(x: u32, y: u32) -> f64 {
    let mut swaps = 0u32;
    let mut a = x >> 1;
    while a != 0 {
        swaps += (a & y).count_ones();
        a >>= 1;
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Multivector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![0.0; 1 << n],
        }
    }

    pub fn one(n: usize) -> Self {
        let mut out = Self::zero(n);
        out.coeffs[0] = 1.0;
        out
    }

    pub fn vector(v: &[f64]) -> Self {
        let mut out = Self::zero(v.len());
        for (i, x) in v.iter().enumerate() {
            out.coeffs[1 << i] = *x;
        }
        out
    }

    /// `Σ_{i<j} A_ij e_i∧e_j`, so that `ω(v, w) = ⟨v, A w⟩`.
    pub fn two_form(a: &SkewMatrix<f64>) -> Self {
        let n = a.size();
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in i + 1..n {
                out.coeffs[(1 << i) | (1 << j)] = *a.get(i, j);
            }
        }
        out
    }

    pub fn coefficient(&self, mask: u32) -> f64 {
        self.coeffs[mask as usize]
    }

    pub fn top(&self) -> f64 {
        self.coeffs[(1 << self.n) - 1]
    }

    pub fn add_scaled(&mut self, other: &Self, c: f64) {
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += c * y;
        }
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (x, &cx) in self.coeffs.iter().enumerate() {
            if cx == 0.0 {
                continue;
            }
            for (y, &cy) in other.coeffs.iter().enumerate() {
                if cy == 0.0 || x & y != 0 {
                    continue;
                }
                out.coeffs[x | y] += reorder_sign(x as u32, y as u32) * cx * cy;
            }
        }
        out
    }

    /// `Σ_k ωᵏ/k!`, truncated at degree `n`.
    pub fn exp(&self) -> Self {
        let mut out = Self::one(self.n);
        let mut power = Self::one(self.n);
        for k in 1..=self.n / 2 {
            power = power.wedge(self);
            out.add_scaled(&power, 1.0 / factorial(k));
        }
        out
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// Top coefficient of `e^ω ∧ θ_N ∧ … ∧ θ_1` expanded literally, with
/// `thetas[0] = θ_N`.
pub fn finite_top_degree_oracle(a: &SkewMatrix<f64>, thetas: &[Vec<f64>]) -> Result<f64> {
    let n = a.size();
    if n > ORACLE_MAX_DIM {
        return Err(Error::SizeLimit {
            what: "exterior algebra dimension",
            got: n,
            max: ORACLE_MAX_DIM,
        });
    }
    if let Some(t) = thetas.iter().find(|t| t.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    let mut acc = Multivector::two_form(a).exp();
    for t in thetas {
        acc = acc.wedge(&Multivector::vector(t));
    }
    Ok(acc.top())
}
