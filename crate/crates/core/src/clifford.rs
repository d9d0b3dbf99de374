//! Clifford algebra `Cl(ℝⁿ)` with complex coefficients, indexed by blade bitmask.
//!
//! Bit `j` of a mask stands for the generator `e_{j+1}`; a blade is the
//! product of its generators in increasing order.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 16;

/// Coefficients below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-15;

/// Square of each generator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Signature {
    /// `e_j² = −1`; the convention of the loop models in this crate.
    #[default]
    Negative,
    /// `e_j² = +1`.
    Positive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliffordElement {
    n: usize,
    signature: Signature,
    coeffs: BTreeMap<u32, Complex64>,
}

/// Sign of `blade(x)·blade(y)` relative to `blade(x ^ y)`.
pub fn blade_sign(x: u32, y: u32, signature: Signature) -> f64 {
    let mut swaps = 0u32;
    let mut a = x >> 1;
    while a != 0 {
        swaps += (a & y).count_ones();
        a >>= 1;
    }
    if signature == Signature::Negative {
        swaps += (x & y).count_ones();
    }
    if swaps.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl CliffordElement {
    pub fn zero(n: usize, signature: Signature) -> Self {
        assert!(n <= MAX_DIM, "Clifford dimension {n} exceeds {MAX_DIM}");
        Self {
            n,
            signature,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, signature: Signature, c: Complex64) -> Self {
        Self::blade(n, signature, 0, c)
    }

    pub fn blade(n: usize, signature: Signature, mask: u32, c: Complex64) -> Self {
        let mut out = Self::zero(n, signature);
        assert!(mask >> n == 0, "blade {mask:#b} outside dimension {n}");
        out.add_coeff(mask, c);
        out
    }

    /// The generator `e_j`, `1 ≤ j ≤ n`.
    pub fn generator(n: usize, signature: Signature, j: usize) -> Self {
        assert!((1..=n).contains(&j), "generator e_{j} outside dimension {n}");
        Self::blade(n, signature, 1 << (j - 1), Complex64::new(1.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn coefficient(&self, mask: u32) -> Complex64 {
        self.coeffs.get(&mask).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coeffs.iter().map(|(m, c)| (*m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_coeff(&mut self, mask: u32, c: Complex64) {
        let entry = self.coeffs.entry(mask).or_insert_with(Complex64::zero);
        *entry += c;
        if entry.norm() < PRUNE_TOL {
            self.coeffs.remove(&mask);
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero(self.n, self.signature);
        for (&m, &x) in &self.coeffs {
            out.add_coeff(m, x * c);
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&m, &x) in &other.coeffs {
            out.add_coeff(m, x);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n, self.signature);
        for (&x, &cx) in &self.coeffs {
            for (&y, &cy) in &other.coeffs {
                out.add_coeff(x ^ y, cx * cy * blade_sign(x, y, self.signature));
            }
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        assert_eq!(self.signature, other.signature, "mixed Clifford signatures");
        Ok(())
    }

    /// Reversion: each grade-`r` blade picks up `(−1)^{r(r−1)/2}`.
    pub fn reverse(&self) -> Self {
        let mut out = Self::zero(self.n, self.signature);
        for (&m, &c) in &self.coeffs {
            let r = m.count_ones();
            let sign = if (r * r.saturating_sub(1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            out.add_coeff(m, c * sign);
        }
        out
    }

    /// `2^{n/2}` times the coefficient of `e₁⋯e_n`.
    pub fn supertrace(&self) -> Complex64 {
        let top = (1u32 << self.n) - 1;
        self.coefficient(top) * 2f64.powf(self.n as f64 / 2.0)
    }

    /// Coefficient of the full blade over `axes` (1-based), for elements
    /// supported on blades inside `axes`.
    pub fn sub_top_coeff(&self, axes: &[usize]) -> Result<Complex64> {
        let mut mask = 0u32;
        for &j in axes {
            if !(1..=self.n).contains(&j) {
                return Err(Error::SupportViolation);
            }
            mask |= 1 << (j - 1);
        }
        if self.coeffs.keys().any(|m| m & !mask != 0) {
            return Err(Error::SupportViolation);
        }
        Ok(self.coefficient(mask))
    }
}

impl Add for &CliffordElement {
    type Output = CliffordElement;
    fn add(self, rhs: &CliffordElement) -> CliffordElement {
        self.checked_add(rhs).expect("Clifford dimensions differ")
    }
}

impl Mul for &CliffordElement {
    type Output = CliffordElement;
    fn mul(self, rhs: &CliffordElement) -> CliffordElement {
        self.checked_mul(rhs).expect("Clifford dimensions differ")
    }
}

/// Free-function product with dimension checking.
pub fn cl_mul(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    a.checked_mul(b)
}

pub fn supertrace(a: &CliffordElement) -> Complex64 {
    a.supertrace()
}

pub fn sub_top_coeff(a: &CliffordElement, axes: &[usize]) -> Result<Complex64> {
    a.sub_top_coeff(axes)
}
