//! Loop-holonomy models: parallel transport, spectrum of the covariant
//! derivative, zeta determinants and Green pairings.

mod green;
mod zeta;

pub use green::{green_inner, green_inner_quadrature, GreenQuadrature, DEFAULT_PANELS};
pub use zeta::{hurwitz_zeta, zeta_det_closed, zeta_det_special_values, zeta_fn_numeric};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{CliffordElement, Signature};
use crate::error::{Error, Result};

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 12;

/// Dimension `n` with rotation angles `2πα_j` on the planes `(e_{2j−1}, e_{2j})`,
/// `j = 1..m`, and `d = n − 2m` parallel (kernel) directions `e_{2m+1},…,e_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelSpec")]
pub struct LoopHolonomyModel {
    n: usize,
    alphas: Vec<f64>,
}

#[derive(Deserialize)]
struct ModelSpec {
    n: usize,
    alphas: Vec<f64>,
}

impl TryFrom<ModelSpec> for LoopHolonomyModel {
    type Error = Error;
    fn try_from(s: ModelSpec) -> Result<Self> {
        Self::new(s.n, s.alphas)
    }
}

impl LoopHolonomyModel {
    pub fn new(n: usize, alphas: Vec<f64>) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&n) {
            return Err(Error::InvalidModel(format!(
                "dimension {n} outside {MIN_DIM}..={MAX_DIM}"
            )));
        }
        if 2 * alphas.len() > n {
            return Err(Error::InvalidModel(format!(
                "{} rotation planes do not fit in dimension {n}",
                alphas.len()
            )));
        }
        if let Some(a) = alphas.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
            return Err(Error::InvalidModel(format!("angle {a} not in (0, 1)")));
        }
        Ok(Self { n, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.alphas.len()
    }

    /// Kernel dimension `n − 2m`.
    pub fn d(&self) -> usize {
        self.n - 2 * self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// True for the trailing parallel axes `2m < j ≤ n`.
    pub fn is_kernel_axis(&self, axis: usize) -> bool {
        axis > 2 * self.m() && axis <= self.n
    }

    /// The full determinant of the covariant derivative vanishes when `d > 0`.
    pub fn unreduced_det_vanishes(&self) -> bool {
        self.d() > 0
    }

    /// `∏ 2 sin(πα_j)`.
    pub fn sine_product(&self) -> f64 {
        self.alphas.iter().map(|a| 2.0 * (PI * a).sin()).product()
    }

    pub fn tangent_holonomy(&self) -> DMatrix<f64> {
        self.tangent_transport(1.0)
    }

    /// Transport from `0` to `t` at constant angular speed.
    pub fn tangent_transport(&self, t: f64) -> DMatrix<f64> {
        let mut p = DMatrix::identity(self.n, self.n);
        for (j, a) in self.alphas.iter().enumerate() {
            let (s, c) = (2.0 * PI * a * t).sin_cos();
            let r = 2 * j;
            p[(r, r)] = c;
            p[(r, r + 1)] = -s;
            p[(r + 1, r)] = s;
            p[(r + 1, r + 1)] = c;
        }
        p
    }

    /// `∏_j (cos πα_j + sin πα_j e_{2j−1}e_{2j})`, with `e_j² = −1`.
    pub fn spinor_holonomy(&self) -> CliffordElement {
        let sig = Signature::Negative;
        let mut h = CliffordElement::scalar(self.n, sig, Complex64::new(1.0, 0.0));
        for (j, a) in self.alphas.iter().enumerate() {
            let (s, c) = (PI * a).sin_cos();
            let rotor = &CliffordElement::scalar(self.n, sig, Complex64::new(c, 0.0))
                + &CliffordElement::blade(self.n, sig, 0b11 << (2 * j), Complex64::new(s, 0.0));
            h = &h * &rotor;
        }
        h
    }

    /// Eigenvalues `λ` of the covariant derivative with `|λ| < radius`,
    /// ascending by `Im λ`, equal values merged.
    pub fn spectrum(&self, radius: f64) -> Vec<SpectrumEntry> {
        let kmax = (radius / (2.0 * PI)).ceil() as i64 + 1;
        let mut freqs: Vec<(f64, usize)> = Vec::new();
        for k in -kmax..=kmax {
            let k = k as f64;
            for a in &self.alphas {
                freqs.push((k + a, 1));
                freqs.push((k - a, 1));
            }
            if self.d() > 0 {
                freqs.push((k, self.d()));
            }
        }
        freqs.retain(|(f, _)| 2.0 * PI * f.abs() < radius);
        freqs.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut out: Vec<SpectrumEntry> = Vec::new();
        for (f, mult) in freqs {
            match out.last_mut() {
                Some(last) if (last.frequency - f).abs() <= 1e-12 => last.multiplicity += mult,
                _ => out.push(SpectrumEntry {
                    frequency: f,
                    multiplicity: mult,
                }),
            }
        }
        out
    }
}

/// Eigenvalue `2πi·frequency` with its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub frequency: f64,
    pub multiplicity: usize,
}

impl SpectrumEntry {
    pub fn eigenvalue(&self) -> Complex64 {
        Complex64::new(0.0, 2.0 * PI * self.frequency)
    }
}

/// The covector field `E_{j,k}(t) = e^{2πikt} [transport 0→t] e_j*`,
/// serialized as `[j, k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(usize, i64)", into = "(usize, i64)")]
pub struct BasisCovector {
    pub axis: usize,
    pub freq: i64,
}

impl From<(usize, i64)> for BasisCovector {
    fn from((axis, freq): (usize, i64)) -> Self {
        Self { axis, freq }
    }
}

impl From<BasisCovector> for (usize, i64) {
    fn from(c: BasisCovector) -> Self {
        (c.axis, c.freq)
    }
}

impl BasisCovector {
    pub fn new(axis: usize, freq: i64) -> Self {
        Self { axis, freq }
    }

    pub fn validate(&self, model: &LoopHolonomyModel) -> Result<()> {
        if (1..=model.n()).contains(&self.axis) {
            Ok(())
        } else {
            Err(Error::InvalidCovector {
                axis: self.axis,
                freq: self.freq,
                n: model.n(),
            })
        }
    }

    /// Zero-frequency mode along a parallel axis.
    pub fn is_kernel_mode(&self, model: &LoopHolonomyModel) -> bool {
        self.freq == 0 && model.is_kernel_axis(self.axis)
    }
}
