//! Pfaffians, the finite-dimensional Wick formula and the loop-space top degree.

pub mod exterior;
pub mod finite;
pub mod pfaffian;

pub use exterior::finite_top_degree_oracle;
pub use finite::finite_top_degree;
pub use pfaffian::{pfaffian, pfaffian_sq_is_det, SkewMatrix};

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{green_inner, BasisCovector, LoopHolonomyModel};

/// An elementary wedge `weight · θ_N ∧ … ∧ θ_1`; `factors[0]` is `θ_N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeWord {
    pub factors: Vec<BasisCovector>,
    #[serde(default = "unit_weight")]
    pub weight: Complex64,
}

fn unit_weight() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl WedgeWord {
    pub fn new(factors: Vec<BasisCovector>) -> Self {
        Self {
            factors,
            weight: unit_weight(),
        }
    }

    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        Self::new(pairs.iter().map(|&(j, k)| BasisCovector::new(j, k)).collect())
    }

    pub fn with_weight(mut self, weight: Complex64) -> Self {
        self.weight = weight;
        self
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn validate(&self, model: &LoopHolonomyModel) -> Result<()> {
        self.factors.iter().try_for_each(|f| f.validate(model))
    }

    /// Number of factors on each axis `1..=n`.
    pub fn axis_counts(&self, n: usize) -> Vec<usize> {
        let mut counts = vec![0; n];
        for f in &self.factors {
            if (1..=n).contains(&f.axis) {
                counts[f.axis - 1] += 1;
            }
        }
        counts
    }
}

impl FromStr for WedgeWord {
    type Err = Error;

    /// Parses `"j:k,j:k,…"`; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        let parse_one = |item: &str| -> Option<BasisCovector> {
            let (j, k) = item.trim().split_once(':')?;
            Some(BasisCovector::new(j.trim().parse().ok()?, k.trim().parse().ok()?))
        };
        s.split(',')
            .map(|item| {
                parse_one(item).ok_or_else(|| Error::Domain(format!("cannot parse factor {item:?}, expected axis:freq")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

impl fmt::Display for WedgeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|c| format!("{}:{}", c.axis, c.freq)).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The frame `Θ_γ` against which loop-space quantities are reported:
/// spinor sign `ε₀ = +1` and the standard orientation of `e₁,…,e_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceFrame {
    pub model: LoopHolonomyModel,
}

impl ReferenceFrame {
    pub const EPSILON0: f64 = 1.0;
    pub const ORIENTATION: f64 = 1.0;

    pub fn new(model: LoopHolonomyModel) -> Self {
        Self { model }
    }
}

/// The factors of the loop top degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopDegreeBreakdown {
    pub value: Complex64,
    /// Sign of the reordering that puts kernel modes first.
    pub eta0: i32,
    pub sine_product: f64,
    pub kernel_pairing: f64,
    pub pf_omega: Complex64,
    /// Word positions holding kernel modes.
    pub kernel_positions: Vec<usize>,
}

/// Sign of the permutation `seq` of `0..seq.len()`.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coefficient of `[e^ω ∧ θ]_top` relative to `Θ_γ`.
pub fn loop_top_degree(frame: &ReferenceFrame, word: &WedgeWord) -> Result<Complex64> {
    loop_top_degree_breakdown(frame, word).map(|b| b.value)
}

/// `η₀ · ∏ 2 sin(πα_j) · (kernel pairing) · pf(Ω)`, times the word weight.
pub fn loop_top_degree_breakdown(frame: &ReferenceFrame, word: &WedgeWord) -> Result<TopDegreeBreakdown> {
    let model = &frame.model;
    word.validate(model)?;
    let m = model.m();
    let d = model.d();

    let (kernel, complement): (Vec<usize>, Vec<usize>) =
        (0..word.len()).partition(|&i| word.factors[i].is_kernel_mode(model));
    let order: Vec<usize> = kernel.iter().chain(&complement).copied().collect();
    let eta0 = permutation_sign(&order);

    let kernel_pairing = if kernel.len() != d {
        0.0
    } else if d == 0 {
        1.0
    } else {
        DMatrix::from_fn(d, d, |r, c| {
            if word.factors[kernel[r]].axis == 2 * m + 1 + c {
                1.0
            } else {
                0.0
            }
        })
        .determinant()
    };

    let mut entries = vec![vec![Complex64::default(); complement.len()]; complement.len()];
    for (x, &a) in complement.iter().enumerate() {
        for (y, &b) in complement.iter().enumerate().skip(x + 1) {
            let g = green_inner(model, &word.factors[a], &word.factors[b])?;
            entries[x][y] = g;
            entries[y][x] = -g;
        }
    }
    let pf_omega = SkewMatrix::from_rows(entries)?.pfaffian();
    let sine_product = model.sine_product();
    let value = word.weight
        * ReferenceFrame::EPSILON0
        * ReferenceFrame::ORIENTATION
        * f64::from(eta0)
        * sine_product
        * kernel_pairing
        * pf_omega;
    Ok(TopDegreeBreakdown {
        value,
        eta0,
        sine_product,
        kernel_pairing,
        pf_omega,
        kernel_positions: kernel,
    })
}
