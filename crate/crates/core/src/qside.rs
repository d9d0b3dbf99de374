//! The combinatorial functional `q(θ)` relative to `Θ_γ`: a per-axis
//! factorized evaluation and a permutation-sum oracle.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford::{blade_sign, CliffordElement, Signature};
use crate::error::{Error, Result};
use crate::exactnum::{LaurentU, PolyExp};
use crate::simplex::j_closed;
use crate::topdegree::{permutation_sign, ReferenceFrame, WedgeWord};

/// Largest word length accepted by [`q_coefficient_oracle`].
pub const ORACLE_MAX_N: usize = 8;

/// Values below this magnitude count as zero in [`q_parity_check`].
pub const ZERO_TOL: f64 = 1e-12;

/// Intermediate quantities of the factorized evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QBreakdown {
    pub value: Complex64,
    /// Sign of the stable sort of the word by ascending axis.
    pub sort_sign: i32,
    /// `N_j` for `j = 1..=n`.
    pub axis_counts: Vec<usize>,
    /// `J_j` on each axis' frequencies in word order.
    pub axis_integrals: Vec<Complex64>,
}

/// Factorized `q`: after sorting by axis, the Clifford product splits into
/// commuting per-plane and per-kernel-axis blocks whose top terms are
/// `cos/sin(πα_j)·J_{2j−1}J_{2j}` and `J_j`.
pub fn q_coefficient_fast(frame: &ReferenceFrame, word: &WedgeWord) -> Result<Complex64> {
    q_fast_breakdown(frame, word).map(|b| b.value)
}

pub fn q_fast_breakdown(frame: &ReferenceFrame, word: &WedgeWord) -> Result<QBreakdown> {
    let model = &frame.model;
    word.validate(model)?;
    let n = model.n();
    let big_n = word.len();

    let mut order: Vec<usize> = (0..big_n).collect();
    order.sort_by_key(|&i| word.factors[i].axis);
    let sort_sign = permutation_sign(&order);

    let mut per_axis: Vec<Vec<i64>> = vec![Vec::new(); n];
    for f in &word.factors {
        per_axis[f.axis - 1].push(f.freq);
    }
    let axis_counts: Vec<usize> = per_axis.iter().map(Vec::len).collect();
    let axis_integrals: Vec<Complex64> = per_axis.iter().map(|k| j_closed(k).to_complex()).collect();

    let mut value = word.weight
        * ReferenceFrame::EPSILON0
        * f64::from(sort_sign)
        * 2f64.powf((n as f64 - big_n as f64) / 2.0);
    for (j, alpha) in model.alphas().iter().enumerate() {
        let (a, b) = (2 * j, 2 * j + 1);
        let (s, c) = (std::f64::consts::PI * alpha).sin_cos();
        let trig = match (axis_counts[a] % 2, axis_counts[b] % 2) {
            (1, 1) => c,
            (0, 0) => s,
            _ => 0.0,
        };
        value *= trig * axis_integrals[a] * axis_integrals[b];
    }
    for j in 2 * model.m()..n {
        value *= if axis_counts[j] % 2 == 1 {
            axis_integrals[j]
        } else {
            Complex64::zero()
        };
    }
    Ok(QBreakdown {
        value,
        sort_sign,
        axis_counts,
        axis_integrals,
    })
}

/// `ε₀ 2^{−N/2} str(H · Σ_σ sgn σ · I(σ) · e_{j_{σ_N}}⋯e_{j_{σ_1}})` where
/// `I(σ) = ∫_{Δ_N} exp(2πi Σ_a k_{σ_a} τ_a)` is integrated exactly and `H`
/// is the spinor holonomy.
pub fn q_coefficient_oracle(frame: &ReferenceFrame, word: &WedgeWord) -> Result<Complex64> {
    let model = &frame.model;
    word.validate(model)?;
    let big_n = word.len();
    if big_n > ORACLE_MAX_N {
        return Err(Error::SizeLimit {
            what: "word length",
            got: big_n,
            max: ORACLE_MAX_N,
        });
    }
    // theta[a] = θ_{a+1}.
    let theta: Vec<(usize, i64)> = word.factors.iter().rev().map(|f| (f.axis, f.freq)).collect();
    let mut blades: BTreeMap<u32, LaurentU> = BTreeMap::new();
    let mut used = vec![false; big_n];
    walk(&theta, &mut used, &PolyExp::one(), 0, 1, false, &mut blades);

    let n = model.n();
    let sig = Signature::Negative;
    let mut sum = CliffordElement::zero(n, sig);
    for (mask, c) in blades {
        sum = &sum + &CliffordElement::blade(n, sig, mask, c.to_complex());
    }
    let product = &model.spinor_holonomy() * &sum;
    Ok(word.weight * ReferenceFrame::EPSILON0 * 2f64.powf(-(big_n as f64) / 2.0) * product.supertrace())
}

/// Depth-first over `σ`: level `a` fixes `σ_{a+1}`, integrating the next
/// inner variable and multiplying its generator onto the left of the monomial.
fn walk(
    theta: &[(usize, i64)],
    used: &mut [bool],
    integral: &PolyExp,
    mask: u32,
    mono_sign: i32,
    odd: bool,
    blades: &mut BTreeMap<u32, LaurentU>,
) {
    if used.iter().all(|&b| b) {
        let v = integral.eval_at_one();
        let negate = odd ^ (mono_sign < 0);
        let entry = blades.entry(mask).or_default();
        *entry += &if negate { -v } else { v };
        return;
    }
    let mut smaller_unused = 0usize;
    for i in 0..theta.len() {
        if used[i] {
            continue;
        }
        let (axis, freq) = theta[i];
        let g = integral.shift_frequency(freq).integrate();
        let gen = 1u32 << (axis - 1);
        let sign = blade_sign(gen, mask, Signature::Negative) as i32;
        used[i] = true;
        walk(theta, used, &g, gen ^ mask, mono_sign * sign, odd ^ (smaller_unused % 2 == 1), blades);
        used[i] = false;
        smaller_unused += 1;
    }
}

/// When `N − n` is odd, both evaluations must vanish.
pub fn q_parity_check(frame: &ReferenceFrame, word: &WedgeWord) -> Result<bool> {
    if (word.len() + frame.model.n()).is_multiple_of(2) {
        return Ok(true);
    }
    let fast = q_coefficient_fast(frame, word)?;
    let oracle = q_coefficient_oracle(frame, word)?;
    Ok(fast.norm() <= ZERO_TOL && oracle.norm() <= ZERO_TOL)
}
