use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::LoopHolonomyModel;
use crate::error::{Error, Result};

const DIRECT_TERMS: usize = 50;

/// `B_{2j}`, `j = 1..8`.
const BERNOULLI: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Reduced zeta determinant `∏ 4 sin²(πα_j)`; kernel modes are excluded.
pub fn zeta_det_closed(model: &LoopHolonomyModel) -> f64 {
    model
        .alphas()
        .iter()
        .map(|a| 4.0 * (PI * a).sin().powi(2))
        .product()
}

/// `exp(−ζ'(0))` from `ζ(0,α) = ½ − α`, `ζ(0) = −½`, `ζ'(0) = −½ log 2π`,
/// `ζ'(0,α) = log Γ(α) − ½ log 2π`.
pub fn zeta_det_special_values(model: &LoopHolonomyModel) -> f64 {
    let log_2pi = (2.0 * PI).ln();
    let d = model.d() as f64;
    // Z(s) = 2d ζ(s) + Σ_j (ζ(s,1−α_j) + ζ(s,α_j)); ζ_∇(s) = 2 cos(πs/2) (2π)^{−s} Z(s).
    let mut z0 = 2.0 * d * -0.5;
    let mut dz0 = 2.0 * d * (-0.5 * log_2pi);
    for &a in model.alphas() {
        z0 += (0.5 - (1.0 - a)) + (0.5 - a);
        dz0 += (ln_gamma(1.0 - a) - 0.5 * log_2pi) + (ln_gamma(a) - 0.5 * log_2pi);
    }
    // d/ds at 0; the cosine factor has zero derivative there.
    let dzeta = 2.0 * (-log_2pi * z0 + dz0);
    (-dzeta).exp()
}

/// `ζ_∇(s) = 2 cos(πs/2)(2π)^{−s} (2d ζ(s) + Σ_j (ζ(s,1−α_j) + ζ(s,α_j)))`
/// for real `s ∈ (−½, 3/2)`, `s ≠ 1`.
pub fn zeta_fn_numeric(model: &LoopHolonomyModel, s: f64) -> Result<f64> {
    if !(s > -0.5 && s < 1.5) || s == 1.0 {
        return Err(Error::Domain(format!("s = {s} outside (-1/2, 3/2) \\ {{1}}")));
    }
    let mut z = 2.0 * model.d() as f64 * hurwitz_zeta(s, 1.0);
    for &a in model.alphas() {
        z += hurwitz_zeta(s, 1.0 - a) + hurwitz_zeta(s, a);
    }
    Ok(2.0 * (PI * s / 2.0).cos() * (2.0 * PI).powf(-s) * z)
}

/// Hurwitz `ζ(s, a)` for real `s ≠ 1`, `a > 0`, by Euler–Maclaurin summation.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    let big_n = DIRECT_TERMS as f64 + a;
    let mut sum: f64 = (0..DIRECT_TERMS).map(|k| (k as f64 + a).powf(-s)).sum();
    sum += big_n.powf(1.0 - s) / (s - 1.0) + 0.5 * big_n.powf(-s);
    // B_{2j}/(2j)! · s(s+1)⋯(s+2j−2) · N^{−s−2j+1}
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = big_n.powf(-s - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        sum += b / factorial * rising * power;
        let m = 2.0 * j as f64 + 2.0;
        rising *= (s + m - 1.0) * (s + m);
        factorial *= (m + 1.0) * (m + 2.0);
        power /= big_n * big_n;
    }
    sum
}
