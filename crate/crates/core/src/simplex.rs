//! Antisymmetrized simplex integrals
//!
//! `J(k₁,…,k_N) = Σ_σ sgn σ ∫_{Δ_N} exp(2πi Σ_a k_{σ_a} τ_a) dτ`,
//! `Δ_N = {0 ≤ τ₁ ≤ … ≤ τ_N ≤ 1}`, computed by brute force and in closed form.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{rational, LaurentU, PolyExp};
use crate::topdegree::pfaffian::SkewMatrix;

/// Largest `N` accepted by [`j_oracle`] (`N!` iterated integrations).
pub const ORACLE_MAX_N: usize = 8;

/// Exact `J(k)` by iterated symbolic integration over every permutation.
///
/// Permutations are walked depth-first so that a shared prefix
/// `σ₁,…,σ_a` is integrated once.
pub fn j_oracle(k: &[i64]) -> Result<LaurentU> {
    if k.len() > ORACLE_MAX_N {
        return Err(Error::SizeLimit {
            what: "tuple length",
            got: k.len(),
            max: ORACLE_MAX_N,
        });
    }
    let mut used = vec![false; k.len()];
    let mut acc = LaurentU::zero();
    walk(k, &mut used, &PolyExp::one(), false, &mut acc);
    Ok(acc)
}

fn walk(k: &[i64], used: &mut [bool], f: &PolyExp, odd: bool, acc: &mut LaurentU) {
    if used.iter().all(|&b| b) {
        let v = f.eval_at_one();
        *acc += &if odd { -v } else { v };
        return;
    }
    // Choosing index i next adds one inversion per smaller unused index.
    let mut smaller_unused = 0usize;
    for i in 0..k.len() {
        if used[i] {
            continue;
        }
        let g = f.shift_frequency(k[i]).integrate();
        used[i] = true;
        walk(k, used, &g, odd ^ (smaller_unused % 2 == 1), acc);
        used[i] = false;
        smaller_unused += 1;
    }
}

/// Exact `J(k)` from the zero pattern of `k`.
pub fn j_closed(k: &[i64]) -> LaurentU {
    let n = k.len();
    if n == 0 {
        return LaurentU::one();
    }
    let zeros: Vec<usize> = (0..n).filter(|&a| k[a] == 0).collect();
    match zeros.as_slice() {
        [] if n % 2 == 1 => LaurentU::zero(),
        [] => {
            // 2^{N/2} pf(M), M_ab = δ_{k_a,−k_b}·u/k_a.
            let m = SkewMatrix::from_upper(n, |a, b| {
                if k[a] == -k[b] {
                    LaurentU::u().scale(&rational(1, k[a]))
                } else {
                    LaurentU::zero()
                }
            });
            m.pfaffian().scale(&rational(1 << (n / 2), 1))
        }
        &[a] if n % 2 == 1 => {
            // (−1)^{N+a} J(k without a), a 1-based.
            let rest = without(k, &[a]);
            let v = j_closed(&rest);
            if (n + a + 1).is_multiple_of(2) { v } else { -v }
        }
        &[a] => {
            // Σ_{b≠a} (−1)^{a+b'} (2u/k_b) J(k without a, b), b' = position of b once a is removed.
            let mut acc = LaurentU::zero();
            for b in (0..n).filter(|&b| b != a) {
                let b_shifted = if b > a { b - 1 } else { b };
                let rest = without(k, &[a, b]);
                let term = j_closed(&rest).shift(1).scale(&rational(2, k[b]));
                // 1-based exponent a+1 + b'+1 has the parity of a + b'.
                if (a + b_shifted) % 2 == 0 {
                    acc += &term;
                } else {
                    acc += &(-term);
                }
            }
            acc
        }
        _ => LaurentU::zero(),
    }
}

fn without(k: &[i64], drop: &[usize]) -> Vec<i64> {
    k.iter()
        .enumerate()
        .filter(|(i, _)| !drop.contains(i))
        .map(|(_, &x)| x)
        .collect()
}

/// `J(k)` as a complex number.
pub fn j_numeric(k: &[i64]) -> Complex64 {
    j_closed(k).to_complex()
}
