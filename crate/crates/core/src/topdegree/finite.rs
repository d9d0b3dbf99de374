//! Finite-dimensional fermionic Wick formula.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::topdegree::pfaffian::SkewMatrix;

/// Singular values below `KERNEL_TOL · max(1, σ_max)` count as kernel.
pub const KERNEL_TOL: f64 = 1e-9;

/// Top coefficient of `e^ω ∧ θ_N ∧ … ∧ θ_1` with `ω(v, w) = ⟨v, A w⟩` and
/// `thetas[0] = θ_N`.
///
/// `V = ker A ⊕ coim A` with orthonormal bases oriented so `det[K | C] = +1`.
/// Expanding each `θ = θ^K + θ^C`, exactly `d = dim ker A` factors must land in
/// the kernel; each choice `S` contributes
/// `sign(S) · det[θ_s^K] · pf(A_C) · pf(−⟨θ_a^C, A_C⁻¹ θ_b^C⟩)`.
pub fn finite_top_degree(a: &SkewMatrix<f64>, thetas: &[Vec<f64>]) -> Result<f64> {
    let n = a.size();
    if let Some(t) = thetas.iter().find(|t| t.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: t.len(),
        });
    }
    if thetas.len() > n {
        return Ok(0.0);
    }
    let split = KernelSplit::new(a);
    let d = split.kernel.ncols();
    let big_n = thetas.len();
    if big_n < d || (big_n - d) % 2 == 1 {
        return Ok(0.0);
    }

    let a_mat = DMatrix::from_row_slice(n, n, &a.rows().concat());
    let a_c = split.coimage.transpose() * &a_mat * &split.coimage;
    let r = a_c.nrows();
    let pf_c = SkewMatrix::from_upper(r, |i, j| a_c[(i, j)]).pfaffian();
    let a_c_inv = if r > 0 {
        a_c.clone().try_inverse().expect("restriction to the coimage is invertible")
    } else {
        a_c.clone()
    };

    let thetas: Vec<DVector<f64>> = thetas.iter().map(|t| DVector::from_column_slice(t)).collect();
    let t_k: Vec<DVector<f64>> = thetas.iter().map(|t| split.kernel.transpose() * t).collect();
    let t_c: Vec<DVector<f64>> = thetas.iter().map(|t| split.coimage.transpose() * t).collect();

    let mut total = 0.0;
    for subset in subsets(big_n, d) {
        let kernel_det = if d == 0 {
            1.0
        } else {
            DMatrix::from_fn(d, d, |row, col| t_k[subset[row]][col]).determinant()
        };
        if kernel_det == 0.0 {
            continue;
        }
        // Moving the chosen factors to the front, keeping relative order.
        let mut swaps = 0;
        for (rank, &s) in subset.iter().enumerate() {
            swaps += s - rank;
        }
        let rest: Vec<usize> = (0..big_n).filter(|i| !subset.contains(i)).collect();
        let omega = SkewMatrix::from_upper(rest.len(), |i, j| {
            -(t_c[rest[i]].transpose() * &a_c_inv * &t_c[rest[j]])[(0, 0)]
        });
        let sign = if swaps % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * kernel_det * omega.pfaffian();
    }
    Ok(total * pf_c)
}

/// Orthonormal bases of `ker A` and its orthogonal complement.
struct KernelSplit {
    kernel: DMatrix<f64>,
    coimage: DMatrix<f64>,
}

impl KernelSplit {
    fn new(a: &SkewMatrix<f64>) -> Self {
        let n = a.size();
        let a_mat = DMatrix::from_row_slice(n, n, &a.rows().concat());
        let svd = a_mat.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let sigma_max = svd.singular_values.max();
        let cutoff = KERNEL_TOL * sigma_max.max(1.0);
        let (mut ker, mut coim) = (Vec::new(), Vec::new());
        for (i, sigma) in svd.singular_values.iter().enumerate() {
            let col = v_t.row(i).transpose();
            if *sigma <= cutoff {
                ker.push(col);
            } else {
                coim.push(col);
            }
        }
        let stack = |cols: &[DVector<f64>]| {
            if cols.is_empty() {
                DMatrix::zeros(n, 0)
            } else {
                DMatrix::from_columns(cols)
            }
        };
        let (mut kernel, mut coimage) = (stack(&ker), stack(&coim));
        let mut joined = DMatrix::zeros(n, n);
        joined.columns_mut(0, kernel.ncols()).copy_from(&kernel);
        joined.columns_mut(kernel.ncols(), coimage.ncols()).copy_from(&coimage);
        if joined.determinant() < 0.0 {
            if coimage.ncols() > 0 {
                coimage.column_mut(0).neg_mut();
            } else {
                kernel.column_mut(0).neg_mut();
            }
        }
        Self { kernel, coimage }
    }
}

/// All increasing `k`-subsets of `0..n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}
