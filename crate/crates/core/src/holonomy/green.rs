use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{BasisCovector, LoopHolonomyModel};
use crate::error::{Error, Result};

pub const DEFAULT_PANELS: usize = 4096;

fn check_pair(model: &LoopHolonomyModel, a: &BasisCovector, b: &BasisCovector) -> Result<()> {
    for c in [a, b] {
        c.validate(model)?;
        if c.is_kernel_mode(model) {
            return Err(Error::KernelMode { axis: c.axis });
        }
    }
    Ok(())
}

/// `(E_a, (∇')⁻¹ E_b)` in the `L²` pairing, with `∇'` the dual (transpose) of
/// the covariant derivative on the complement of its kernel.
///
/// Antisymmetric, so zero on the diagonal. Nonzero only for
/// * same axis, `k, l ≠ 0`: `δ_{k,−l}/(2πik)`;
/// * same plane axis, `l = 0`: `−1/(2πik)` (and `+1/(2πil)` for `k = 0`);
/// * `(E_{2j−1,0}, E_{2j,0})`: `½ cot(πα_j)`, negated when reversed.
pub fn green_inner(model: &LoopHolonomyModel, a: &BasisCovector, b: &BasisCovector) -> Result<Complex64> {
    check_pair(model, a, b)?;
    let u = Complex64::new(0.0, -1.0 / (2.0 * PI));
    let (j, k, i, l) = (a.axis, a.freq, b.axis, b.freq);
    let plane_axis = |x: usize| x <= 2 * model.m();
    let v = if j == i && k == 0 && l == 0 {
        Complex64::default()
    } else if j == i && k != 0 && l != 0 {
        if k == -l {
            u / k as f64
        } else {
            Complex64::default()
        }
    } else if j == i && plane_axis(j) && l == 0 {
        -u / k as f64
    } else if j == i && plane_axis(j) && k == 0 {
        u / l as f64
    } else if k == 0 && l == 0 && plane_axis(j) && plane_axis(i) && j.div_ceil(2) == i.div_ceil(2) && j != i {
        let alpha = model.alphas()[j.div_ceil(2) - 1];
        let half_cot = 0.5 / (PI * alpha).tan();
        Complex64::new(if j % 2 == 1 { half_cot } else { -half_cot }, 0.0)
    } else {
        Complex64::default()
    };
    Ok(v)
}

/// Quadrature evaluation of the Green pairing on a fixed grid.
///
/// `G V(t) = P(t) [∫_0^t W + (1 − P(1))⁻¹P(1) ∫_0^1 W]` with `W(s) = P(s)⁻¹V(s)`
/// and the inverse taken on the rotation block only; the result is
/// `−∫_0^1 ⟨E_a(t), G E_b(t)⟩ dt` (bilinear).
pub struct GreenQuadrature {
    model: LoopHolonomyModel,
    panels: usize,
    /// `P(q h/4)`, `q = 0..=4·panels`.
    transports: Vec<DMatrix<f64>>,
    monodromy_resolvent: DMatrix<f64>,
}

impl GreenQuadrature {
    pub fn new(model: &LoopHolonomyModel, panels: usize) -> Self {
        let panels = panels.max(1);
        let h = 1.0 / panels as f64;
        let transports = (0..=4 * panels)
            .map(|q| model.tangent_transport(q as f64 * h / 4.0))
            .collect();
        let n = model.n();
        let r = 2 * model.m();
        let mut resolvent = DMatrix::zeros(n, n);
        if r > 0 {
            let p1 = model.tangent_holonomy().view((0, 0), (r, r)).into_owned();
            let inv = (DMatrix::identity(r, r) - &p1)
                .try_inverse()
                .expect("rotation block of the holonomy has no eigenvalue 1");
            resolvent.view_mut((0, 0), (r, r)).copy_from(&(inv * p1));
        }
        Self {
            model: model.clone(),
            panels,
            transports,
            monodromy_resolvent: resolvent,
        }
    }

    pub fn pair(&self, a: &BasisCovector, b: &BasisCovector) -> Result<Complex64> {
        Ok(self.pairings(b, std::slice::from_ref(a))?[0])
    }

    /// Pairings of every `a` in `targets` against `G E_b`; `G E_b` is computed once.
    pub fn pairings(&self, b: &BasisCovector, targets: &[BasisCovector]) -> Result<Vec<Complex64>> {
        for a in targets {
            check_pair(&self.model, a, b)?;
        }
        check_pair(&self.model, b, b)?;
        let n = self.model.n();
        let h = 1.0 / self.panels as f64;
        let phase = |freq: i64, t: f64| Complex64::from_polar(1.0, 2.0 * PI * freq as f64 * t);
        let real = |v: DVector<f64>| v.map(|x| Complex64::new(x, 0.0));

        // W(s) = P(s)ᵀ V(s), V(s) = e^{2πils} P(s) e_i, on the quarter grid.
        let w: Vec<DVector<Complex64>> = self
            .transports
            .iter()
            .enumerate()
            .map(|(q, p)| {
                let v = p.column(b.axis - 1).into_owned();
                real(p.transpose() * v) * phase(b.freq, q as f64 * h / 4.0)
            })
            .collect();

        // ∫_0^t W on the half grid, Simpson on each half step.
        let mut cumulative = Vec::with_capacity(2 * self.panels + 1);
        cumulative.push(DVector::<Complex64>::zeros(n));
        for r in 0..2 * self.panels {
            let step = (&w[2 * r] + &w[2 * r + 1] * Complex64::from(4.0) + &w[2 * r + 2])
                * Complex64::from(h / 12.0);
            let next = &cumulative[r] + step;
            cumulative.push(next);
        }
        let total = cumulative[2 * self.panels].clone();
        let shift = self.monodromy_resolvent.map(|x| Complex64::new(x, 0.0)) * total;

        // G E_b at the half grid.
        let gv: Vec<DVector<Complex64>> = cumulative
            .iter()
            .enumerate()
            .map(|(r, x)| self.transports[2 * r].map(|v| Complex64::new(v, 0.0)) * (x + &shift))
            .collect();

        let simpson_weight = |r: usize| {
            if r == 0 || r == 2 * self.panels {
                1.0
            } else if r % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        Ok(targets
            .iter()
            .map(|a| {
                let mut acc = Complex64::default();
                for (r, y) in gv.iter().enumerate() {
                    let t = r as f64 * h / 2.0;
                    // E_a(t) = e^{2πikt} P(t) e_j, paired bilinearly.
                    let ea = self.transports[2 * r].column(a.axis - 1);
                    let dot: Complex64 = ea.iter().zip(y.iter()).map(|(p, y)| y * *p).sum();
                    acc += dot * phase(a.freq, t) * simpson_weight(r);
                }
                -acc * (h / 6.0)
            })
            .collect())
    }
}

/// One-off quadrature pairing with `panels` Simpson panels.
pub fn green_inner_quadrature(
    model: &LoopHolonomyModel,
    a: &BasisCovector,
    b: &BasisCovector,
    panels: usize,
) -> Result<Complex64> {
    GreenQuadrature::new(model, panels).pair(a, b)
}
