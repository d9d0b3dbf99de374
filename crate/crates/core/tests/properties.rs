use num_complex::Complex64;
use num_traits::{One, Zero};
use proptest::prelude::*;

use loopq::clifford::{CliffordElement, Signature};
use loopq::exactnum::{rational, LaurentU, PolyExp};
use loopq::holonomy::{green_inner, BasisCovector, LoopHolonomyModel};
use loopq::qside::{q_coefficient_fast, q_coefficient_oracle};
use loopq::simplex::{j_closed, j_oracle};
use loopq::topdegree::{
    loop_top_degree, loop_top_degree_breakdown, pfaffian_sq_is_det, ReferenceFrame, SkewMatrix, WedgeWord,
};

const TOL: f64 = 1e-12;

fn laurent() -> impl Strategy<Value = LaurentU> {
    prop::collection::vec((-3i32..=3, -9i64..=9, 1i64..=6), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(LaurentU::zero(), |acc, (p, num, den)| acc + LaurentU::monomial(rational(num, den), p))
    })
}

fn polyexp() -> impl Strategy<Value = PolyExp> {
    prop::collection::vec((-3i64..=3, prop::collection::vec(laurent(), 0..3)), 0..3).prop_map(|terms| {
        terms
            .into_iter()
            .fold(PolyExp::zero(), |acc, (q, poly)| acc.add(&PolyExp::term(q, poly)))
    })
}

fn model(max_n: usize) -> impl Strategy<Value = LoopHolonomyModel> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0.05f64..0.95, 0..=n / 2)))
        .prop_map(|(n, alphas)| LoopHolonomyModel::new(n, alphas).unwrap())
}

fn model_and_word(max_n: usize, max_len: usize, max_k: i64) -> impl Strategy<Value = (LoopHolonomyModel, WedgeWord)> {
    model(max_n).prop_flat_map(move |m| {
        let n = m.n();
        let word = prop::collection::vec((1..=n, -max_k..=max_k), 0..=max_len);
        (Just(m), word.prop_map(|w| WedgeWord::from_pairs(&w)))
    })
}

fn clifford(n: usize, sig: Signature) -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec((0u32..(1 << n), -2.0f64..2.0, -2.0f64..2.0), 0..6).prop_map(move |terms| {
        terms.into_iter().fold(CliffordElement::zero(n, sig), |acc, (mask, re, im)| {
            &acc + &CliffordElement::blade(n, sig, mask, Complex64::new(re, im))
        })
    })
}

fn homogeneous(n: usize, grade: u32) -> impl Strategy<Value = CliffordElement> {
    let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() == grade).collect();
    prop::collection::vec((prop::sample::select(masks), -2.0f64..2.0), 1..4).prop_map(move |terms| {
        terms.into_iter().fold(CliffordElement::zero(n, Signature::Negative), |acc, (mask, c)| {
            &acc + &CliffordElement::blade(n, Signature::Negative, mask, Complex64::new(c, 0.0))
        })
    })
}

fn cl_close(a: &CliffordElement, b: &CliffordElement) -> bool {
    (0u32..(1 << a.dim())).all(|m| (a.coefficient(m) - b.coefficient(m)).norm() < 1e-9)
}

fn skew(n: usize) -> impl Strategy<Value = SkewMatrix<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
        SkewMatrix::from_upper(n, |i, j| Complex64::new(v[i * n + j].0, v[i * n + j].1))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, LaurentU::zero());
        prop_assert_eq!(&a * &LaurentU::one(), a.clone());
    }

    #[test]
    fn laurent_to_complex_is_a_homomorphism(a in laurent(), b in laurent()) {
        let (x, y) = (a.to_complex(), b.to_complex());
        let scale = 1.0 + x.norm() * y.norm() + x.norm() + y.norm();
        prop_assert!(((&a + &b).to_complex() - (x + y)).norm() < TOL * scale);
        prop_assert!(((&a * &b).to_complex() - x * y).norm() < TOL * scale);
    }

    #[test]
    fn differentiate_inverts_integrate(f in polyexp()) {
        prop_assert_eq!(f.integrate().differentiate(), f);
    }

    #[test]
    fn integral_vanishes_at_zero(f in polyexp()) {
        prop_assert!(f.integrate().eval(0.0).norm() < TOL);
    }

    #[test]
    fn simplex_antisymmetry(k in prop::collection::vec(-3i64..=3, 2..=5), i in 0usize..5, j in 0usize..5) {
        let (i, j) = (i % k.len(), j % k.len());
        prop_assume!(i != j);
        let mut s = k.clone();
        s.swap(i, j);
        prop_assert_eq!(j_oracle(&s).unwrap(), -j_oracle(&k).unwrap());
        prop_assert_eq!(j_closed(&s), -j_closed(&k));
    }

    #[test]
    fn simplex_vanishing(k in prop::collection::vec(-3i64..=3, 1..=6)) {
        let zeros = k.iter().filter(|&&x| x == 0).count();
        let mut sorted = k.clone();
        sorted.sort();
        sorted.dedup();
        let odd_nonzero = zeros == 0 && k.len() % 2 == 1;
        if zeros >= 2 || odd_nonzero || sorted.len() < k.len() {
            prop_assert!(j_closed(&k).is_zero());
        }
    }

    #[test]
    fn simplex_homogeneity(k in prop::collection::vec(-3i64..=3, 0..=5)) {
        // Each nonzero pair contributes one power of u; a lone zero contributes none.
        let j = j_oracle(&k).unwrap();
        if let Some((_, power)) = j.as_monomial() {
            prop_assert_eq!(power, k.len() as i32 / 2);
        } else {
            prop_assert!(j.is_zero());
        }
    }

    #[test]
    fn clifford_associative(a in clifford(4, Signature::Negative), b in clifford(4, Signature::Negative), c in clifford(4, Signature::Negative)) {
        prop_assert!(cl_close(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
    }

    #[test]
    fn clifford_generators_anticommute(i in 1usize..=5, j in 1usize..=5, positive in any::<bool>()) {
        let sig = if positive { Signature::Positive } else { Signature::Negative };
        let (ei, ej) = (CliffordElement::generator(5, sig, i), CliffordElement::generator(5, sig, j));
        let anti = &(&ei * &ej) + &(&ej * &ei);
        let square = if positive { 2.0 } else { -2.0 };
        let expected = if i == j { CliffordElement::scalar(5, sig, Complex64::new(square, 0.0)) } else { CliffordElement::zero(5, sig) };
        prop_assert!(cl_close(&anti, &expected));
    }

    #[test]
    fn supertrace_is_super_symmetric((ga, gb, a, b) in (0u32..=4, 0u32..=4)
        .prop_flat_map(|(ga, gb)| (Just(ga), Just(gb), homogeneous(4, ga), homogeneous(4, gb))))
    {
        let sign = if (ga * gb) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(((&a * &b).supertrace() - (&b * &a).supertrace() * sign).norm() < 1e-9);
    }

    #[test]
    fn rotor_conjugation_rotates_by_the_holonomy(alpha in 0.01f64..0.99) {
        let (s, c) = (2.0 * std::f64::consts::PI * alpha).sin_cos();
        let rotated = |sig| {
            let e = |j| CliffordElement::generator(2, sig, j);
            &e(1).scale(Complex64::new(c, 0.0)) + &e(2).scale(Complex64::new(s, 0.0))
        };
        let m = LoopHolonomyModel::new(2, vec![alpha]).unwrap();
        let h = m.spinor_holonomy();
        let e1 = CliffordElement::generator(2, Signature::Negative, 1);
        prop_assert!(cl_close(&(&(&h * &e1) * &h.reverse()), &rotated(Signature::Negative)));

        // With e² = +1 the same rotor acts by R⁻¹ a R.
        let (sh, ch) = (std::f64::consts::PI * alpha).sin_cos();
        let pos = Signature::Positive;
        let r = &CliffordElement::scalar(2, pos, Complex64::new(ch, 0.0))
            + &CliffordElement::blade(2, pos, 0b11, Complex64::new(sh, 0.0));
        let e1 = CliffordElement::generator(2, pos, 1);
        prop_assert!(cl_close(&(&(&r.reverse() * &e1) * &r), &rotated(pos)));
    }

    #[test]
    fn spectrum_is_symmetric(m in model(8), radius in 0.5f64..40.0) {
        let entries = m.spectrum(radius);
        let nonzero: usize = entries.iter().filter(|e| e.frequency.abs() > 1e-12).map(|e| e.multiplicity).sum();
        prop_assert_eq!(nonzero % 2, 0);
        for e in &entries {
            prop_assert!(entries.iter().any(|o| (o.frequency + e.frequency).abs() < 1e-12 && o.multiplicity == e.multiplicity));
        }
    }

    #[test]
    fn green_is_antisymmetric(m in model(6), a in (1usize..=6, -3i64..=3), b in (1usize..=6, -3i64..=3)) {
        let (a, b) = (BasisCovector::new(a.0.min(m.n()), a.1), BasisCovector::new(b.0.min(m.n()), b.1));
        prop_assume!(!a.is_kernel_mode(&m) && !b.is_kernel_mode(&m));
        let ab = green_inner(&m, &a, &b).unwrap();
        let ba = green_inner(&m, &b, &a).unwrap();
        prop_assert!((ab + ba).norm() < TOL);
    }

    #[test]
    fn pfaffian_of_direct_sum(a in skew(4), b in skew(2)) {
        let lhs = a.direct_sum(&b).pfaffian();
        prop_assert!((lhs - a.pfaffian() * b.pfaffian()).norm() < 1e-12);
    }

    #[test]
    fn pfaffian_squares_to_determinant(a in skew(6)) {
        prop_assert!(pfaffian_sq_is_det(&a));
    }

    #[test]
    fn swapping_factors_negates((m, w) in model_and_word(5, 4, 2), i in 0usize..4, j in 0usize..4) {
        prop_assume!(w.len() >= 2);
        let (i, j) = (i % w.len(), j % w.len());
        prop_assume!(i != j);
        let mut swapped = w.clone();
        swapped.factors.swap(i, j);
        let f = ReferenceFrame::new(m);
        let top = (loop_top_degree(&f, &w).unwrap(), loop_top_degree(&f, &swapped).unwrap());
        let q = (q_coefficient_fast(&f, &w).unwrap(), q_coefficient_fast(&f, &swapped).unwrap());
        prop_assert!((top.0 + top.1).norm() < TOL);
        prop_assert!((q.0 + q.1).norm() < TOL);
    }

    #[test]
    fn fast_matches_oracle((m, w) in model_and_word(6, 5, 2)) {
        let f = ReferenceFrame::new(m);
        let fast = q_coefficient_fast(&f, &w).unwrap();
        let oracle = q_coefficient_oracle(&f, &w).unwrap();
        let top = loop_top_degree(&f, &w).unwrap();
        let scale = 1.0 + oracle.norm();
        prop_assert!((fast - oracle).norm() < 1e-9 * scale);
        prop_assert!((top - oracle).norm() < 1e-9 * scale);
    }

    #[test]
    fn weight_scales_linearly((m, w) in model_and_word(5, 4, 2), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let c = Complex64::new(re, im);
        let f = ReferenceFrame::new(m);
        let weighted = w.clone().with_weight(c);
        for eval in [q_coefficient_fast, q_coefficient_oracle, loop_top_degree] {
            let (x, y) = (eval(&f, &w).unwrap(), eval(&f, &weighted).unwrap());
            prop_assert!((y - x * c).norm() < 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn eta0_closed_form_on_sorted_words(
        m in model(6),
        plane_odd in prop::collection::vec(any::<bool>(), 3),
        kernel_pairs in prop::collection::vec(0usize..=1, 6),
        kernel_beta in prop::collection::vec(0usize..3, 6),
    ) {
        // Sorted words with equal count parities per plane and, per kernel axis,
        // an odd count holding exactly one zero mode at 1-based position β_j.
        let mut factors: Vec<(usize, i64)> = Vec::new();
        for (j, &odd) in plane_odd.iter().enumerate().take(m.m()) {
            let count = if odd { 1 } else { 2 };
            for axis in [2 * j + 1, 2 * j + 2] {
                factors.extend((1..=count).map(|k| (axis, k)));
            }
        }
        let mut exponent = 0usize;
        for (i, axis) in (2 * m.m() + 1..=m.n()).enumerate() {
            let pairs = kernel_pairs[i];
            let beta = kernel_beta[i] % (2 * pairs + 1) + 1;
            let mut on_axis: Vec<(usize, i64)> = (1..=pairs as i64).flat_map(|k| [(axis, k), (axis, -k)]).collect();
            on_axis.insert(beta - 1, (axis, 0));
            exponent += beta - 1;
            factors.extend(on_axis);
        }
        let word = WedgeWord::from_pairs(&factors);
        let b = loop_top_degree_breakdown(&ReferenceFrame::new(m), &word).unwrap();
        prop_assert_eq!(b.eta0, if exponent.is_multiple_of(2) { 1 } else { -1 });
    }
}

#[test]
fn elimination_matches_development_beyond_the_cutoff() {
    let n = 14;
    let a = SkewMatrix::from_upper(n, |i, j| Complex64::new(((i * 7 + j * 3) % 11) as f64 / 11.0 - 0.4, ((i + 2 * j) % 5) as f64 / 5.0 - 0.3));
    let dev = a.pfaffian_development();
    let elim = a.pfaffian_elimination();
    assert!((dev - elim).norm() < 1e-9 * (1.0 + dev.norm()), "{dev} vs {elim}");
    assert!(pfaffian_sq_is_det(&a));
}

/// With `e² = +1` the literal Clifford oracle disagrees with the top degree
/// by a sign already for the word `E_{1,1} ∧ E_{1,−1}`.
#[test]
fn positive_signature_breaks_the_identity() {
    let m = LoopHolonomyModel::new(2, vec![1.0 / 3.0]).unwrap();
    let f = ReferenceFrame::new(m.clone());
    let word = WedgeWord::from_pairs(&[(1, 1), (1, -1)]);
    let top = loop_top_degree(&f, &word).unwrap();
    let u = Complex64::new(0.0, -1.0 / (2.0 * std::f64::consts::PI));
    assert!((top - u * 3f64.sqrt()).norm() < TOL);

    let q_with = |sig: Signature| {
        let (s, c) = (std::f64::consts::PI / 3.0).sin_cos();
        let h = &CliffordElement::scalar(2, sig, Complex64::new(c, 0.0))
            + &CliffordElement::blade(2, sig, 0b11, Complex64::new(s, 0.0));
        // Σ_σ sgn σ I(σ) e₁e₁ with the integral taken in θ order (last factor first).
        let j = j_oracle(&[-1, 1]).unwrap().to_complex();
        let e1 = CliffordElement::generator(2, sig, 1);
        let sum = (&e1 * &e1).scale(j);
        (&h * &sum).supertrace() * 0.5
    };
    assert!((q_with(Signature::Negative) - top).norm() < TOL);
    assert!((q_with(Signature::Negative) - q_coefficient_oracle(&f, &word).unwrap()).norm() < TOL);
    assert!((q_with(Signature::Positive) + top).norm() < TOL);
}
