//! Three-way check of `q(θ) = [e^ω ∧ θ]_top` on seeded random and curated cases.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::holonomy::{BasisCovector, LoopHolonomyModel};
use crate::qside::{q_coefficient_oracle, q_fast_breakdown, ORACLE_MAX_N};
use crate::topdegree::{loop_top_degree_breakdown, ReferenceFrame, WedgeWord};

/// Pairwise agreement threshold: `|x − y| ≤ REL_TOL · (1 + max(|x|, |y|))`.
pub const REL_TOL: f64 = 1e-9;

/// Angles are drawn from `(ALPHA_MARGIN, 1 − ALPHA_MARGIN)`.
pub const ALPHA_MARGIN: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub model: LoopHolonomyModel,
    pub word: WedgeWord,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub eta0: i32,
    pub sort_sign: i32,
    pub kernel_pairing: f64,
    pub axis_counts: Vec<usize>,
    pub axis_integrals: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: u64,
    pub n: usize,
    pub alphas: Vec<f64>,
    pub word: Vec<BasisCovector>,
    pub q_fast: Complex64,
    pub q_oracle: Complex64,
    pub top: Complex64,
    /// `[fast−oracle, fast−top, oracle−top]`.
    pub abs_diffs: [f64; 3],
    pub rel_diffs: [f64; 3],
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<Diagnostics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CaseReport {
    pub fn max_rel_diff(&self) -> f64 {
        self.rel_diffs.iter().copied().fold(0.0, f64::max)
    }
}

fn rel_diff(x: Complex64, y: Complex64) -> (f64, f64) {
    let abs = (x - y).norm();
    (abs, abs / (1.0 + x.norm().max(y.norm())))
}

/// Evaluates all three paths; errors are recorded in the report.
pub fn verify_case(case: &VerificationCase) -> CaseReport {
    let frame = ReferenceFrame::new(case.model.clone());
    let mut report = CaseReport {
        name: None,
        seed: case.seed,
        n: case.model.n(),
        alphas: case.model.alphas().to_vec(),
        word: case.word.factors.clone(),
        q_fast: Complex64::default(),
        q_oracle: Complex64::default(),
        top: Complex64::default(),
        abs_diffs: [f64::NAN; 3],
        rel_diffs: [f64::NAN; 3],
        pass: false,
        diagnostics: None,
        error: None,
    };
    let evaluated = (|| -> Result<()> {
        let fast = q_fast_breakdown(&frame, &case.word)?;
        let oracle = q_coefficient_oracle(&frame, &case.word)?;
        let top = loop_top_degree_breakdown(&frame, &case.word)?;
        report.q_fast = fast.value;
        report.q_oracle = oracle;
        report.top = top.value;
        let pairs = [(fast.value, oracle), (fast.value, top.value), (oracle, top.value)];
        for (i, (x, y)) in pairs.into_iter().enumerate() {
            (report.abs_diffs[i], report.rel_diffs[i]) = rel_diff(x, y);
        }
        report.pass = report.rel_diffs.iter().all(|r| *r <= REL_TOL);
        report.diagnostics = Some(Diagnostics {
            eta0: top.eta0,
            sort_sign: fast.sort_sign,
            kernel_pairing: top.kernel_pairing,
            axis_counts: fast.axis_counts,
            axis_integrals: fast.axis_integrals,
        });
        Ok(())
    })();
    if let Err(e) = evaluated {
        report.error = Some(e.to_string());
    }
    report
}

/// Bounds and options for a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub seed: u64,
    pub count: usize,
    pub max_n: usize,
    pub max_m: usize,
    #[serde(rename = "max_N")]
    pub max_word_len: usize,
    pub max_k: i64,
    pub jobs: Option<usize>,
    pub include_corpus: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            count: 500,
            max_n: 8,
            max_m: 4,
            max_word_len: 6,
            max_k: 3,
            jobs: None,
            include_corpus: true,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidBounds(msg));
        if !(crate::holonomy::MIN_DIM..=crate::holonomy::MAX_DIM).contains(&self.max_n) {
            return bad(format!("max_n = {} outside 2..=12", self.max_n));
        }
        if 2 * self.max_m > self.max_n {
            return bad(format!("max_m = {} exceeds max_n / 2", self.max_m));
        }
        if self.max_word_len > ORACLE_MAX_N {
            return bad(format!("max_N = {} exceeds {ORACLE_MAX_N}", self.max_word_len));
        }
        if self.max_k < 0 {
            return bad(format!("max_k = {} is negative", self.max_k));
        }
        if self.jobs == Some(0) {
            return bad("jobs must be positive".into());
        }
        Ok(())
    }
}

/// `count` cases; case `i` is rebuilt from its own `seed` by [`case_from_seed`].
pub fn generate_cases(config: &SweepConfig, count: usize) -> Result<Vec<VerificationCase>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    (0..count).map(|_| case_from_seed(config, rng.random())).collect()
}

/// Draws a model and a word. Roughly half of the words are built to satisfy
/// the non-vanishing patterns; the rest are uniform over axes and frequencies.
pub fn case_from_seed(config: &SweepConfig, seed: u64) -> Result<VerificationCase> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=config.max_n);
    let m = rng.random_range(0..=config.max_m.min(n / 2));
    let alphas = (0..m)
        .map(|_| rng.random_range(ALPHA_MARGIN..1.0 - ALPHA_MARGIN))
        .collect();
    let model = LoopHolonomyModel::new(n, alphas)?;
    let len = rng.random_range(0..=config.max_word_len);
    let structured = rng.random_bool(0.5) && model.d() <= len && config.max_k > 0;
    let factors = if structured {
        structured_word(&model, len, config.max_k, &mut rng)
    } else {
        (0..len)
            .map(|_| BasisCovector::new(rng.random_range(1..=n), rng.random_range(-config.max_k..=config.max_k)))
            .collect()
    };
    Ok(VerificationCase {
        model,
        word: WedgeWord::new(factors),
        seed,
    })
}

/// One zero mode per kernel axis, zero modes on both axes of some planes,
/// then `±k` pairs on random axes, shuffled.
fn structured_word(model: &LoopHolonomyModel, len: usize, max_k: i64, rng: &mut ChaCha8Rng) -> Vec<BasisCovector> {
    let mut factors: Vec<BasisCovector> = (2 * model.m() + 1..=model.n()).map(|j| BasisCovector::new(j, 0)).collect();
    for plane in 0..model.m() {
        if factors.len() + 2 <= len && rng.random_bool(0.5) {
            factors.push(BasisCovector::new(2 * plane + 1, 0));
            factors.push(BasisCovector::new(2 * plane + 2, 0));
        }
    }
    while factors.len() + 2 <= len {
        let axis = rng.random_range(1..=model.n());
        let k = rng.random_range(1..=max_k) * if rng.random_bool(0.5) { 1 } else { -1 };
        factors.push(BasisCovector::new(axis, k));
        factors.push(BasisCovector::new(axis, -k));
    }
    factors.shuffle(rng);
    factors
}

/// A hand-checked case with its known value.
#[derive(Clone, Debug)]
pub struct CuratedCase {
    pub name: &'static str,
    pub case: VerificationCase,
    pub expected: Complex64,
}

/// Deterministic cases with values worked out by hand.
pub fn curated_corpus() -> Vec<CuratedCase> {
    use std::f64::consts::PI;
    let u = Complex64::new(0.0, -1.0 / (2.0 * PI));
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let entry = |name, n, alphas: &[f64], word: &[(usize, i64)], expected| CuratedCase {
        name,
        case: VerificationCase {
            model: LoopHolonomyModel::new(n, alphas.to_vec()).expect("curated model is valid"),
            word: WedgeWord::from_pairs(word),
            seed: 0,
        },
        expected,
    };
    let c = |x: f64| Complex64::new(x, 0.0);
    vec![
        entry("plane pair", 2, &[1.0 / 3.0], &[(1, 1), (1, -1)], u * r3),
        entry("reversed plane pair", 2, &[1.0 / 3.0], &[(1, -1), (1, 1)], -u * r3),
        entry("kernel zero mode", 3, &[0.25], &[(3, 0)], c(r2)),
        entry("empty word, even n", 2, &[1.0 / 3.0], &[], c(r3)),
        entry("empty word, two planes", 4, &[0.5, 1.0 / 6.0], &[], c(2.0)),
        entry("empty word with kernel", 4, &[0.3], &[], c(0.0)),
        entry("odd word, even n", 2, &[0.3], &[(1, 2)], c(0.0)),
        entry("repeated factor", 3, &[0.25], &[(1, 2), (3, 0), (1, 2)], c(0.0)),
        entry("two kernel modes, one missing", 3, &[], &[(1, 0), (2, 1)], c(0.0)),
        // ½ cot(π/4)·2 sin(π/4) on the plane zero modes.
        entry("plane zero modes", 2, &[0.25], &[(1, 0), (2, 0)], c(0.5 * r2)),
        // 2 sin(π/4) · u/2.
        entry("kernel mode with plane pair", 3, &[0.25], &[(3, 0), (1, 2), (1, -2)], u * (r2 / 2.0)),
        entry("pure kernel, two axes", 2, &[], &[(2, 0), (1, 0)], c(-1.0)),
    ]
}

/// Aggregate over a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub total: usize,
    pub passed: usize,
    pub max_rel_diff: f64,
}

/// Reports for the curated corpus; a case also fails if any path misses its expected value.
pub fn verify_corpus() -> Vec<CaseReport> {
    curated_corpus()
        .into_iter()
        .map(|cc| {
            let mut r = verify_case(&cc.case);
            r.name = Some(cc.name.to_string());
            let (_, rel) = rel_diff(r.q_fast, cc.expected);
            if rel > REL_TOL {
                r.pass = false;
                r.error.get_or_insert_with(|| format!("expected {}, got {}", cc.expected, r.q_fast));
            }
            r
        })
        .collect()
}

/// Runs the corpus (when enabled) and `config.count` generated cases; `sink`
/// receives every report in case order.
pub fn sweep(config: &SweepConfig, mut sink: impl FnMut(&CaseReport)) -> Result<SweepSummary> {
    let cases = generate_cases(config, config.count)?;
    let run = || cases.par_iter().map(verify_case).collect::<Vec<_>>();
    let generated = match config.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidBounds(e.to_string()))?
            .install(run),
        None => run(),
    };
    let mut reports = if config.include_corpus { verify_corpus() } else { Vec::new() };
    reports.extend(generated);
    let mut summary = SweepSummary {
        total: 0,
        passed: 0,
        max_rel_diff: 0.0,
    };
    for r in &reports {
        sink(r);
        summary.total += 1;
        summary.passed += usize::from(r.pass);
        summary.max_rel_diff = summary.max_rel_diff.max(r.max_rel_diff());
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        for cc in curated_corpus().into_iter().take(3) {
            let r = verify_case(&cc.case);
            assert!(r.pass, "{}: {r:?}", cc.name);
            assert!((r.top - cc.expected).norm() < 1e-12);
        }
        let odd = VerificationCase {
            model: LoopHolonomyModel::new(2, vec![0.3]).unwrap(),
            word: WedgeWord::from_pairs(&[(1, 1), (2, 0), (1, -1)]),
            seed: 0,
        };
        let r = verify_case(&odd);
        assert!(r.pass && r.q_fast.norm() == 0.0 && r.top.norm() == 0.0);
    }

    #[test]
    fn corpus_passes() {
        for r in verify_corpus() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn generation_is_deterministic_and_bounded() {
        let config = SweepConfig::default();
        assert!(generate_cases(&config, 0).unwrap().is_empty());
        let a = generate_cases(&config, 50).unwrap();
        assert_eq!(a, generate_cases(&config, 50).unwrap());
        for case in &a {
            assert!(case.model.n() <= 8 && case.model.m() <= 4 && case.word.len() <= 6);
            assert!(case.word.factors.iter().all(|f| f.freq.abs() <= 3));
            assert_eq!(case, &case_from_seed(&config, case.seed).unwrap());
        }
    }

    #[test]
    fn invalid_bounds() {
        let config = SweepConfig { max_word_len: 9, ..SweepConfig::default() };
        assert!(matches!(generate_cases(&config, 1), Err(Error::InvalidBounds(_))));
        let config = SweepConfig { max_m: 5, ..SweepConfig::default() };
        assert!(matches!(generate_cases(&config, 1), Err(Error::InvalidBounds(_))));
    }

    #[test]
    fn errors_are_reported() {
        let case = VerificationCase {
            model: LoopHolonomyModel::new(2, vec![0.3]).unwrap(),
            word: WedgeWord::from_pairs(&[(5, 0)]),
            seed: 0,
        };
        let r = verify_case(&case);
        assert!(!r.pass && r.error.is_some());
    }
}
