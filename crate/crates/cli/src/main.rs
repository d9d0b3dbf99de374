use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use loopq::holonomy::{zeta_det_closed, zeta_det_special_values, zeta_fn_numeric, BasisCovector, LoopHolonomyModel};
use loopq::qside::{q_coefficient_oracle, q_fast_breakdown};
use loopq::simplex::{j_closed, j_oracle};
use loopq::topdegree::{loop_top_degree_breakdown, ReferenceFrame, SkewMatrix, WedgeWord};
use loopq::verifier::{sweep, verify_case, SweepConfig, SweepSummary, VerificationCase};

/// Default path of the `verify` config file when `--config` is absent.
const CONFIG_ENV: &str = "LOOPQ_CONFIG";

/// Central-difference step for `zeta-det --method numeric`.
const ZETA_FD_STEP: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "loopq", version, about = "Loop-space Pfaffians, zeta determinants and their verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated rotation angles in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "")]
    alphas: Vec<String>,
}

impl ModelArgs {
    fn model(&self) -> Result<LoopHolonomyModel> {
        let alphas = self
            .alphas
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad angle {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        Ok(LoopHolonomyModel::new(self.n, alphas)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaMethod {
    Closed,
    Special,
    Numeric,
}

#[derive(Subcommand)]
enum Command {
    /// Simplex integral of exp(2πi Σ k_a τ_a).
    Jint {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "")]
        k: Vec<String>,
        /// Print the exact Laurent polynomial in u = 1/(2πi) (default).
        #[arg(long, conflicts_with = "numeric")]
        exact: bool,
        /// Print a complex float instead.
        #[arg(long)]
        numeric: bool,
        /// Use the permutation-sum integrator instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Zeta-regularized determinant of the covariant derivative.
    ZetaDet {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "closed")]
        method: ZetaMethod,
    },
    /// Eigenvalues of the covariant derivative inside a disc.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        radius: f64,
    },
    /// Top-degree coefficient of exp(ω) ∧ word relative to the reference frame.
    Topside {
        #[command(flatten)]
        model: ModelArgs,
        /// Factors as "axis:freq,axis:freq", last factor first in the wedge.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        word: String,
    },
    /// Pfaffian of a skew-symmetric matrix read from a JSON file.
    Pfaffian {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Combinatorial functional q of a word.
    Qside {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        word: String,
        /// Use the permutation-sum Clifford evaluation.
        #[arg(long)]
        oracle: bool,
    },
    /// Three-way verification over seeded random cases or a single case.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long = "max-n")]
    max_n: Option<usize>,
    #[arg(long = "max-m")]
    max_m: Option<usize>,
    #[arg(long = "max-N")]
    max_word_len: Option<usize>,
    #[arg(long = "max-k")]
    max_k: Option<i64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Write JSON lines here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Skip the curated corpus.
    #[arg(long)]
    no_corpus: bool,
    /// JSON config with the same keys as the flags; defaults to $LOOPQ_CONFIG.
    #[arg(long)]
    config: Option<PathBuf>,
    /// A single case, e.g. '{"n":2,"alphas":[0.3333],"word":[[1,1],[1,-1]]}'.
    #[arg(long, conflicts_with_all = ["seed", "count", "max_n", "max_m", "max_word_len", "max_k", "config"])]
    case: Option<String>,
}

/// Config file contents; every key is optional and flags take precedence.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    seed: Option<u64>,
    count: Option<usize>,
    #[serde(alias = "max-n")]
    max_n: Option<usize>,
    #[serde(alias = "max-m")]
    max_m: Option<usize>,
    #[serde(rename = "max_N", alias = "max-N")]
    max_word_len: Option<usize>,
    #[serde(alias = "max-k")]
    max_k: Option<i64>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    #[serde(alias = "no-corpus")]
    no_corpus: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CaseSpec {
    n: usize,
    #[serde(default)]
    alphas: Vec<f64>,
    #[serde(default)]
    word: Vec<BasisCovector>,
    weight: Option<Complex64>,
    #[serde(default)]
    seed: u64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl From<&Entry> for Complex64 {
    fn from(e: &Entry) -> Self {
        match *e {
            Entry::Real(x) => Complex64::new(x, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename = "summary")]
struct SummaryLine<'a> {
    #[serde(flatten)]
    summary: &'a SweepSummary,
}

fn print_json(value: &impl Serialize) -> Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn parse_k(raw: &[String]) -> Result<Vec<i64>> {
    raw.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<i64>().with_context(|| format!("bad frequency {s:?}")))
        .collect()
}

fn jint(k: &[String], numeric: bool, oracle: bool) -> Result<()> {
    let k = parse_k(k)?;
    let value = if oracle { j_oracle(&k)? } else { j_closed(&k) };
    let method = if oracle { "oracle" } else { "closed" };
    if numeric {
        print_json(&json!({ "k": k, "method": method, "value": value.to_complex() }))
    } else {
        print_json(&json!({ "k": k, "method": method, "value": value.to_string() }))
    }
}

fn zeta_det(model: &LoopHolonomyModel, method: ZetaMethod) -> Result<()> {
    let (value, name) = match method {
        ZetaMethod::Closed => (zeta_det_closed(model), "closed"),
        ZetaMethod::Special => (zeta_det_special_values(model), "special"),
        ZetaMethod::Numeric => {
            let h = ZETA_FD_STEP;
            let derivative = (zeta_fn_numeric(model, h)? - zeta_fn_numeric(model, -h)?) / (2.0 * h);
            ((-derivative).exp(), "numeric")
        }
    };
    print_json(&json!({ "value": value, "method": name, "model": model }))
}

fn read_matrix(path: &Path) -> Result<SkewMatrix<Complex64>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let rows: Vec<Vec<Entry>> = serde_json::from_str(&text).context("matrix must be a JSON array of rows")?;
    let rows = rows.iter().map(|r| r.iter().map(Complex64::from).collect()).collect();
    Ok(SkewMatrix::from_rows(rows)?)
}

fn load_file(args: &VerifyArgs) -> Result<VerifyFile> {
    let path = args
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let Some(p) = path else {
        return Ok(VerifyFile::default());
    };
    let text = std::fs::read_to_string(&p).with_context(|| format!("reading config {}", p.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
}

fn sweep_config(args: &VerifyArgs, file: &VerifyFile) -> Result<SweepConfig> {
    let base = SweepConfig::default();
    let max_n = args.max_n.or(file.max_n).unwrap_or(base.max_n);
    let config = SweepConfig {
        seed: args.seed.or(file.seed).unwrap_or(base.seed),
        count: args.count.or(file.count).unwrap_or(base.count),
        max_n,
        // An unset plane bound follows a lowered dimension bound.
        max_m: args.max_m.or(file.max_m).unwrap_or(base.max_m.min(max_n / 2)),
        max_word_len: args.max_word_len.or(file.max_word_len).unwrap_or(base.max_word_len),
        max_k: args.max_k.or(file.max_k).unwrap_or(base.max_k),
        jobs: args.jobs.or(file.jobs),
        include_corpus: !(args.no_corpus || file.no_corpus.unwrap_or(false)),
    };
    config.validate()?;
    Ok(config)
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let file = if args.case.is_some() { VerifyFile::default() } else { load_file(args)? };
    let out = args.out.clone().or_else(|| file.out.clone());
    let mut sink: Box<dyn Write> = match &out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let summary = if let Some(raw) = &args.case {
        let spec: CaseSpec = serde_json::from_str(raw).context("parsing --case")?;
        let mut word = WedgeWord::new(spec.word);
        if let Some(w) = spec.weight {
            word = word.with_weight(w);
        }
        let case = VerificationCase {
            model: LoopHolonomyModel::new(spec.n, spec.alphas)?,
            word,
            seed: spec.seed,
        };
        let report = verify_case(&case);
        writeln!(sink, "{}", serde_json::to_string(&report)?)?;
        SweepSummary {
            total: 1,
            passed: usize::from(report.pass),
            max_rel_diff: report.max_rel_diff(),
        }
    } else {
        let config = sweep_config(args, &file)?;
        let mut write_err = None;
        let summary = sweep(&config, |r| {
            if write_err.is_none() {
                if let Err(e) = serde_json::to_string(r).map_err(io::Error::from).and_then(|s| writeln!(sink, "{s}")) {
                    write_err = Some(e);
                }
            }
        })?;
        if let Some(e) = write_err {
            return Err(e.into());
        }
        summary
    };
    let line = serde_json::to_string(&SummaryLine { summary: &summary })?;
    writeln!(sink, "{line}")?;
    sink.flush()?;
    drop(sink);
    if out.is_some() {
        println!("{line}");
    }
    Ok(summary.passed == summary.total)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Jint { k, numeric, oracle, .. } => jint(&k, numeric, oracle)?,
        Command::ZetaDet { model, method } => zeta_det(&model.model()?, method)?,
        Command::Spectrum { model, radius } => {
            if radius.is_nan() || radius <= 0.0 {
                bail!("radius must be positive");
            }
            let model = model.model()?;
            let eigenvalues: Vec<_> = model
                .spectrum(radius)
                .iter()
                .map(|e| json!({ "eigenvalue": e.eigenvalue(), "frequency": e.frequency, "multiplicity": e.multiplicity }))
                .collect();
            print_json(&json!({ "model": model, "radius": radius, "eigenvalues": eigenvalues }))?;
        }
        Command::Topside { model, word } => {
            let model = model.model()?;
            let word: WedgeWord = word.parse()?;
            let b = loop_top_degree_breakdown(&ReferenceFrame::new(model.clone()), &word)?;
            print_json(&json!({ "model": model, "word": word.factors, "value": b.value, "breakdown": b }))?;
        }
        Command::Pfaffian { matrix } => {
            let a = read_matrix(&matrix)?;
            print_json(&json!({ "size": a.size(), "value": a.pfaffian(), "determinant": a.determinant() }))?;
        }
        Command::Qside { model, word, oracle } => {
            let model = model.model()?;
            let word: WedgeWord = word.parse()?;
            let frame = ReferenceFrame::new(model.clone());
            if oracle {
                let value = q_coefficient_oracle(&frame, &word)?;
                print_json(&json!({ "model": model, "word": word.factors, "method": "oracle", "value": value }))?;
            } else {
                let b = q_fast_breakdown(&frame, &word)?;
                print_json(&json!({ "model": model, "word": word.factors, "method": "fast", "value": b.value, "breakdown": b }))?;
            }
        }
        Command::Verify(args) => return verify(&args),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
