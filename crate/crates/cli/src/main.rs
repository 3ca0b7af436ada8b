//! `oatrawl`: detect open-access full texts, analyze citation advantage,
//! audit the detector and generate synthetic corpora.

mod analyze;
mod config;
mod detect;
mod exit;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{split_override, RunConfig};
use exit::Failure;

#[derive(Parser)]
#[command(
    name = "oatrawl",
    version,
    about = "Open-access detection and citation-advantage analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every record as OA or NOA by searching and crawling.
    Detect(Common),
    /// Percent OA and citation advantage by discipline, country, year and journal.
    Analyze(Common),
    /// Citation-range distributions of OA and NOA articles, yearly and pooled.
    Cohorts(Common),
    /// Year and citation-range correlations with t-test significance.
    Correlate(Common),
    /// Sample robot-OA and robot-NOA articles, score them against labels, report d' and beta.
    Audit(Common),
    /// Generate a synthetic corpus and mock web from a JSON spec.
    Synth(Common),
    /// Run detect, analyze, cohorts, correlate and audit on a synthetic corpus.
    Evaluate(Common),
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Drop records with UNKNOWN status instead of failing.
    #[arg(long)]
    allow_unknown: bool,
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    detections: Option<PathBuf>,
    /// Ground-truth labels (`ground_truth.jsonl`).
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Mock web directory holding `index.json` and `manifest.json`.
    #[arg(long)]
    mock_web: Option<PathBuf>,
    /// Corpus spec (JSON) for `synth`.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Corpus directory for `evaluate`.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Articles sampled per robot tag in `audit`.
    #[arg(long)]
    sample_size: Option<usize>,
    /// `unweighted` or `article`.
    #[arg(long)]
    weighting: Option<String>,
    /// Ignore an existing detection journal.
    #[arg(long)]
    fresh: bool,
    /// Any configuration key, as KEY=VALUE. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, Failure> {
        let input = Failure::from;
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path).map_err(input)?;
        }
        let path = |p: &PathBuf| p.to_string_lossy().into_owned();
        let mut flags: Vec<(String, String)> = Vec::new();
        let mut push = |k: &str, v: String| flags.push((k.to_string(), v));
        if let Some(v) = &self.out {
            push("out", path(v));
        }
        if let Some(v) = self.seed {
            push("seed", v.to_string());
        }
        if self.allow_unknown {
            push("allow_unknown", "true".into());
        }
        if self.fresh {
            push("fresh", "true".into());
        }
        for (key, value) in [
            ("records", &self.records),
            ("detections", &self.detections),
            ("truth", &self.truth),
            ("mock_web", &self.mock_web),
            ("spec", &self.spec),
            ("corpus", &self.corpus),
        ] {
            if let Some(v) = value {
                push(key, path(v));
            }
        }
        if let Some(v) = self.sample_size {
            push("sample_size", v.to_string());
        }
        if let Some(v) = &self.weighting {
            push("weighting", v.clone());
        }
        for o in &self.overrides {
            let (k, v) = split_override(o).map_err(input)?;
            flags.push((k, v));
        }
        for (k, v) in flags {
            cfg.apply(&k, &v, None).map_err(input)?;
        }
        cfg.validate().map_err(input)?;
        if let Some(n) = cfg.threads {
            // Fails only if a global pool already exists, which is harmless.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Detect(c) => detect::cmd_detect(&c.resolve()?).map(|_| ()),
        Command::Analyze(c) => analyze::cmd_analyze(&c.resolve()?),
        Command::Cohorts(c) => analyze::cmd_cohorts(&c.resolve()?),
        Command::Correlate(c) => analyze::cmd_correlate(&c.resolve()?),
        Command::Audit(c) => analyze::cmd_audit(&c.resolve()?).map(|_| ()),
        Command::Synth(c) => synth::cmd_synth(&c.resolve()?),
        Command::Evaluate(c) => synth::cmd_evaluate(&c.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
