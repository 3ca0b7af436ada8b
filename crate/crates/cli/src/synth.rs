//! `synth` and `evaluate`.

use std::fmt::Write as _;

use anyhow::Context;

use oatrawl::corpus::{
    generate_corpus, load_truth, save_corpus, CorpusSpec, REACHABLE_DEPTH, RECORDS_FILE, TRUTH_FILE, WEB_DIR,
};
use oatrawl::metrics::{aggregate_advantage, apply_exclusions, Dimension};
use oatrawl::records::{apply_detections, load_detections, load_records, ArticleRecord, OaStatus};
use oatrawl::report::write_sdt;
use oatrawl::stats::ConfusionMatrix;

use crate::analyze::{audit_records, cmd_analyze, cmd_cohorts, cmd_correlate};
use crate::config::RunConfig;
use crate::detect::{cmd_detect, create_out, require_file, DETECTIONS_FILE};
use crate::exit::{ExitContext, Failure};

pub fn cmd_synth(cfg: &RunConfig) -> Result<(), Failure> {
    let spec_path = require_file(cfg.spec.as_ref(), "spec")?;
    let body = std::fs::read_to_string(&spec_path)
        .with_context(|| spec_path.display().to_string())
        .input()?;
    let mut spec: CorpusSpec = serde_json::from_str(&body)
        .with_context(|| format!("invalid corpus spec {}", spec_path.display()))
        .input()?;
    if let Some(seed) = cfg.seed {
        spec.seed = seed;
    }
    let corpus = generate_corpus(&spec).input()?;
    let out = create_out(cfg)?;
    save_corpus(&corpus, out).input()?;
    let mut resolved = serde_json::to_string_pretty(&spec).input()?;
    resolved.push('\n');
    std::fs::write(out.join("spec.json"), resolved).input()?;
    let oa = corpus.truth.iter().filter(|t| t.true_status == OaStatus::Oa).count();
    let reachable = corpus.truth.iter().filter(|t| t.reachable).count();
    println!(
        "synth: {} articles ({oa} with a full text, {reachable} reachable within depth {}) in {}",
        corpus.records.len(),
        REACHABLE_DEPTH,
        out.display()
    );
    Ok(())
}

fn pooled_advantage(records: &[ArticleRecord], cfg: &RunConfig) -> Result<Option<f64>, Failure> {
    let pooled: Vec<ArticleRecord> = records
        .iter()
        .map(|r| ArticleRecord {
            discipline: "ALL".into(),
            ..r.clone()
        })
        .collect();
    let (kept, _) = apply_exclusions(&pooled).input()?;
    Ok(aggregate_advantage(&kept, Dimension::Discipline, cfg.weighting)
        .input()?
        .first()
        .and_then(|r| r.advantage))
}

fn share(n: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * n as f64 / total as f64
    }
}

fn fmt_adv(a: Option<f64>) -> String {
    a.map(|v| format!("{:+.1}%", v * 100.0))
        .unwrap_or_else(|| "NO_DATA".into())
}

pub fn cmd_evaluate(cfg: &RunConfig) -> Result<(), Failure> {
    let corpus_dir = cfg
        .corpus
        .clone()
        .ok_or_else(|| Failure::from("missing `corpus` (flag --corpus or config key)".to_string()))?;
    if !corpus_dir.is_dir() {
        return Err(Failure::from(format!(
            "corpus directory {} does not exist",
            corpus_dir.display()
        )));
    }
    let out = create_out(cfg)?.to_path_buf();
    let mut run = cfg.clone();
    run.records = Some(corpus_dir.join(RECORDS_FILE));
    run.truth = Some(corpus_dir.join(TRUTH_FILE));
    run.mock_web = Some(corpus_dir.join(WEB_DIR));
    run.search_template = None;
    run.detections = None;
    run.fresh = true;
    cmd_detect(&run)?;
    run.detections = Some(out.join(DETECTIONS_FILE));
    cmd_analyze(&run)?;
    cmd_cohorts(&run)?;
    cmd_correlate(&run)?;

    let mut records = load_records(&require_file(run.records.as_ref(), "records")?).input()?;
    let detections = load_detections(&out.join(DETECTIONS_FILE)).input()?;
    let truth = load_truth(&require_file(run.truth.as_ref(), "truth")?).input()?;
    apply_detections(&mut records, &detections);
    let n = records.len();
    let detected_oa = records.iter().filter(|r| r.oa_status == OaStatus::Oa).count();
    let detected_noa = records.iter().filter(|r| r.oa_status == OaStatus::Noa).count();
    let true_oa = truth.iter().filter(|t| t.true_status == OaStatus::Oa).count();
    let reachable = truth.iter().filter(|t| t.reachable).count();

    let mut vs_reach = ConfusionMatrix::default();
    for (r, t) in records.iter().zip(&truth) {
        match (t.reachable, r.oa_status) {
            (true, OaStatus::Oa) => vs_reach.hits += 1,
            (true, _) => vs_reach.misses += 1,
            (false, OaStatus::Oa) => vs_reach.false_alarms += 1,
            (false, _) => vs_reach.correct_rejections += 1,
        }
    }

    let detected: Vec<ArticleRecord> = records
        .iter()
        .filter(|r| r.oa_status != OaStatus::Unknown)
        .cloned()
        .collect();
    let labeled: Vec<ArticleRecord> = records
        .iter()
        .zip(&truth)
        .map(|(r, t)| ArticleRecord {
            oa_status: t.true_status,
            ..r.clone()
        })
        .collect();

    let mut text = String::new();
    let _ = writeln!(text, "corpus: {} ({n} articles)", corpus_dir.display());
    let _ = writeln!(text, "detected OA: {detected_oa} ({:.1}%)", share(detected_oa, n));
    let _ = writeln!(text, "true OA: {true_oa} ({:.1}%)", share(true_oa, n));
    let _ = writeln!(text, "reachable OA: {reachable} ({:.1}%)", share(reachable, n));
    let _ = writeln!(
        text,
        "robot vs reachability: hits {}, misses {}, false alarms {}, correct rejections {}",
        vs_reach.hits, vs_reach.misses, vs_reach.false_alarms, vs_reach.correct_rejections
    );
    let _ = writeln!(
        text,
        "advantage (detected labels): {}",
        fmt_adv(pooled_advantage(&detected, &run)?)
    );
    let _ = writeln!(
        text,
        "advantage (true labels): {}",
        fmt_adv(pooled_advantage(&labeled, &run)?)
    );

    let sample = cfg.sample_size.min(detected_oa).min(detected_noa);
    if sample == 0 {
        let _ = writeln!(text, "audit: skipped (needs robot-OA and robot-NOA articles)");
    } else {
        let (outcome, sdt) = audit_records(&run, sample)?;
        write_sdt(&outcome.matrix, &sdt, &out.join("sdt.csv")).input()?;
        let m = outcome.matrix;
        let _ = writeln!(
            text,
            "audit ({sample}+{sample}): hits {}, misses {}, false alarms {}, correct rejections {}",
            m.hits, m.misses, m.false_alarms, m.correct_rejections
        );
        let _ = writeln!(
            text,
            "d' = {:.2}, beta = {:.2}{}",
            sdt.d_prime,
            sdt.beta,
            if sdt.correction_applied {
                " (log-linear correction applied)"
            } else {
                ""
            }
        );
    }
    std::fs::write(out.join("evaluation.txt"), &text).input()?;
    print!("{text}");
    Ok(())
}
