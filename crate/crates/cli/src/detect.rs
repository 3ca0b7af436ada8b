//! `detect`: runs the robot over every record with a resumable journal.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use oatrawl::corpus::{MockDocumentConverter, MockFetcher, MockWeb};
use oatrawl::records::{load_records, save_detections, write_jsonl, ArticleRecord, DetectionEvidence, OaStatus};
use oatrawl::robot::{
    Clock, CommandConverter, Converter, FetchLogEntry, Fetcher, HttpFetcher, HttpFetcherConfig, HttpSearchProvider,
    ManualClock, MockSearchProvider, RateLimitedFetcher, RateLimiter, Robot, SearchProvider, SystemClock,
};

use crate::config::RunConfig;
use crate::exit::{ExitContext, Failure};

/// Environment variable holding the external converter command template.
pub const CONVERTER_ENV: &str = "OATRAWL_CONVERTER";

pub const DETECTIONS_FILE: &str = "detections.jsonl";
pub const FETCH_LOG_FILE: &str = "fetch_log.jsonl";
pub const JOURNAL_FILE: &str = "detect.journal.jsonl";

/// Articles crawled between journal flushes.
const BATCH: usize = 64;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct JournalEntry {
    evidence: DetectionEvidence,
    fetch_log: Vec<FetchLogEntry>,
}

#[derive(Serialize)]
struct FetchLogLine<'a> {
    article_id: &'a str,
    #[serde(flatten)]
    entry: &'a FetchLogEntry,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DetectSummary {
    pub records: usize,
    pub oa: usize,
    pub noa: usize,
    pub unknown: usize,
}

pub fn require_file(path: Option<&PathBuf>, key: &str) -> Result<PathBuf, Failure> {
    let path = path.ok_or_else(|| {
        Failure::from(format!(
            "missing `{key}` (flag --{} or config key)",
            key.replace('_', "-")
        ))
    })?;
    if !path.is_file() {
        return Err(Failure::from(format!("{key} file {} does not exist", path.display())));
    }
    Ok(path.clone())
}

pub fn create_out(cfg: &RunConfig) -> Result<&Path, Failure> {
    std::fs::create_dir_all(&cfg.out)
        .with_context(|| format!("cannot create output directory {}", cfg.out.display()))
        .input()?;
    Ok(&cfg.out)
}

fn build_robot(cfg: &RunConfig) -> Result<Robot, Failure> {
    let env_converter: Option<Arc<dyn Converter>> =
        CommandConverter::from_env(CONVERTER_ENV, cfg.crawl.fetch_timeout).map(|c| Arc::new(c) as Arc<dyn Converter>);
    match (&cfg.mock_web, &cfg.search_template) {
        (Some(dir), None) => {
            let provider = MockSearchProvider::load(&dir.join("index.json")).input()?;
            let web = MockWeb::load(dir).input()?;
            // Mock crawls run on a frozen virtual clock so reruns are byte-identical.
            let clock: Arc<dyn Clock> = Arc::new(ManualClock::new());
            let fetcher = MockFetcher::unlogged(Arc::new(web), clock.clone());
            let converter = env_converter.unwrap_or_else(|| Arc::new(MockDocumentConverter));
            Ok(
                Robot::new(vec![Arc::new(provider)], Arc::new(fetcher), cfg.crawl.clone(), clock)
                    .with_converter(converter),
            )
        }
        (None, Some(template)) => {
            let clock: Arc<dyn Clock> = Arc::new(SystemClock);
            let mut http = HttpFetcherConfig {
                timeout: cfg.crawl.fetch_timeout,
                respect_robots: cfg.respect_robots,
                ..HttpFetcherConfig::default()
            };
            if let Some(ua) = &cfg.user_agent {
                http.user_agent = ua.clone();
            }
            let limiter = Arc::new(RateLimiter::new(cfg.crawl.per_host_rate, clock.clone()));
            let inner = HttpFetcher::new(http, clock.clone()).input()?;
            let fetcher: Arc<dyn Fetcher> = Arc::new(RateLimitedFetcher::new(inner, limiter));
            let provider = HttpSearchProvider::new(
                "live",
                template.clone(),
                cfg.result_pattern.as_deref(),
                &cfg.blocked_hosts,
                fetcher.clone(),
            )
            .input()?;
            let providers: Vec<Arc<dyn SearchProvider>> = vec![Arc::new(provider)];
            let robot = Robot::new(providers, fetcher, cfg.crawl.clone(), clock);
            Ok(match env_converter {
                Some(c) => robot.with_converter(c),
                None => robot,
            })
        }
        (Some(_), Some(_)) => Err(Failure::from(
            "configure either mock_web or search_template, not both".to_string(),
        )),
        (None, None) => Err(Failure::from(
            "no search provider configured: set mock_web (offline) or search_template (live)".to_string(),
        )),
    }
}

/// Reads the journal, keeping the last entry per article. A malformed final
/// line (an interrupted write) is ignored; malformed earlier lines are errors.
fn read_journal(path: &Path) -> anyhow::Result<HashMap<String, JournalEntry>> {
    let mut out = HashMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let file = File::open(path).with_context(|| path.display().to_string())?;
    let lines: Vec<String> = BufReader::new(file).lines().collect::<Result<_, _>>()?;
    let last = lines.len();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<JournalEntry>(line) {
            Ok(e) => {
                out.insert(e.evidence.article_id.clone(), e);
            }
            Err(_) if i + 1 == last => {}
            Err(e) => return Err(anyhow!("{}:{}: corrupt journal entry: {e}", path.display(), i + 1)),
        }
    }
    Ok(out)
}

/// Truncates a torn final line so appends start on a fresh line.
fn repair_journal(path: &Path) -> anyhow::Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let body = std::fs::read(path)?;
    if body.is_empty() || body.ends_with(b"\n") {
        return Ok(());
    }
    let keep = body.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    let f = OpenOptions::new().write(true).open(path)?;
    f.set_len(keep as u64)?;
    Ok(())
}

pub fn cmd_detect(cfg: &RunConfig) -> Result<DetectSummary, Failure> {
    let records_path = require_file(cfg.records.as_ref(), "records")?;
    let records = load_records(&records_path).input()?;
    let robot = build_robot(cfg)?;
    let out = create_out(cfg)?;
    let journal_path = out.join(JOURNAL_FILE);
    if cfg.fresh && journal_path.exists() {
        std::fs::remove_file(&journal_path).input()?;
    }
    repair_journal(&journal_path).input()?;
    let mut done = read_journal(&journal_path).input()?;

    // UNKNOWN verdicts from an earlier run are retried.
    let pending: Vec<&ArticleRecord> = records
        .iter()
        .filter(|r| done.get(&r.id).is_none_or(|e| e.evidence.verdict == OaStatus::Unknown))
        .collect();
    let journal = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&journal_path)
        .with_context(|| journal_path.display().to_string())
        .input()?;
    let mut journal = BufWriter::new(journal);
    for batch in pending.chunks(BATCH) {
        let results: Vec<JournalEntry> = batch
            .par_iter()
            .map(|r| {
                let d = robot.detect_or_unknown(r);
                JournalEntry {
                    evidence: d.evidence,
                    fetch_log: d.fetch_log,
                }
            })
            .collect();
        for entry in results {
            serde_json::to_writer(&mut journal, &entry).input()?;
            journal.write_all(b"\n").input()?;
            done.insert(entry.evidence.article_id.clone(), entry);
        }
        journal.flush().input()?;
    }

    let ordered: Vec<&JournalEntry> = records.iter().map(|r| &done[&r.id]).collect();
    let evidence: Vec<DetectionEvidence> = ordered.iter().map(|e| e.evidence.clone()).collect();
    let detections_path = cfg.detections.clone().unwrap_or_else(|| out.join(DETECTIONS_FILE));
    save_detections(&evidence, &detections_path).input()?;
    let log_lines: Vec<FetchLogLine> = ordered
        .iter()
        .flat_map(|e| {
            e.fetch_log.iter().map(|entry| FetchLogLine {
                article_id: &e.evidence.article_id,
                entry,
            })
        })
        .collect();
    write_jsonl(&log_lines, &out.join(FETCH_LOG_FILE)).input()?;

    let mut s = DetectSummary {
        records: records.len(),
        ..DetectSummary::default()
    };
    for e in &evidence {
        match e.verdict {
            OaStatus::Oa => s.oa += 1,
            OaStatus::Noa => s.noa += 1,
            OaStatus::Unknown => s.unknown += 1,
        }
    }
    println!(
        "detect: {} records; OA {}, NOA {}, UNKNOWN {}",
        s.records, s.oa, s.noa, s.unknown
    );
    if s.unknown > 0 {
        eprintln!("warning: {} records could not be classified (UNKNOWN)", s.unknown);
    }
    Ok(s)
}
