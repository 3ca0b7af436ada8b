//! Synthetic corpora: seeded article generation, a mock web with decoys,
//! ground-truth reachability and the sampled audit.

mod audit;
mod docs;
mod generate;
mod reach;
pub mod rng;
mod spec;
mod web;

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::records::{read_jsonl, save_records, write_jsonl, OaStatus, RecordError};
use crate::stats::StatsError;

pub use audit::{run_audit, AuditOutcome};
pub use generate::{
    generate_corpus, generate_with_scenarios, Corpus, FullTextFormat, GroundTruth, Scenario, AD_HOST, REACHABLE_DEPTH,
};
pub use reach::{dangling_links, page_hrefs, reachable_full_text};
pub use spec::{
    CitationModel, CorpusSpec, DecoySpec, OaProbability, YearRange, DEFAULT_COUNTRIES, DEFAULT_DISCIPLINES,
};
pub use web::{
    encode_document, MockDocumentConverter, MockFetcher, MockPage, MockWeb, PageRole, MOCK_DOMAIN, PDF_MAGIC, PS_MAGIC,
};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("invalid corpus spec: {0}")]
    Spec(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid corpus data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Records(#[from] RecordError),
    #[error("audit needs {requested} robot-{tag} articles but only {available} are available")]
    InsufficientSample {
        tag: OaStatus,
        available: usize,
        requested: usize,
    },
    #[error("no detection for article `{0}`")]
    MissingDetection(String),
    #[error("no ground truth for article `{0}`")]
    MissingTruth(String),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CorpusError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        CorpusError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub const RECORDS_FILE: &str = "records.jsonl";
pub const TRUTH_FILE: &str = "ground_truth.jsonl";
pub const WEB_DIR: &str = "mockweb";

/// Writes `records.jsonl`, `ground_truth.jsonl` and `mockweb/` under `dir`.
pub fn save_corpus(corpus: &Corpus, dir: &Path) -> Result<(), CorpusError> {
    std::fs::create_dir_all(dir).map_err(|e| CorpusError::io(dir, e))?;
    save_records(&corpus.records, &dir.join(RECORDS_FILE))?;
    save_truth(&corpus.truth, &dir.join(TRUTH_FILE))?;
    corpus.web.save(&dir.join(WEB_DIR))
}

pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    Ok(Corpus {
        records: crate::records::load_records(&dir.join(RECORDS_FILE))?,
        truth: load_truth(&dir.join(TRUTH_FILE))?,
        web: MockWeb::load(&dir.join(WEB_DIR))?,
    })
}

pub fn save_truth(truth: &[GroundTruth], path: &Path) -> Result<(), CorpusError> {
    Ok(write_jsonl(truth, path)?)
}

pub fn load_truth(path: &Path) -> Result<Vec<GroundTruth>, CorpusError> {
    let mut out = Vec::new();
    read_jsonl(path, |t: GroundTruth, _| {
        out.push(t);
        Ok(())
    })?;
    Ok(out)
}
