//! Bibliographic data model, citation-range binning and JSONL persistence.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}:{line}: record `{id}` has invalid `{field}`: {message}")]
    Validation {
        path: PathBuf,
        line: usize,
        id: String,
        field: &'static str,
        message: String,
    },
}

impl RecordError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        RecordError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Open-access status of an article.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OaStatus {
    #[serde(rename = "OA")]
    Oa,
    #[serde(rename = "NOA")]
    Noa,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl OaStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            OaStatus::Oa => "OA",
            OaStatus::Noa => "NOA",
            OaStatus::Unknown => "UNKNOWN",
        }
    }
}

impl fmt::Display for OaStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Composite `journal|year|issue` key shared by all articles of one journal issue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IssueKey(String);

impl IssueKey {
    /// Builds the key, rejecting components that contain the `|` separator.
    pub fn new(journal_id: &str, year: i32, issue: &str) -> Result<Self, String> {
        if journal_id.contains('|') || issue.contains('|') {
            return Err("issue key components must not contain '|'".into());
        }
        if journal_id.is_empty() || issue.is_empty() {
            return Err("issue key components must be non-empty".into());
        }
        Ok(IssueKey(format!("{journal_id}|{year}|{issue}")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Splits the key into `(journal_id, year, issue)`.
    pub fn parts(&self) -> Option<(&str, i32, &str)> {
        let mut it = self.0.split('|');
        let journal = it.next()?;
        let year = it.next()?.parse().ok()?;
        let issue = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some((journal, year, issue))
    }
}

impl fmt::Display for IssueKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One bibliographic record: the unit of analysis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub id: String,
    pub first_author_surname: String,
    pub title: String,
    pub journal_id: String,
    pub issue_key: IssueKey,
    pub year: i32,
    pub discipline: String,
    pub country: String,
    // Signed so that negative counts reach validation instead of failing as a type error.
    pub citation_count: i64,
    pub oa_status: OaStatus,
}

impl ArticleRecord {
    /// Checks the record invariants, naming the first offending field.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.id.trim().is_empty() {
            return Err(("id", "must be non-empty".into()));
        }
        if self.citation_count < 0 {
            return Err((
                "citation_count",
                format!("must be non-negative, got {}", self.citation_count),
            ));
        }
        if collapse_whitespace(&self.title).is_empty() {
            return Err(("title", "must be non-empty".into()));
        }
        if collapse_whitespace(&self.first_author_surname).is_empty() {
            return Err(("first_author_surname", "must be non-empty".into()));
        }
        match self.issue_key.parts() {
            Some((journal, year, _)) if journal == self.journal_id && year == self.year => Ok(()),
            Some(_) => Err((
                "issue_key",
                format!(
                    "`{}` does not match journal_id `{}` and year {}",
                    self.issue_key, self.journal_id, self.year
                ),
            )),
            None => Err((
                "issue_key",
                format!("`{}` is not of the form journal|year|issue", self.issue_key),
            )),
        }
    }

    pub fn citations(&self) -> u64 {
        self.citation_count.max(0) as u64
    }
}

fn collapse_whitespace(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// The six citation bins: 0, 1, 2-3, 4-7, 8-15, 16+.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CitationRange {
    R0,
    R1,
    R2_3,
    R4_7,
    R8_15,
    R16Plus,
}

impl CitationRange {
    pub const ALL: [CitationRange; 6] = [
        CitationRange::R0,
        CitationRange::R1,
        CitationRange::R2_3,
        CitationRange::R4_7,
        CitationRange::R8_15,
        CitationRange::R16Plus,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            CitationRange::R0 => "0",
            CitationRange::R1 => "1",
            CitationRange::R2_3 => "2-3",
            CitationRange::R4_7 => "4-7",
            CitationRange::R8_15 => "8-15",
            CitationRange::R16Plus => "16+",
        }
    }

    /// Inclusive lower bound of the bin.
    pub fn lower(self) -> u64 {
        match self {
            CitationRange::R0 => 0,
            CitationRange::R1 => 1,
            CitationRange::R2_3 => 2,
            CitationRange::R4_7 => 4,
            CitationRange::R8_15 => 8,
            CitationRange::R16Plus => 16,
        }
    }
}

impl fmt::Display for CitationRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn bin_citations(c: u64) -> CitationRange {
    match c {
        0 => CitationRange::R0,
        1 => CitationRange::R1,
        2..=3 => CitationRange::R2_3,
        4..=7 => CitationRange::R4_7,
        8..=15 => CitationRange::R8_15,
        _ => CitationRange::R16Plus,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum NotFoundReason {
    NoTitleMatch,
    NoReferencesSection,
    EmptyText,
    Exhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EvidenceFlag {
    /// Title has fewer than three tokens after normalization.
    LowConfidence,
}

/// The robot's decision for one article and the trail that justifies it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvidence {
    pub article_id: String,
    pub verdict: OaStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub url: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_head_offset: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_tail_marker: Option<String>,
    pub depth: u32,
    /// Milliseconds since the Unix epoch, taken from the crawl clock.
    pub timestamp: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<NotFoundReason>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<EvidenceFlag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl DetectionEvidence {
    pub fn validate(&self, max_depth: u32) -> Result<(), String> {
        if self.verdict == OaStatus::Oa && self.url.is_none() {
            return Err(format!("{}: OA verdict without url", self.article_id));
        }
        if self.depth > max_depth {
            return Err(format!(
                "{}: depth {} exceeds max depth {}",
                self.article_id, self.depth, max_depth
            ));
        }
        Ok(())
    }
}

/// Reads JSONL values, calling `f` with each parsed value and its 1-based line number.
/// Blank lines are skipped.
pub fn read_jsonl<T, F>(path: &Path, mut f: F) -> Result<(), RecordError>
where
    T: for<'de> Deserialize<'de>,
    F: FnMut(T, usize) -> Result<(), RecordError>,
{
    let file = File::open(path).map_err(|e| RecordError::io(path, e))?;
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| RecordError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let value = serde_json::from_str(&line).map_err(|e| RecordError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        f(value, idx + 1)?;
    }
    Ok(())
}

pub fn write_jsonl<'a, T, I>(items: I, path: &Path) -> Result<(), RecordError>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let file = File::create(path).map_err(|e| RecordError::io(path, e))?;
    let mut out = BufWriter::new(file);
    for item in items {
        serde_json::to_writer(&mut out, item).map_err(|e| RecordError::io(path, e.into()))?;
        out.write_all(b"\n").map_err(|e| RecordError::io(path, e))?;
    }
    out.flush().map_err(|e| RecordError::io(path, e))
}

pub fn load_records(path: &Path) -> Result<Vec<ArticleRecord>, RecordError> {
    let mut records = Vec::new();
    read_jsonl(path, |record: ArticleRecord, line| {
        record.validate().map_err(|(field, message)| RecordError::Validation {
            path: path.to_path_buf(),
            line,
            id: record.id.clone(),
            field,
            message,
        })?;
        records.push(record);
        Ok(())
    })?;
    Ok(records)
}

pub fn save_records(records: &[ArticleRecord], path: &Path) -> Result<(), RecordError> {
    write_jsonl(records, path)
}

pub fn save_detections(evidence: &[DetectionEvidence], path: &Path) -> Result<(), RecordError> {
    write_jsonl(evidence, path)
}

pub fn load_detections(path: &Path) -> Result<Vec<DetectionEvidence>, RecordError> {
    let mut out = Vec::new();
    read_jsonl(path, |e: DetectionEvidence, _| {
        out.push(e);
        Ok(())
    })?;
    Ok(out)
}

/// Overwrites each record's status with the matching detection verdict.
/// Records without a detection keep their current status.
pub fn apply_detections(records: &mut [ArticleRecord], detections: &[DetectionEvidence]) {
    let by_id: std::collections::HashMap<&str, OaStatus> =
        detections.iter().map(|d| (d.article_id.as_str(), d.verdict)).collect();
    for r in records.iter_mut() {
        if let Some(status) = by_id.get(r.id.as_str()) {
            r.oa_status = *status;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(id: &str) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            first_author_surname: "Lawrence".into(),
            title: "Online or Invisible?".into(),
            journal_id: "J1".into(),
            issue_key: IssueKey::new("J1", 2001, "3").unwrap(),
            year: 2001,
            discipline: "Biology".into(),
            country: "US".into(),
            citation_count: 4,
            oa_status: OaStatus::Unknown,
        }
    }

    #[test]
    fn bins_match_the_six_ranges() {
        assert_eq!(bin_citations(0), CitationRange::R0);
        assert_eq!(bin_citations(1), CitationRange::R1);
        assert_eq!(bin_citations(3), CitationRange::R2_3);
        assert_eq!(bin_citations(7), CitationRange::R4_7);
        assert_eq!(bin_citations(8), CitationRange::R8_15);
        assert_eq!(bin_citations(16), CitationRange::R16Plus);
        assert_eq!(bin_citations(1000), CitationRange::R16Plus);
    }

    #[test]
    fn bins_partition_and_are_monotone() {
        let mut prev = CitationRange::R0;
        for c in 0..1_000_000u64 {
            let bin = bin_citations(c);
            let holders = CitationRange::ALL
                .iter()
                .filter(|r| {
                    let upper = CitationRange::ALL
                        .get(r.index() + 1)
                        .map(|n| n.lower())
                        .unwrap_or(u64::MAX);
                    c >= r.lower() && c < upper
                })
                .count();
            assert_eq!(holders, 1);
            assert!(bin >= prev);
            prev = bin;
        }
    }

    #[test]
    fn issue_key_rejects_separator() {
        assert!(IssueKey::new("a|b", 2000, "1").is_err());
        let k = IssueKey::new("J", 1999, "4").unwrap();
        assert_eq!(k.as_str(), "J|1999|4");
        assert_eq!(k.parts(), Some(("J", 1999, "4")));
    }

    fn write_lines(lines: &[String]) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        for l in lines {
            writeln!(f, "{l}").unwrap();
        }
        f
    }

    #[test]
    fn loads_valid_file() {
        let lines: Vec<String> = ["a", "b", "c"]
            .iter()
            .map(|id| serde_json::to_string(&record(id)).unwrap())
            .collect();
        let f = write_lines(&lines);
        assert_eq!(load_records(f.path()).unwrap().len(), 3);
    }

    #[test]
    fn empty_file_is_empty_list() {
        let f = write_lines(&[]);
        assert!(load_records(f.path()).unwrap().is_empty());
    }

    #[test]
    fn negative_citations_rejected() {
        let mut r = record("neg");
        r.citation_count = -1;
        let f = write_lines(&[
            serde_json::to_string(&record("ok")).unwrap(),
            serde_json::to_string(&r).unwrap(),
        ]);
        match load_records(f.path()) {
            Err(RecordError::Validation { line, id, field, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(id, "neg");
                assert_eq!(field, "citation_count");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let f = write_lines(&[serde_json::to_string(&record("ok")).unwrap(), "{not json".into()]);
        match load_records(f.path()) {
            Err(RecordError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn blank_title_rejected() {
        let mut r = record("t");
        r.title = "  \t ".into();
        assert_eq!(r.validate().unwrap_err().0, "title");
        let mut r = record("s");
        r.first_author_surname = " ".into();
        assert_eq!(r.validate().unwrap_err().0, "first_author_surname");
    }

    #[test]
    fn mismatched_issue_key_rejected() {
        let mut r = record("k");
        r.year = 2002;
        assert_eq!(r.validate().unwrap_err().0, "issue_key");
    }

    #[test]
    fn out_of_window_years_accepted() {
        let mut r = record("old");
        r.year = 1950;
        r.issue_key = IssueKey::new("J1", 1950, "1").unwrap();
        assert!(r.validate().is_ok());
    }

    #[test]
    fn detections_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        save_detections(&[], &path).unwrap();
        assert!(load_detections(&path).unwrap().is_empty());

        let ev = DetectionEvidence {
            article_id: "a1".into(),
            verdict: OaStatus::Oa,
            url: Some("http://h.example/a.pdf".into()),
            match_head_offset: Some(12),
            match_tail_marker: Some("heading:references".into()),
            depth: 1,
            timestamp: 17,
            reason: None,
            flags: vec![EvidenceFlag::LowConfidence],
            error: None,
        };
        save_detections(std::slice::from_ref(&ev), &path).unwrap();
        assert_eq!(load_detections(&path).unwrap(), vec![ev]);
    }

    #[test]
    fn missing_file_names_path() {
        let err = load_records(Path::new("/nonexistent/records.jsonl")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/records.jsonl"));
    }
}
