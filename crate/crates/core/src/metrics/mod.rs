//! Citation-impact analytics over classified records: exclusion rules,
//! percent OA, within-issue citation advantage, citation-range cohorts and
//! summary statistics.

mod advantage;
mod cohort;
mod exclusions;
mod share;
mod summary;

pub use advantage::{
    advantage_exclusions, aggregate_advantage, issue_advantage, issue_stats, AdvantageReport, IssueExclusion,
    IssueOutcome, IssueStats, Weighting,
};
pub use cohort::{cohort_row, cohort_table, CitationHistogram, CohortCell, CohortRow, CohortTable};
pub use exclusions::{apply_exclusions, ExclusionKind, ExclusionLogEntry};
pub use share::{percent_oa, OaShareReport};
pub use summary::{summary_stats, Summary};

use std::fmt;

use thiserror::Error;

use crate::records::{ArticleRecord, OaStatus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("record `{0}` has UNKNOWN status; run detection first")]
    UnknownStatus(String),
    #[error("records from different issues ({0} and {1}) passed as one issue")]
    MixedIssue(String, String),
    #[error("empty input")]
    Empty,
    #[error("SD_UNDEFINED: sample standard deviation needs at least two values")]
    SdUndefined,
}

/// Grouping dimension for the share and advantage reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Discipline,
    Country,
    Year,
    Journal,
}

impl Dimension {
    pub const ALL: [Dimension; 4] = [
        Dimension::Discipline,
        Dimension::Country,
        Dimension::Year,
        Dimension::Journal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Discipline => "discipline",
            Dimension::Country => "country",
            Dimension::Year => "year",
            Dimension::Journal => "journal",
        }
    }

    pub fn key(self, r: &ArticleRecord) -> String {
        match self {
            Dimension::Discipline => r.discipline.clone(),
            Dimension::Country => r.country.clone(),
            Dimension::Year => r.year.to_string(),
            Dimension::Journal => r.journal_id.clone(),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Dimension {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Dimension::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| format!("unknown dimension `{s}`"))
    }
}

pub(crate) fn ensure_resolved(records: &[ArticleRecord]) -> Result<(), MetricsError> {
    match records.iter().find(|r| r.oa_status == OaStatus::Unknown) {
        Some(r) => Err(MetricsError::UnknownStatus(r.id.clone())),
        None => Ok(()),
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use crate::records::{ArticleRecord, IssueKey, OaStatus};

    pub fn rec(id: &str, journal: &str, year: i32, issue: &str, status: OaStatus, cites: i64) -> ArticleRecord {
        ArticleRecord {
            id: id.into(),
            first_author_surname: "Doe".into(),
            title: format!("Title of {id}"),
            journal_id: journal.into(),
            issue_key: IssueKey::new(journal, year, issue).unwrap(),
            year,
            discipline: "Biology".into(),
            country: "CA".into(),
            citation_count: cites,
            oa_status: status,
        }
    }
}
