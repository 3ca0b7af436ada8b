use std::collections::{BTreeMap, BTreeSet};

use crate::records::{ArticleRecord, OaStatus};

use super::{ensure_resolved, MetricsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExclusionKind {
    AllOaJournal,
    AllOaIssue,
    /// Left out of the advantage average: no OA article in the issue.
    AllNoaIssue,
    /// Left out of the advantage average: the NOA articles have no citations.
    ZeroNoaCitations,
}

impl ExclusionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExclusionKind::AllOaJournal => "ALL_OA_JOURNAL",
            ExclusionKind::AllOaIssue => "ALL_OA_ISSUE",
            ExclusionKind::AllNoaIssue => "ALL_NOA_ISSUE",
            ExclusionKind::ZeroNoaCitations => "ZERO_NOA_CITATIONS",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExclusionLogEntry {
    pub kind: ExclusionKind,
    /// Journal id or issue key.
    pub key: String,
    pub n_records: usize,
}

/// Drops every record of an all-OA journal, then every record of an issue
/// whose remaining records are all OA. Input order is kept for survivors.
pub fn apply_exclusions(
    records: &[ArticleRecord],
) -> Result<(Vec<ArticleRecord>, Vec<ExclusionLogEntry>), MetricsError> {
    ensure_resolved(records)?;
    let mut log = Vec::new();

    let all_oa_journals = all_oa_groups(records, |r| r.journal_id.clone());
    for (journal, n) in &all_oa_journals {
        log.push(ExclusionLogEntry {
            kind: ExclusionKind::AllOaJournal,
            key: journal.clone(),
            n_records: *n,
        });
    }
    let kept: Vec<ArticleRecord> = records
        .iter()
        .filter(|r| !all_oa_journals.contains_key(&r.journal_id))
        .cloned()
        .collect();

    let all_oa_issues = all_oa_groups(&kept, |r| r.issue_key.as_str().to_string());
    for (issue, n) in &all_oa_issues {
        log.push(ExclusionLogEntry {
            kind: ExclusionKind::AllOaIssue,
            key: issue.clone(),
            n_records: *n,
        });
    }
    let kept = kept
        .into_iter()
        .filter(|r| !all_oa_issues.contains_key(r.issue_key.as_str()))
        .collect();
    Ok((kept, log))
}

/// Groups whose every record is OA, with their sizes.
fn all_oa_groups(records: &[ArticleRecord], key: impl Fn(&ArticleRecord) -> String) -> BTreeMap<String, usize> {
    let mut sizes: BTreeMap<String, usize> = BTreeMap::new();
    let mut mixed: BTreeSet<String> = BTreeSet::new();
    for r in records {
        let k = key(r);
        if r.oa_status != OaStatus::Oa {
            mixed.insert(k.clone());
        }
        *sizes.entry(k).or_default() += 1;
    }
    sizes.retain(|k, _| !mixed.contains(k));
    sizes
}
