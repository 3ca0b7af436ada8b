use std::collections::BTreeMap;

use crate::records::{ArticleRecord, IssueKey, OaStatus};

use super::{ensure_resolved, Dimension, ExclusionKind, ExclusionLogEntry, MetricsError};

/// Per-issue OA/NOA citation means.
#[derive(Debug, Clone, PartialEq)]
pub struct IssueStats {
    pub issue_key: IssueKey,
    pub n_oa: u64,
    pub n_noa: u64,
    pub mean_cit_oa: f64,
    pub mean_cit_noa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IssueExclusion {
    /// Every article in the issue is OA.
    AllOa,
    /// No article in the issue is OA.
    AllNoa,
    /// The NOA articles have zero citations in total, so the ratio is undefined.
    ZeroNoaCitations,
}

impl IssueExclusion {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueExclusion::AllOa => "ALL_OA_ISSUE",
            IssueExclusion::AllNoa => "ALL_NOA_ISSUE",
            IssueExclusion::ZeroNoaCitations => "ZERO_NOA_CITATIONS",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IssueOutcome {
    /// `(mean_cit_oa - mean_cit_noa) / mean_cit_noa`
    Included(f64),
    Excluded(IssueExclusion),
}

/// How per-issue ratios are averaged up to journals and journals up to groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    #[default]
    Unweighted,
    /// Weight issues, and then journals, by their article counts.
    ArticleWeighted,
}

impl std::str::FromStr for Weighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unweighted" => Ok(Weighting::Unweighted),
            "article" | "article-weighted" => Ok(Weighting::ArticleWeighted),
            other => Err(format!("unknown weighting `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvantageReport {
    pub group: String,
    /// `None` when the group has no includable issue (NO_DATA).
    pub advantage: Option<f64>,
    pub n_journals: usize,
    pub n_issues_included: usize,
    pub n_excluded_all_oa: usize,
    pub n_excluded_all_noa: usize,
    pub n_excluded_zero_noa_citations: usize,
}

impl AdvantageReport {
    pub fn n_issues_excluded(&self) -> usize {
        self.n_excluded_all_oa + self.n_excluded_all_noa + self.n_excluded_zero_noa_citations
    }
}

/// Citation means of one issue's records.
pub fn issue_stats(records: &[&ArticleRecord]) -> Result<IssueStats, MetricsError> {
    let first = records.first().ok_or(MetricsError::Empty)?;
    let (mut n_oa, mut n_noa, mut sum_oa, mut sum_noa) = (0u64, 0u64, 0u64, 0u64);
    for r in records {
        if r.issue_key != first.issue_key {
            return Err(MetricsError::MixedIssue(
                first.issue_key.to_string(),
                r.issue_key.to_string(),
            ));
        }
        match r.oa_status {
            OaStatus::Oa => {
                n_oa += 1;
                sum_oa += r.citations();
            }
            OaStatus::Noa => {
                n_noa += 1;
                sum_noa += r.citations();
            }
            OaStatus::Unknown => return Err(MetricsError::UnknownStatus(r.id.clone())),
        }
    }
    let mean = |sum: u64, n: u64| if n == 0 { 0.0 } else { sum as f64 / n as f64 };
    Ok(IssueStats {
        issue_key: first.issue_key.clone(),
        n_oa,
        n_noa,
        mean_cit_oa: mean(sum_oa, n_oa),
        mean_cit_noa: mean(sum_noa, n_noa),
    })
}

/// Within-issue OA citation advantage, or the reason the issue is excluded.
pub fn issue_advantage(records: &[&ArticleRecord]) -> Result<IssueOutcome, MetricsError> {
    let s = issue_stats(records)?;
    Ok(outcome(&s))
}

fn outcome(s: &IssueStats) -> IssueOutcome {
    if s.n_noa == 0 {
        IssueOutcome::Excluded(IssueExclusion::AllOa)
    } else if s.n_oa == 0 {
        IssueOutcome::Excluded(IssueExclusion::AllNoa)
    } else if s.mean_cit_noa == 0.0 {
        IssueOutcome::Excluded(IssueExclusion::ZeroNoaCitations)
    } else {
        IssueOutcome::Included((s.mean_cit_oa - s.mean_cit_noa) / s.mean_cit_noa)
    }
}

/// Issue ratios averaged to journals, then journals averaged to each group.
///
/// For dimensions that cut across issues (country) an issue contributes only
/// the group's own records.
pub fn aggregate_advantage(
    records: &[ArticleRecord],
    group_by: Dimension,
    weighting: Weighting,
) -> Result<Vec<AdvantageReport>, MetricsError> {
    ensure_resolved(records)?;
    // group -> journal -> issue -> records
    let mut tree: BTreeMap<String, BTreeMap<&str, BTreeMap<&IssueKey, Vec<&ArticleRecord>>>> = BTreeMap::new();
    for r in records {
        tree.entry(group_by.key(r))
            .or_default()
            .entry(r.journal_id.as_str())
            .or_default()
            .entry(&r.issue_key)
            .or_default()
            .push(r);
    }

    let mut reports = Vec::with_capacity(tree.len());
    for (group, journals) in tree {
        let mut report = AdvantageReport {
            group,
            advantage: None,
            n_journals: 0,
            n_issues_included: 0,
            n_excluded_all_oa: 0,
            n_excluded_all_noa: 0,
            n_excluded_zero_noa_citations: 0,
        };
        // (journal advantage, journal weight)
        let mut journal_values: Vec<(f64, f64)> = Vec::new();
        for issues in journals.values() {
            let mut issue_values: Vec<(f64, f64)> = Vec::new();
            for members in issues.values() {
                let stats = issue_stats(members)?;
                match outcome(&stats) {
                    IssueOutcome::Included(ratio) => {
                        report.n_issues_included += 1;
                        issue_values.push((ratio, members.len() as f64));
                    }
                    IssueOutcome::Excluded(IssueExclusion::AllOa) => report.n_excluded_all_oa += 1,
                    IssueOutcome::Excluded(IssueExclusion::AllNoa) => report.n_excluded_all_noa += 1,
                    IssueOutcome::Excluded(IssueExclusion::ZeroNoaCitations) => {
                        report.n_excluded_zero_noa_citations += 1
                    }
                }
            }
            if let Some(v) = weighted_mean(&issue_values, weighting) {
                let weight: f64 = issue_values.iter().map(|(_, w)| w).sum();
                journal_values.push((v, weight));
            }
        }
        report.n_journals = journal_values.len();
        report.advantage = weighted_mean(&journal_values, weighting);
        reports.push(report);
    }
    Ok(reports)
}

/// Whole issues the advantage average leaves out, sorted by issue key.
pub fn advantage_exclusions(records: &[ArticleRecord]) -> Result<Vec<ExclusionLogEntry>, MetricsError> {
    ensure_resolved(records)?;
    let mut issues: BTreeMap<&IssueKey, Vec<&ArticleRecord>> = BTreeMap::new();
    for r in records {
        issues.entry(&r.issue_key).or_default().push(r);
    }
    let mut log = Vec::new();
    for (key, members) in issues {
        let kind = match outcome(&issue_stats(&members)?) {
            IssueOutcome::Included(_) => continue,
            IssueOutcome::Excluded(IssueExclusion::AllOa) => ExclusionKind::AllOaIssue,
            IssueOutcome::Excluded(IssueExclusion::AllNoa) => ExclusionKind::AllNoaIssue,
            IssueOutcome::Excluded(IssueExclusion::ZeroNoaCitations) => ExclusionKind::ZeroNoaCitations,
        };
        log.push(ExclusionLogEntry {
            kind,
            key: key.to_string(),
            n_records: members.len(),
        });
    }
    Ok(log)
}

fn weighted_mean(values: &[(f64, f64)], weighting: Weighting) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    Some(match weighting {
        Weighting::Unweighted => values.iter().map(|(v, _)| v).sum::<f64>() / values.len() as f64,
        Weighting::ArticleWeighted => {
            let total: f64 = values.iter().map(|(_, w)| w).sum();
            values.iter().map(|(v, w)| v * w).sum::<f64>() / total
        }
    })
}
