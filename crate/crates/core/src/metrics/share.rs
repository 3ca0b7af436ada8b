use std::collections::BTreeMap;

use crate::records::{ArticleRecord, OaStatus};

use super::{ensure_resolved, Dimension, MetricsError};

#[derive(Debug, Clone, PartialEq)]
pub struct OaShareReport {
    pub group: String,
    pub n_oa: u64,
    pub n_noa: u64,
    /// `n_oa / (n_oa + n_noa)`, as a fraction.
    pub percent_oa: f64,
}

impl OaShareReport {
    pub fn from_counts(group: impl Into<String>, n_oa: u64, n_noa: u64) -> Self {
        let total = n_oa + n_noa;
        OaShareReport {
            group: group.into(),
            n_oa,
            n_noa,
            percent_oa: if total == 0 { 0.0 } else { n_oa as f64 / total as f64 },
        }
    }

    pub fn total(&self) -> u64 {
        self.n_oa + self.n_noa
    }
}

/// Pooled OA share per group, sorted by group key.
pub fn percent_oa(records: &[ArticleRecord], group_by: Dimension) -> Result<Vec<OaShareReport>, MetricsError> {
    ensure_resolved(records)?;
    let mut counts: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for r in records {
        let c = counts.entry(group_by.key(r)).or_default();
        match r.oa_status {
            OaStatus::Oa => c.0 += 1,
            _ => c.1 += 1,
        }
    }
    Ok(counts
        .into_iter()
        .map(|(g, (oa, noa))| OaShareReport::from_counts(g, oa, noa))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fixtures::rec;

    #[test]
    fn large_total_share() {
        let r = OaShareReport::from_counts("all", 156_845, 1_307_038 - 156_845);
        assert_eq!(format!("{:.1}", r.percent_oa * 100.0), "12.0");
    }

    #[test]
    fn by_year() {
        let mut records = Vec::new();
        for i in 0..5 {
            records.push(rec(&format!("a{i}"), "J", 2000, "1", OaStatus::Oa, 0));
            records.push(rec(&format!("b{i}"), "J", 2000, "1", OaStatus::Noa, 0));
            records.push(rec(&format!("c{i}"), "J", 2001, "1", OaStatus::Noa, 0));
        }
        let rows = percent_oa(&records, Dimension::Year).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].group, "2000");
        assert_eq!(rows[0].percent_oa, 0.5);
        assert_eq!(rows[1].percent_oa, 0.0);
        assert_eq!(rows[1].total(), 5);
    }
}
