use std::collections::BTreeMap;

use crate::records::{bin_citations, ArticleRecord, CitationRange, OaStatus};

use super::{ensure_resolved, MetricsError};

/// Article counts per citation range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CitationHistogram {
    pub counts: [u64; 6],
}

impl CitationHistogram {
    pub fn from_counts(counts: [u64; 6]) -> Self {
        CitationHistogram { counts }
    }

    pub fn add(&mut self, citations: u64) {
        self.counts[bin_citations(citations).index()] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn count(&self, range: CitationRange) -> u64 {
        self.counts[range.index()]
    }

    /// Fraction of the population in `range`; `None` for an empty population.
    pub fn share(&self, range: CitationRange) -> Option<f64> {
        let total = self.total();
        (total > 0).then(|| self.count(range) as f64 / total as f64)
    }
}

impl std::ops::Sub for CitationHistogram {
    type Output = CitationHistogram;

    fn sub(self, rhs: CitationHistogram) -> CitationHistogram {
        let mut counts = [0; 6];
        for (i, c) in counts.iter_mut().enumerate() {
            *c = self.counts[i] - rhs.counts[i];
        }
        CitationHistogram { counts }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CohortCell {
    pub range: CitationRange,
    pub oa_count: u64,
    pub noa_count: u64,
    /// Share of the OA population in this range.
    pub oa_c: Option<f64>,
    /// Share of the NOA population in this range.
    pub noa_c: Option<f64>,
    /// `oa_c / noa_c`, undefined when `noa_c` is zero or missing.
    pub ratio: Option<f64>,
    /// `(oa_c - noa_c) / noa_c`.
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohortRow {
    /// `None` for the row pooled over all years.
    pub year: Option<i32>,
    pub oa: CitationHistogram,
    pub noa: CitationHistogram,
    pub cells: Vec<CohortCell>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CohortTable {
    pub rows: Vec<CohortRow>,
}

pub fn cohort_row(year: Option<i32>, oa: CitationHistogram, noa: CitationHistogram) -> CohortRow {
    let cells = CitationRange::ALL
        .iter()
        .map(|&range| {
            let oa_c = oa.share(range);
            let noa_c = noa.share(range);
            let (ratio, delta) = match (oa_c, noa_c) {
                (Some(o), Some(n)) if n > 0.0 => (Some(o / n), Some((o - n) / n)),
                _ => (None, None),
            };
            CohortCell {
                range,
                oa_count: oa.count(range),
                noa_count: noa.count(range),
                oa_c,
                noa_c,
                ratio,
                delta,
            }
        })
        .collect();
    CohortRow { year, oa, noa, cells }
}

/// Within-population citation-range distributions of OA and NOA articles,
/// one row per year (sorted) or a single pooled row.
pub fn cohort_table(records: &[ArticleRecord], per_year: bool) -> Result<CohortTable, MetricsError> {
    ensure_resolved(records)?;
    let mut hists: BTreeMap<Option<i32>, (CitationHistogram, CitationHistogram)> = BTreeMap::new();
    for r in records {
        let key = per_year.then_some(r.year);
        let entry = hists.entry(key).or_default();
        match r.oa_status {
            OaStatus::Oa => entry.0.add(r.citations()),
            _ => entry.1.add(r.citations()),
        }
    }
    Ok(CohortTable {
        rows: hists
            .into_iter()
            .map(|(year, (oa, noa))| cohort_row(year, oa, noa))
            .collect(),
    })
}
