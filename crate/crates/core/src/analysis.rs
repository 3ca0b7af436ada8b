//! Correlation series over years and citation ranges.

use std::collections::BTreeMap;

use crate::metrics::{aggregate_advantage, percent_oa, CohortTable, Dimension, MetricsError, Weighting};
use crate::records::{ArticleRecord, CitationRange};
use crate::stats::{pearson_r, r_to_p, CorrelationResult, StatsError};

/// One correlated pair of series.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub pair: String,
    /// Number of points after dropping positions where either series is undefined.
    pub n: usize,
    /// `Err` when the pair cannot be computed (too few points, constant series).
    pub result: Result<CorrelationResult, StatsError>,
}

/// Correlates two series, keeping only positions where both are defined.
pub fn correlate_series(pair: impl Into<String>, xs: &[Option<f64>], ys: &[Option<f64>]) -> CorrelationRow {
    let (x, y): (Vec<f64>, Vec<f64>) = xs.iter().zip(ys).filter_map(|(a, b)| Some(((*a)?, (*b)?))).unzip();
    let result = pearson_r(&x, &y).and_then(|r| r_to_p(r, x.len()));
    CorrelationRow {
        pair: pair.into(),
        n: x.len(),
        result,
    }
}

/// Per-year totals, OA share and aggregate advantage for the year-level pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct YearSeries {
    pub years: Vec<i32>,
    pub total: Vec<f64>,
    pub pct_oa: Vec<f64>,
    pub advantage: Vec<Option<f64>>,
}

/// Builds the year series from records that already passed the exclusion rules.
pub fn year_series(records: &[ArticleRecord], weighting: Weighting) -> Result<YearSeries, MetricsError> {
    let shares = percent_oa(records, Dimension::Year)?;
    let advantage: BTreeMap<String, Option<f64>> = aggregate_advantage(records, Dimension::Year, weighting)?
        .into_iter()
        .map(|r| (r.group, r.advantage))
        .collect();
    let mut rows: Vec<(i32, f64, f64, Option<f64>)> = shares
        .iter()
        .map(|s| {
            let year: i32 = s.group.parse().expect("year keys are integers");
            (
                year,
                s.total() as f64,
                s.percent_oa,
                advantage.get(&s.group).copied().flatten(),
            )
        })
        .collect();
    rows.sort_by_key(|r| r.0);
    Ok(YearSeries {
        years: rows.iter().map(|r| r.0).collect(),
        total: rows.iter().map(|r| r.1).collect(),
        pct_oa: rows.iter().map(|r| r.2).collect(),
        advantage: rows.iter().map(|r| r.3).collect(),
    })
}

fn some(v: &[f64]) -> Vec<Option<f64>> {
    v.iter().copied().map(Some).collect()
}

/// Year-level pairs: advantage, total articles and OA share against each other and year.
pub fn year_correlations(series: &YearSeries) -> Vec<CorrelationRow> {
    let year: Vec<Option<f64>> = series.years.iter().map(|&y| Some(y as f64)).collect();
    let total = some(&series.total);
    let pct = some(&series.pct_oa);
    let adv = &series.advantage;
    vec![
        correlate_series("advantage x year", adv, &year),
        correlate_series("advantage x total", adv, &total),
        correlate_series("advantage x pct_oa", adv, &pct),
        correlate_series("total x year", &total, &year),
        correlate_series("total x pct_oa", &total, &pct),
        correlate_series("pct_oa x year", &pct, &year),
    ]
}

/// Per citation range: OA_c against year and OA_c/NOA_c against year.
pub fn range_correlations(yearly: &CohortTable) -> Vec<CorrelationRow> {
    let year: Vec<Option<f64>> = yearly.rows.iter().map(|r| r.year.map(f64::from)).collect();
    let mut out = Vec::new();
    for range in CitationRange::ALL {
        let oa_c: Vec<Option<f64>> = yearly.rows.iter().map(|r| r.cells[range.index()].oa_c).collect();
        out.push(correlate_series(
            format!("oa_c[{}] x year", range.label()),
            &oa_c,
            &year,
        ));
    }
    for range in CitationRange::ALL {
        let ratio: Vec<Option<f64>> = yearly.rows.iter().map(|r| r.cells[range.index()].ratio).collect();
        out.push(correlate_series(
            format!("oa_c/noa_c[{}] x year", range.label()),
            &ratio,
            &year,
        ));
    }
    out
}

/// Pooled delta_c against the range index 0..=5.
pub fn delta_by_range_correlation(pooled: &CohortTable) -> CorrelationRow {
    let (xs, ys): (Vec<Option<f64>>, Vec<Option<f64>>) = match pooled.rows.first() {
        Some(row) => row
            .cells
            .iter()
            .map(|c| (Some(c.range.index() as f64), c.delta))
            .unzip(),
        None => (Vec::new(), Vec::new()),
    };
    correlate_series("delta x range", &ys, &xs)
}
