//! CSV renderings of the analysis results.
//!
//! Rows follow the order of the input reports, which the metrics functions
//! already sort by group key. Percentages carry one decimal place.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::CorrelationRow;
use crate::metrics::{AdvantageReport, CohortTable, ExclusionLogEntry, OaShareReport, Summary};
use crate::stats::{ConfusionMatrix, SdtResult};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn pct(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

fn opt_pct(x: Option<f64>) -> String {
    x.map(pct).unwrap_or_default()
}

fn fixed(x: f64) -> String {
    format!("{x:.6}")
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn write_rows(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), ReportError> {
    let err = |source| ReportError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(err)?;
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_oa_share(reports: &[OaShareReport], path: &Path) -> Result<(), ReportError> {
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.group.clone(),
                r.n_oa.to_string(),
                r.n_noa.to_string(),
                r.total().to_string(),
                pct(r.percent_oa),
            ]
        })
        .collect();
    write_rows(path, &["group", "n_oa", "n_noa", "total", "percent_oa"], rows)
}

/// `advantage_percent` is empty when the group has no includable issue.
pub fn write_advantage(reports: &[AdvantageReport], path: &Path) -> Result<(), ReportError> {
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.group.clone(),
                opt_pct(r.advantage),
                if r.advantage.is_some() { "OK" } else { "NO_DATA" }.to_string(),
                r.n_journals.to_string(),
                r.n_issues_included.to_string(),
                r.n_excluded_all_oa.to_string(),
                r.n_excluded_all_noa.to_string(),
                r.n_excluded_zero_noa_citations.to_string(),
            ]
        })
        .collect();
    write_rows(
        path,
        &[
            "group",
            "advantage_percent",
            "status",
            "n_journals",
            "n_issues_included",
            "n_excluded_all_oa",
            "n_excluded_all_noa",
            "n_excluded_zero_noa_citations",
        ],
        rows,
    )
}

pub fn write_exclusions(log: &[ExclusionLogEntry], path: &Path) -> Result<(), ReportError> {
    let rows = log
        .iter()
        .map(|e| vec![e.kind.as_str().to_string(), e.key.clone(), e.n_records.to_string()])
        .collect();
    write_rows(path, &["reason", "key", "n_records"], rows)
}

/// One row per (year, range); the pooled table uses `ALL` as its year.
pub fn write_cohorts(table: &CohortTable, path: &Path) -> Result<(), ReportError> {
    let mut rows = Vec::new();
    for row in &table.rows {
        let year = row.year.map(|y| y.to_string()).unwrap_or_else(|| "ALL".to_string());
        for c in &row.cells {
            rows.push(vec![
                year.clone(),
                c.range.label().to_string(),
                c.oa_count.to_string(),
                c.noa_count.to_string(),
                opt_pct(c.oa_c),
                opt_pct(c.noa_c),
                c.ratio.map(|r| format!("{r:.4}")).unwrap_or_default(),
                opt_pct(c.delta),
            ]);
        }
    }
    write_rows(
        path,
        &[
            "year",
            "range",
            "oa_count",
            "noa_count",
            "oa_c_percent",
            "noa_c_percent",
            "ratio",
            "delta_percent",
        ],
        rows,
    )
}

/// Incomputable pairs keep their row with empty statistics and the reason in `status`.
pub fn write_correlations(rows: &[CorrelationRow], path: &Path) -> Result<(), ReportError> {
    let out = rows
        .iter()
        .map(|row| match &row.result {
            Ok(c) => vec![
                row.pair.clone(),
                fixed(c.r),
                c.n.to_string(),
                fixed(c.t_stat),
                c.df.to_string(),
                sci(c.p_two_tailed),
                sci(c.p_one_tailed),
                if c.p_at_floor { "P_AT_FLOOR" } else { "OK" }.to_string(),
            ],
            Err(e) => vec![
                row.pair.clone(),
                String::new(),
                row.n.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.to_string(),
            ],
        })
        .collect();
    write_rows(path, &["pair", "r", "n", "t", "df", "p_two", "p_one", "status"], out)
}

pub fn write_sdt(m: &ConfusionMatrix, s: &SdtResult, path: &Path) -> Result<(), ReportError> {
    let row = vec![
        m.hits.to_string(),
        m.misses.to_string(),
        m.false_alarms.to_string(),
        m.correct_rejections.to_string(),
        fixed(s.hit_rate),
        fixed(s.fa_rate),
        fixed(s.d_prime),
        fixed(s.beta),
        fixed(s.criterion_c),
        s.correction_applied.to_string(),
    ];
    write_rows(
        path,
        &[
            "hits",
            "misses",
            "false_alarms",
            "correct_rejections",
            "hit_rate",
            "fa_rate",
            "d_prime",
            "beta",
            "criterion_c",
            "correction_applied",
        ],
        vec![row],
    )
}

/// Named summaries of percentage-valued series.
pub fn write_summary(rows: &[(String, Summary)], path: &Path) -> Result<(), ReportError> {
    let out = rows
        .iter()
        .map(|(name, s)| {
            vec![
                name.clone(),
                s.n.to_string(),
                pct(s.mean),
                pct(s.median),
                format!("{:.2}", s.sd * 100.0),
            ]
        })
        .collect();
    write_rows(
        path,
        &["metric", "n", "mean_percent", "median_percent", "sd_percent"],
        out,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{cohort_row, CitationHistogram};
    use crate::stats::{r_to_p, sdt_analysis, StatsError};

    #[test]
    fn empty_report_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_oa_share(&[], &p).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "group,n_oa,n_noa,total,percent_oa\n"
        );
    }

    #[test]
    fn share_rounds_to_one_decimal() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        write_oa_share(&[OaShareReport::from_counts("Law", 1, 2)], &p).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap().lines().nth(1).unwrap(),
            "Law,1,2,3,33.3"
        );
    }

    #[test]
    fn cohort_and_sdt_rows() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        let table = CohortTable {
            rows: vec![cohort_row(
                None,
                CitationHistogram::from_counts([1, 1, 0, 0, 0, 0]),
                CitationHistogram::from_counts([2, 0, 1, 1, 0, 0]),
            )],
        };
        write_cohorts(&table, &p).unwrap();
        let body = std::fs::read_to_string(&p).unwrap();
        assert_eq!(body.lines().count(), 7);
        assert_eq!(body.lines().nth(1).unwrap(), "ALL,0,1,2,50.0,50.0,1.0000,0.0");
        assert_eq!(body.lines().nth(2).unwrap(), "ALL,1,1,0,50.0,0.0,,");

        let m = ConfusionMatrix::new(81, 6, 19, 94);
        write_sdt(&m, &sdt_analysis(&m).unwrap(), &p).unwrap();
        let body = std::fs::read_to_string(&p).unwrap();
        assert!(
            body.lines()
                .nth(1)
                .unwrap()
                .starts_with("81,6,19,94,0.931034,0.168142,2.445"),
            "{body}"
        );
    }

    #[test]
    fn correlation_status_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        let rows = vec![
            CorrelationRow {
                pair: "a".into(),
                n: 12,
                result: r_to_p(0.76, 12),
            },
            CorrelationRow {
                pair: "b".into(),
                n: 2,
                result: Err(StatsError::TooFewPoints { needed: 3, got: 2 }),
            },
        ];
        write_correlations(&rows, &p).unwrap();
        let body = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = body.lines().collect();
        assert!(lines[1].starts_with("a,0.760000,12,3.697"), "{}", lines[1]);
        assert!(lines[1].ends_with(",OK"));
        assert_eq!(lines[2], "b,,2,,,,,\"need at least 3 points, got 2\"");
    }
}
