//! Independent reference computations used to check the library.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

use oatrawl::records::{ArticleRecord, OaStatus};

/// Composite Simpson rule over `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Standard normal CDF by integrating the density over the lower tail, which
/// keeps full relative precision far into that tail.
pub fn normal_cdf(x: f64) -> f64 {
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI).sqrt();
    if x > 0.0 {
        return 1.0 - normal_cdf(-x);
    }
    simpson(density, x - 30.0, x, 200_000)
}

/// Gamma at a positive half-integer or integer `k / 2`, from Γ(1/2) = √π and Γ(1) = 1.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1);
    let (mut g, mut x) = if k.is_multiple_of(2) {
        (1.0, 1.0)
    } else {
        (PI.sqrt(), 0.5)
    };
    while x < k as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Two-tailed Student-t p value for integer degrees of freedom, by integrating the density.
pub fn t_two_tailed(t: f64, df: u32) -> f64 {
    let nu = df as f64;
    let c = gamma_half(df + 1) / ((nu * PI).sqrt() * gamma_half(df));
    let density = |x: f64| c * (1.0 + x * x / nu).powf(-(nu + 1.0) / 2.0);
    1.0 - 2.0 * simpson(density, 0.0, t.abs(), 200_000)
}

/// Within-issue advantage averaged to journals, then to groups, written from the definition.
pub fn advantage(
    records: &[ArticleRecord],
    group: impl Fn(&ArticleRecord) -> String,
    weighted: bool,
) -> BTreeMap<String, Option<f64>> {
    let mut out = BTreeMap::new();
    let mut groups: Vec<String> = records.iter().map(&group).collect();
    groups.sort();
    groups.dedup();
    for g in groups {
        let members: Vec<&ArticleRecord> = records.iter().filter(|r| group(r) == g).collect();
        let mut journals: Vec<&str> = members.iter().map(|r| r.journal_id.as_str()).collect();
        journals.sort();
        journals.dedup();
        let mut journal_values = Vec::new();
        for j in journals {
            let mut issues: Vec<&str> = members
                .iter()
                .filter(|r| r.journal_id == j)
                .map(|r| r.issue_key.as_str())
                .collect();
            issues.sort();
            issues.dedup();
            let mut issue_values = Vec::new();
            for i in issues {
                let issue: Vec<&&ArticleRecord> = members.iter().filter(|r| r.issue_key.as_str() == i).collect();
                let oa: Vec<f64> = issue
                    .iter()
                    .filter(|r| r.oa_status == OaStatus::Oa)
                    .map(|r| r.citation_count as f64)
                    .collect();
                let noa: Vec<f64> = issue
                    .iter()
                    .filter(|r| r.oa_status == OaStatus::Noa)
                    .map(|r| r.citation_count as f64)
                    .collect();
                if oa.is_empty() || noa.is_empty() {
                    continue;
                }
                let mean_oa = oa.iter().sum::<f64>() / oa.len() as f64;
                let mean_noa = noa.iter().sum::<f64>() / noa.len() as f64;
                if mean_noa > 0.0 {
                    issue_values.push(((mean_oa - mean_noa) / mean_noa, issue.len() as f64));
                }
            }
            if !issue_values.is_empty() {
                let weight = issue_values.iter().map(|v| v.1).sum::<f64>();
                journal_values.push((mean(&issue_values, weighted), weight));
            }
        }
        out.insert(g, (!journal_values.is_empty()).then(|| mean(&journal_values, weighted)));
    }
    out
}

fn mean(values: &[(f64, f64)], weighted: bool) -> f64 {
    if weighted {
        values.iter().map(|(v, w)| v * w).sum::<f64>() / values.iter().map(|v| v.1).sum::<f64>()
    } else {
        values.iter().map(|v| v.0).sum::<f64>() / values.len() as f64
    }
}

/// Citation range index of a count, from the bin edges 0, 1, 2, 4, 8, 16.
pub fn range_of(c: i64) -> usize {
    [1, 2, 4, 8, 16].iter().take_while(|&&edge| c >= edge).count()
}

/// Share of each population falling in each citation range, per year (or pooled under `None`).
pub fn cohort_shares(records: &[ArticleRecord], per_year: bool) -> BTreeMap<Option<i32>, ([f64; 6], [f64; 6])> {
    let mut counts: BTreeMap<Option<i32>, ([u64; 6], [u64; 6])> = BTreeMap::new();
    for r in records {
        let entry = counts.entry(per_year.then_some(r.year)).or_default();
        let bins = if r.oa_status == OaStatus::Oa {
            &mut entry.0
        } else {
            &mut entry.1
        };
        bins[range_of(r.citation_count)] += 1;
    }
    let shares = |c: [u64; 6]| {
        let total: u64 = c.iter().sum();
        c.map(|x| if total == 0 { f64::NAN } else { x as f64 / total as f64 })
    };
    counts
        .into_iter()
        .map(|(k, (o, n))| (k, (shares(o), shares(n))))
        .collect()
}
