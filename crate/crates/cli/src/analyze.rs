//! `analyze`, `cohorts`, `correlate` and `audit`.

use anyhow::anyhow;

use oatrawl::analysis::{delta_by_range_correlation, range_correlations, year_correlations, year_series};
use oatrawl::corpus::{load_truth, run_audit, AuditOutcome, CorpusError};
use oatrawl::metrics::{
    advantage_exclusions, aggregate_advantage, apply_exclusions, cohort_table, percent_oa, summary_stats, Dimension,
};
use oatrawl::records::{apply_detections, load_detections, load_records, ArticleRecord, OaStatus};
use oatrawl::report::{
    write_advantage, write_cohorts, write_correlations, write_exclusions, write_oa_share, write_sdt, write_summary,
};
use oatrawl::stats::{sdt_analysis, SdtResult};

use crate::config::RunConfig;
use crate::detect::{create_out, require_file};
use crate::exit::{ExitContext, Failure, EXIT_AUDIT, EXIT_UNKNOWN};

/// Records with detections applied. UNKNOWN records fail the command unless
/// `allow_unknown` is set, in which case they are dropped with a warning.
pub fn resolved_records(cfg: &RunConfig) -> Result<Vec<ArticleRecord>, Failure> {
    let records_path = require_file(cfg.records.as_ref(), "records")?;
    let mut records = load_records(&records_path).input()?;
    if let Some(path) = &cfg.detections {
        let path = require_file(Some(path), "detections")?;
        apply_detections(&mut records, &load_detections(&path).input()?);
    }
    let unknown = records.iter().filter(|r| r.oa_status == OaStatus::Unknown).count();
    if unknown > 0 {
        if !cfg.allow_unknown {
            return Err(Failure::new(
                EXIT_UNKNOWN,
                anyhow!("{unknown} records have UNKNOWN status; complete detection or pass --allow-unknown"),
            ));
        }
        eprintln!("warning: dropping {unknown} records with UNKNOWN status");
        records.retain(|r| r.oa_status != OaStatus::Unknown);
    }
    Ok(records)
}

pub fn cmd_analyze(cfg: &RunConfig) -> Result<(), Failure> {
    let records = resolved_records(cfg)?;
    let out = create_out(cfg)?;
    let (kept, mut log) = apply_exclusions(&records).input()?;
    let n_dropped = log.len();
    log.extend(advantage_exclusions(&kept).input()?);
    write_exclusions(&log, &out.join("exclusions.csv")).input()?;
    let mut summaries = Vec::new();
    for dim in Dimension::ALL {
        let shares = percent_oa(&kept, dim).input()?;
        let advantage = aggregate_advantage(&kept, dim, cfg.weighting).input()?;
        write_oa_share(&shares, &out.join(format!("oa_share_by_{}.csv", dim.name()))).input()?;
        write_advantage(&advantage, &out.join(format!("advantage_by_{}.csv", dim.name()))).input()?;
        let pct: Vec<f64> = shares.iter().map(|s| s.percent_oa).collect();
        let adv: Vec<f64> = advantage.iter().filter_map(|a| a.advantage).collect();
        for (name, values) in [
            (format!("percent_oa_by_{}", dim.name()), pct),
            (format!("advantage_by_{}", dim.name()), adv),
        ] {
            // Fewer than two groups has no spread to summarize.
            if let Ok(s) = summary_stats(&values) {
                summaries.push((name, s));
            }
        }
    }
    write_summary(&summaries, &out.join("summary.csv")).input()?;
    let n_oa = kept.iter().filter(|r| r.oa_status == OaStatus::Oa).count();
    println!(
        "analyze: {} records, {} after exclusions ({} OA), {} groups dropped, {} issues outside the advantage average; reports in {}",
        records.len(),
        kept.len(),
        n_oa,
        n_dropped,
        log.len() - n_dropped,
        out.display()
    );
    Ok(())
}

pub fn cmd_cohorts(cfg: &RunConfig) -> Result<(), Failure> {
    let records = resolved_records(cfg)?;
    let out = create_out(cfg)?;
    write_cohorts(&cohort_table(&records, true).input()?, &out.join("cohorts_yearly.csv")).input()?;
    write_cohorts(&cohort_table(&records, false).input()?, &out.join("cohorts_pooled.csv")).input()?;
    println!("cohorts: {} records; reports in {}", records.len(), out.display());
    Ok(())
}

pub fn cmd_correlate(cfg: &RunConfig) -> Result<(), Failure> {
    let records = resolved_records(cfg)?;
    let out = create_out(cfg)?;
    let (kept, _) = apply_exclusions(&records).input()?;
    let mut rows = year_correlations(&year_series(&kept, cfg.weighting).input()?);
    rows.extend(range_correlations(&cohort_table(&records, true).input()?));
    rows.push(delta_by_range_correlation(&cohort_table(&records, false).input()?));
    write_correlations(&rows, &out.join("correlations.csv")).input()?;
    let computed = rows.iter().filter(|r| r.result.is_ok()).count();
    println!(
        "correlate: {computed} of {} pairs computed; report in {}",
        rows.len(),
        out.display()
    );
    Ok(())
}

pub fn audit_records(cfg: &RunConfig, sample_size: usize) -> Result<(AuditOutcome, SdtResult), Failure> {
    let records = load_records(&require_file(cfg.records.as_ref(), "records")?).input()?;
    let detections = load_detections(&require_file(cfg.detections.as_ref(), "detections")?).input()?;
    let truth = load_truth(&require_file(cfg.truth.as_ref(), "truth")?).input()?;
    let outcome = match run_audit(&records, &detections, &truth, sample_size, cfg.seed.unwrap_or(0)) {
        Ok(o) => o,
        Err(e @ CorpusError::InsufficientSample { .. }) => return Err(Failure::new(EXIT_AUDIT, e)),
        Err(e) => return Err(Failure::input(e)),
    };
    let sdt = sdt_analysis(&outcome.matrix).map_err(|e| Failure::new(EXIT_AUDIT, e))?;
    Ok((outcome, sdt))
}

pub fn cmd_audit(cfg: &RunConfig) -> Result<(AuditOutcome, SdtResult), Failure> {
    let (outcome, sdt) = audit_records(cfg, cfg.sample_size)?;
    let out = create_out(cfg)?;
    write_sdt(&outcome.matrix, &sdt, &out.join("sdt.csv")).input()?;
    let m = outcome.matrix;
    println!(
        "audit: hits {}, misses {}, false alarms {}, correct rejections {}; d' = {:.2}, beta = {:.2}{}",
        m.hits,
        m.misses,
        m.false_alarms,
        m.correct_rejections,
        sdt.d_prime,
        sdt.beta,
        if sdt.correction_applied {
            " (log-linear correction applied)"
        } else {
            ""
        }
    );
    Ok((outcome, sdt))
}
