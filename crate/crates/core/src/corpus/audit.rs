use std::collections::HashMap;

use crate::records::{ArticleRecord, DetectionEvidence, OaStatus};
use crate::stats::{build_confusion_from_audit, ConfusionMatrix};

use super::generate::GroundTruth;
use super::rng::CorpusRng;
use super::CorpusError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditOutcome {
    pub matrix: ConfusionMatrix,
    /// Audited article ids, in record order.
    pub oa_sample: Vec<String>,
    pub noa_sample: Vec<String>,
}

/// Samples `sample_size` robot-OA and robot-NOA articles uniformly without
/// replacement and scores them against the true labels.
pub fn run_audit(
    records: &[ArticleRecord],
    detections: &[DetectionEvidence],
    truth: &[GroundTruth],
    sample_size: usize,
    seed: u64,
) -> Result<AuditOutcome, CorpusError> {
    let verdicts: HashMap<&str, OaStatus> = detections.iter().map(|d| (d.article_id.as_str(), d.verdict)).collect();
    let labels: HashMap<&str, OaStatus> = truth.iter().map(|t| (t.article_id.as_str(), t.true_status)).collect();

    let mut oa = Vec::new();
    let mut noa = Vec::new();
    for r in records {
        match verdicts.get(r.id.as_str()) {
            Some(OaStatus::Oa) => oa.push(r.id.as_str()),
            Some(OaStatus::Noa) => noa.push(r.id.as_str()),
            Some(OaStatus::Unknown) => {}
            None => return Err(CorpusError::MissingDetection(r.id.clone())),
        }
    }
    for (tag, pool) in [(OaStatus::Oa, &oa), (OaStatus::Noa, &noa)] {
        if pool.len() < sample_size {
            return Err(CorpusError::InsufficientSample {
                tag,
                available: pool.len(),
                requested: sample_size,
            });
        }
    }

    let mut rng = CorpusRng::new(seed);
    let mut draw = |pool: &[&str]| -> Vec<String> {
        let mut idx = rng.sample_indices(pool.len(), sample_size);
        idx.sort_unstable();
        idx.into_iter().map(|i| pool[i].to_string()).collect()
    };
    let oa_sample = draw(&oa);
    let noa_sample = draw(&noa);

    let label = |id: &String| -> Result<OaStatus, CorpusError> {
        labels
            .get(id.as_str())
            .copied()
            .ok_or_else(|| CorpusError::MissingTruth(id.clone()))
    };
    let oa_truth = oa_sample.iter().map(label).collect::<Result<Vec<_>, _>>()?;
    let noa_truth = noa_sample.iter().map(label).collect::<Result<Vec<_>, _>>()?;
    let matrix = build_confusion_from_audit(&oa_truth, &noa_truth)?;
    Ok(AuditOutcome {
        matrix,
        oa_sample,
        noa_sample,
    })
}
