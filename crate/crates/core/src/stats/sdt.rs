use crate::records::OaStatus;

use super::normal::probit;
use super::StatsError;

/// Audit outcome counts, conditioned on the true class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    /// True OA called OA.
    pub hits: u64,
    /// True OA called NOA.
    pub misses: u64,
    /// True NOA called OA.
    pub false_alarms: u64,
    /// True NOA called NOA.
    pub correct_rejections: u64,
}

impl ConfusionMatrix {
    pub fn new(hits: u64, misses: u64, false_alarms: u64, correct_rejections: u64) -> Self {
        ConfusionMatrix {
            hits,
            misses,
            false_alarms,
            correct_rejections,
        }
    }

    /// Exchanges the roles of the signal and noise populations.
    pub fn swap_populations(self) -> Self {
        ConfusionMatrix {
            hits: self.correct_rejections,
            misses: self.false_alarms,
            false_alarms: self.misses,
            correct_rejections: self.hits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdtResult {
    pub hit_rate: f64,
    pub fa_rate: f64,
    pub d_prime: f64,
    pub beta: f64,
    pub criterion_c: f64,
    /// Whether the +0.5 log-linear correction was applied to the counts.
    pub correction_applied: bool,
}

/// Pools the robot-OA and robot-NOA audit samples and conditions on the
/// manually checked true class.
pub fn build_confusion_from_audit(
    oa_tagged_truth: &[OaStatus],
    noa_tagged_truth: &[OaStatus],
) -> Result<ConfusionMatrix, StatsError> {
    if oa_tagged_truth.is_empty() || noa_tagged_truth.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut m = ConfusionMatrix::default();
    for label in oa_tagged_truth {
        match label {
            OaStatus::Oa => m.hits += 1,
            OaStatus::Noa => m.false_alarms += 1,
            OaStatus::Unknown => return Err(StatsError::UnknownLabel),
        }
    }
    for label in noa_tagged_truth {
        match label {
            OaStatus::Oa => m.misses += 1,
            OaStatus::Noa => m.correct_rejections += 1,
            OaStatus::Unknown => return Err(StatsError::UnknownLabel),
        }
    }
    Ok(m)
}

/// Single-point d', criterion c and likelihood-ratio bias beta.
pub fn sdt_analysis(m: &ConfusionMatrix) -> Result<SdtResult, StatsError> {
    let signal = m.hits + m.misses;
    let noise = m.false_alarms + m.correct_rejections;
    if signal == 0 {
        return Err(StatsError::DegenerateMatrix("no true-OA items (hits + misses = 0)"));
    }
    if noise == 0 {
        return Err(StatsError::DegenerateMatrix(
            "no true-NOA items (false alarms + correct rejections = 0)",
        ));
    }
    let degenerate = |num: u64, den: u64| num == 0 || num == den;
    let correction_applied = degenerate(m.hits, signal) || degenerate(m.false_alarms, noise);
    let (hit_rate, fa_rate) = if correction_applied {
        (
            (m.hits as f64 + 0.5) / (signal as f64 + 1.0),
            (m.false_alarms as f64 + 0.5) / (noise as f64 + 1.0),
        )
    } else {
        (m.hits as f64 / signal as f64, m.false_alarms as f64 / noise as f64)
    };
    let z_hit = probit(hit_rate)?;
    let z_fa = probit(fa_rate)?;
    Ok(SdtResult {
        hit_rate,
        fa_rate,
        d_prime: z_hit - z_fa,
        beta: ((z_fa * z_fa - z_hit * z_hit) / 2.0).exp(),
        criterion_c: -(z_hit + z_fa) / 2.0,
        correction_applied,
    })
}
