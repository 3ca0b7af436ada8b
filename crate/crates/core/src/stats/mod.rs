//! Statistics kernel: normal and Student-t primitives, Pearson correlation
//! with significance, and single-point signal-detection analysis.

mod correlation;
mod normal;
mod sdt;
mod special;

pub use correlation::{pearson_r, r_to_p, CorrelationResult};
pub use normal::{normal_cdf, normal_pdf, probit};
pub use sdt::{build_confusion_from_audit, sdt_analysis, ConfusionMatrix, SdtResult};
pub use special::{regularized_incomplete_beta, student_t_two_tailed};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("probability {0} is outside the open interval (0, 1)")]
    Domain(f64),
    #[error("input lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("ZERO_VARIANCE: input is constant")]
    ZeroVariance,
    #[error("correlation {0} is not a finite value in [-1, 1]")]
    InvalidCorrelation(f64),
    #[error("empty audit sample")]
    EmptySample,
    #[error("audit label must be OA or NOA, found UNKNOWN")]
    UnknownLabel,
    #[error("degenerate confusion matrix: {0}")]
    DegenerateMatrix(&'static str),
}
