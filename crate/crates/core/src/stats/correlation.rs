use super::special::student_t_two_tailed;
use super::StatsError;

/// Pearson correlation with its t-test significance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub t_stat: f64,
    pub df: usize,
    pub p_two_tailed: f64,
    pub p_one_tailed: f64,
    /// Set when |r| = 1 and the p values are clamped to the smallest positive double.
    pub p_at_floor: bool,
}

/// Product-moment correlation coefficient, computed from centered sums.
pub fn pearson_r(xs: &[f64], ys: &[f64]) -> Result<f64, StatsError> {
    if xs.len() != ys.len() {
        return Err(StatsError::LengthMismatch(xs.len(), ys.len()));
    }
    let n = xs.len();
    if n < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: n });
    }
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Significance of `r` over `n` pairs via `t = r * sqrt((n-2)/(1-r^2))`, df = n-2.
pub fn r_to_p(r: f64, n: usize) -> Result<CorrelationResult, StatsError> {
    if !r.is_finite() || r.abs() > 1.0 {
        return Err(StatsError::InvalidCorrelation(r));
    }
    if n < 3 {
        return Err(StatsError::TooFewPoints { needed: 3, got: n });
    }
    let df = n - 2;
    if r.abs() == 1.0 {
        return Ok(CorrelationResult {
            r,
            n,
            t_stat: r * f64::INFINITY,
            df,
            p_two_tailed: f64::MIN_POSITIVE,
            p_one_tailed: f64::MIN_POSITIVE,
            p_at_floor: true,
        });
    }
    let t_stat = r * (df as f64 / (1.0 - r * r)).sqrt();
    let p_two = student_t_two_tailed(t_stat, df as f64).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(CorrelationResult {
        r,
        n,
        t_stat,
        df,
        p_two_tailed: p_two,
        p_one_tailed: p_two / 2.0,
        p_at_floor: false,
    })
}
