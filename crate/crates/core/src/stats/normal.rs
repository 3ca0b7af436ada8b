use std::f64::consts::{PI, SQRT_2};

use libm::erfc;

use super::StatsError;

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Standard normal CDF, accurate in both tails.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// Inverse standard normal CDF.
///
/// Acklam's rational approximation (relative error ~1e-9) followed by one
/// Halley step against [`normal_cdf`]. The upper half is evaluated through
/// the reflection `probit(p) = -probit(1 - p)`, where `1 - p` is exact.
pub fn probit(p: f64) -> Result<f64, StatsError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(StatsError::Domain(p));
    }
    if p > 0.5 {
        return Ok(-lower_probit(1.0 - p));
    }
    Ok(lower_probit(p))
}

fn lower_probit(p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    let x = acklam(p);
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

fn acklam(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_is_zero() {
        assert_eq!(probit(0.5).unwrap(), 0.0);
    }

    #[test]
    fn rejects_closed_endpoints() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(probit(p).is_err(), "{p}");
        }
    }

    #[test]
    fn inverts_cdf_at_integers() {
        for x in [-3.0, -1.0, 0.0, 1.0, 3.0] {
            let z = probit(normal_cdf(x)).unwrap();
            assert!((z - x).abs() < 1e-9, "{x} -> {z}");
        }
    }

    #[test]
    fn antisymmetric() {
        // 1 - p is exact for p in [0.5, 1)
        for p in [0.5001, 0.8, 0.99, 1.0 - 1e-6, 1.0 - 1e-12] {
            let a = probit(p).unwrap();
            let b = probit(1.0 - p).unwrap();
            assert!((a + b).abs() < 1e-9);
        }
    }

    #[test]
    fn finite_at_extremes() {
        let lo = probit(1e-12).unwrap();
        let hi = probit(1.0 - 1e-12).unwrap();
        assert!(lo.is_finite() && hi.is_finite());
        assert!((lo + 7.034_483_825_301_131).abs() < 1e-6);
    }
}
