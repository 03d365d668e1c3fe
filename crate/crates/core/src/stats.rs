//! Normality diagnostics for Monte-Carlo estimate samples.

use statrs::function::erf::erfc;

use crate::error::{domain, Error, Result};
use crate::numeric::compensated_sum;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Kolmogorov–Smirnov statistic `sup |F_n − Φ|` of already standardized data.
pub fn ks_statistic_normal(z: &[f64]) -> f64 {
    let mut s = z.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in s.iter().enumerate() {
        let f = normal_cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic p-value `Q_KS((√n + 0.12 + 0.11/√n) D)` of the one-sample KS test.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    kolmogorov_q(lambda)
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2 j² λ²}`.
pub fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut prev = 0.0_f64;
    for j in 1..=100 {
        let jf = j as f64;
        let term = sign * 2.0 * (a * jf * jf).exp();
        sum += term;
        if term.abs() <= 1e-12 * prev || term.abs() <= 1e-300 * sum.abs() {
            return sum.clamp(0.0, 1.0);
        }
        sign = -sign;
        prev = term.abs();
    }
    // series has not settled: λ is small, so the tail probability is essentially 1
    1.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CltDiagnostic {
    pub ks_statistic: f64,
    pub p_value: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

pub const CLT_MIN_SAMPLES: usize = 100;

/// Standardizes by the sample mean and SD, then reports the KS test against `N(0, 1)`
/// together with sample skewness and excess kurtosis.
pub fn clt_diagnostic(x: &[f64]) -> Result<CltDiagnostic> {
    if x.len() < CLT_MIN_SAMPLES {
        return Err(domain(format!("need at least {CLT_MIN_SAMPLES} samples, got {}", x.len())));
    }
    let n = x.len() as f64;
    let mean = compensated_sum(x.iter().copied()) / n;
    let m2 = compensated_sum(x.iter().map(|v| (v - mean).powi(2))) / n;
    let m3 = compensated_sum(x.iter().map(|v| (v - mean).powi(3))) / n;
    let m4 = compensated_sum(x.iter().map(|v| (v - mean).powi(4))) / n;
    let sd = (m2 * n / (n - 1.0)).sqrt();
    if !(sd > 0.0) {
        return Err(Error::Degenerate("sample has zero standard deviation".into()));
    }
    let z: Vec<f64> = x.iter().map(|v| (v - mean) / sd).collect();
    let d = ks_statistic_normal(&z);
    Ok(CltDiagnostic {
        ks_statistic: d,
        p_value: ks_p_value(d, x.len()),
        skewness: m3 / m2.powf(1.5),
        excess_kurtosis: m4 / (m2 * m2) - 3.0,
    })
}
