//! Monte-Carlo engine: trial batches, error decompositions and decay sweeps.
//!
//! Trial `t` draws latents, graph and fitting randomness from seeds derived from
//! `(master_seed, t)`, so every batch is a pure function of its inputs regardless of
//! how trials are scheduled across threads.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::estimators::{estimate, Estimator, EstimatorOptions};
use crate::graphon::{graphon_entropy, GraphonSpec, DEFAULT_QUAD_POINTS};
use crate::numeric::compensated_sum;
use crate::sampler::{derive_seed, rho_schedule, sample_graph, sample_latents, Regime};

/// Outcome of one estimator on one trial.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub value: Option<f64>,
    pub variance: Option<f64>,
    pub rho_hat: f64,
    pub error: Option<String>,
}

/// Error decomposition of a batch. `rmse² = bias² + variance` with the variance taken
/// about the batch mean (population form); `srmse` uses the spread about the mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub bias2: f64,
    pub variance: f64,
    pub rmse: f64,
    pub rmse_about_mean: f64,
    pub srmse: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialBatch {
    pub spec_id: String,
    pub estimator: Estimator,
    pub n: usize,
    pub rho_n: f64,
    pub regime: Regime,
    pub outcomes: Vec<TrialOutcome>,
    pub truth: f64,
    /// `None` when fewer than two trials succeeded.
    pub summary: Option<Summary>,
}

impl TrialBatch {
    pub fn trials(&self) -> usize {
        self.outcomes.len()
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| o.value.is_none()).count()
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.outcomes.iter().filter_map(|o| o.value).collect()
    }

    /// Same batch with entropies in bits (variances and squared bias scaled by `1/ln² 2`).
    pub fn in_bits(&self) -> TrialBatch {
        let s = 1.0 / std::f64::consts::LN_2;
        let s2 = s * s;
        TrialBatch {
            outcomes: self
                .outcomes
                .iter()
                .map(|o| TrialOutcome { value: o.value.map(|v| v * s), variance: o.variance.map(|v| v * s2), ..o.clone() })
                .collect(),
            truth: self.truth * s,
            summary: self.summary.map(|m| Summary {
                mean: m.mean * s,
                bias2: m.bias2 * s2,
                variance: m.variance * s2,
                rmse: m.rmse * s,
                rmse_about_mean: m.rmse_about_mean * s,
                srmse: m.srmse * s,
            }),
            ..self.clone()
        }
    }
}

/// Settings shared by every batch.
#[derive(Clone, Debug)]
pub struct BatchSettings {
    pub estimators: Vec<Estimator>,
    pub trials: usize,
    pub master_seed: u64,
    pub options: EstimatorOptions,
    pub regime: Regime,
    pub quad_points: usize,
}

impl Default for BatchSettings {
    fn default() -> Self {
        Self {
            estimators: Estimator::ALL.to_vec(),
            trials: 100,
            master_seed: 0,
            options: EstimatorOptions::default(),
            regime: Regime::Dense,
            quad_points: DEFAULT_QUAD_POINTS,
        }
    }
}

/// Divisor `√|ρ ln ρ|`, or 1 in the dense regime.
fn srmse_divisor(rho_n: f64, dense: bool) -> f64 {
    if dense {
        1.0
    } else {
        (rho_n * rho_n.ln()).abs().sqrt()
    }
}

/// Root-mean-square deviation of `estimates` about their mean, divided by `√|ρₙ ln ρₙ|`
/// (by 1 when `dense`).
pub fn srmse(estimates: &[f64], rho_n: f64, dense: bool) -> Result<f64> {
    if estimates.len() < 2 {
        return Err(domain(format!("sRMSE needs at least 2 estimates, got {}", estimates.len())));
    }
    let m = estimates.len() as f64;
    let mean = compensated_sum(estimates.iter().copied()) / m;
    let var = compensated_sum(estimates.iter().map(|x| (x - mean).powi(2))) / m;
    let div = srmse_divisor(rho_n, dense);
    if !(div > 0.0) {
        return Err(domain(format!("sRMSE divisor vanishes at rho = {rho_n}")));
    }
    Ok(var.sqrt() / div)
}

pub fn summarize(estimates: &[f64], truth: f64, rho_n: f64, dense: bool) -> Option<Summary> {
    if estimates.len() < 2 {
        return None;
    }
    let m = estimates.len() as f64;
    let mean = compensated_sum(estimates.iter().copied()) / m;
    let variance = compensated_sum(estimates.iter().map(|x| (x - mean).powi(2))) / m;
    let mse = compensated_sum(estimates.iter().map(|x| (x - truth).powi(2))) / m;
    let rmse_about_mean = variance.sqrt();
    Some(Summary {
        mean,
        bias2: (mean - truth).powi(2),
        variance,
        rmse: mse.sqrt(),
        rmse_about_mean,
        srmse: rmse_about_mean / srmse_divisor(rho_n, dense),
    })
}

/// Seeds for trial `t`: latents, graph, and estimator randomness.
pub fn trial_seeds(master_seed: u64, t: usize) -> (u64, u64, u64) {
    let s = derive_seed(master_seed, t as u64);
    (derive_seed(s, 0), derive_seed(s, 1), derive_seed(s, 2))
}

/// Runs `settings.trials` independent trials of `spec` at `n` nodes, applying every
/// requested estimator to each sampled graph. Returns one batch per estimator.
pub fn run_batch(spec: &GraphonSpec<f64>, spec_id: &str, n: usize, settings: &BatchSettings) -> Result<Vec<TrialBatch>> {
    if settings.trials < 2 {
        return Err(domain(format!("a batch needs at least 2 trials, got {}", settings.trials)));
    }
    if n < 2 {
        return Err(domain(format!("a batch needs at least 2 nodes, got {n}")));
    }
    if settings.estimators.is_empty() {
        return Err(domain("no estimators requested"));
    }
    let truth = graphon_entropy(spec, settings.quad_points)?;
    let per_trial: Vec<Vec<TrialOutcome>> = (0..settings.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<TrialOutcome>> {
            let (s_lat, s_graph, s_fit) = trial_seeds(settings.master_seed, t);
            let xi = sample_latents(n, s_lat)?;
            let g = sample_graph(spec, &xi, s_graph);
            let mut opts = settings.options.clone();
            opts.fit.seed = s_fit;
            let rho_hat = g.edge_count() as f64 / crate::graph::pair_count(n) as f64;
            Ok(settings
                .estimators
                .iter()
                .map(|&e| match estimate::<f64>(&g, e, &opts) {
                    Ok(est) => TrialOutcome {
                        trial: t,
                        value: Some(est.value),
                        variance: est.asymptotic_variance,
                        rho_hat,
                        error: None,
                    },
                    Err(err) => TrialOutcome { trial: t, value: None, variance: None, rho_hat, error: Some(err.to_string()) },
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let dense = settings.regime == Regime::Dense;
    let rho_n = spec.rho();
    Ok(settings
        .estimators
        .iter()
        .enumerate()
        .map(|(idx, &e)| {
            let outcomes: Vec<TrialOutcome> = per_trial.iter().map(|row| row[idx].clone()).collect();
            let values: Vec<f64> = outcomes.iter().filter_map(|o| o.value).collect();
            TrialBatch {
                spec_id: spec_id.to_string(),
                estimator: e,
                n,
                rho_n,
                regime: settings.regime,
                summary: summarize(&values, truth, rho_n, dense),
                outcomes,
                truth,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub srmse: f64,
    pub regime: Regime,
    pub estimator: Estimator,
    pub rho_n: f64,
}

/// sRMSE of one estimator across increasing `n`, with `ρₙ = rho_schedule(n, regime, level)`.
pub fn decay_sweep(
    shape: &GraphonSpec<f64>,
    spec_id: &str,
    estimator: Estimator,
    n_list: &[usize],
    level: f64,
    settings: &BatchSettings,
) -> Result<(Vec<SweepRow>, Vec<TrialBatch>)> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("n values of a sweep must be strictly increasing"));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    let mut batches = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let rho_n = rho_schedule(n, settings.regime, level)?;
        let spec = shape.with_rho(rho_n)?;
        let mut s = settings.clone();
        s.estimators = vec![estimator];
        s.master_seed = derive_seed(settings.master_seed, n as u64);
        let batch = run_batch(&spec, spec_id, n, &s)?.remove(0);
        let values = batch.estimates();
        rows.push(SweepRow { n, srmse: srmse(&values, rho_n, settings.regime == Regime::Dense)?, regime: settings.regime, estimator, rho_n });
        batches.push(batch);
    }
    Ok((rows, batches))
}

/// Least-squares slope of `ln srmse` against `ln n`.
pub fn loglog_slope(rows: &[SweepRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), r.srmse.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub const BATCH_CSV_HEADER: &str = "spec,estimator,n,rho_n,trial,rho_hat,value,variance,error";
pub const SUMMARY_CSV_HEADER: &str =
    "spec,estimator,n,rho_n,regime,trials,failures,truth,mean,bias2,variance,rmse,rmse_about_mean,srmse";
pub const SWEEP_CSV_HEADER: &str = "n,srmse,regime,estimator,rho_n";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per (trial, estimator).
pub fn write_batch_csv<W: Write>(mut w: W, batches: &[TrialBatch]) -> io::Result<()> {
    writeln!(w, "{BATCH_CSV_HEADER}")?;
    for b in batches {
        for o in &b.outcomes {
            let err = o.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                b.spec_id,
                b.estimator,
                b.n,
                b.rho_n,
                o.trial,
                o.rho_hat,
                opt(o.value),
                opt(o.variance),
                err
            )?;
        }
    }
    Ok(())
}

/// One row per (spec, estimator, n).
pub fn write_summary_csv<W: Write>(mut w: W, batches: &[TrialBatch]) -> io::Result<()> {
    writeln!(w, "{SUMMARY_CSV_HEADER}")?;
    for b in batches {
        let s = b.summary;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            b.spec_id,
            b.estimator,
            b.n,
            b.rho_n,
            b.regime,
            b.trials(),
            b.failures(),
            b.truth,
            opt(s.map(|s| s.mean)),
            opt(s.map(|s| s.bias2)),
            opt(s.map(|s| s.variance)),
            opt(s.map(|s| s.rmse)),
            opt(s.map(|s| s.rmse_about_mean)),
            opt(s.map(|s| s.srmse)),
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.n, r.srmse, r.regime, r.estimator, r.rho_n)?;
    }
    Ok(())
}
