//! Delay and angle dispersion: RMS delay spread, empirical CDFs and
//! goodness of fit against a Gaussian.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GbsmError, Result};
use crate::scenario::{Scenario, ScenarioParams};

use super::psd::DelayPsd;

/// Square root of the second central moment of a power-delay profile.
pub fn rms_delay_spread(profile: &[(f64, f64)]) -> Result<f64> {
    let total: f64 = profile.iter().map(|p| p.1).sum();
    if !(total > 0.0) {
        return Err(GbsmError::domain("delay spread needs positive total power"));
    }
    if profile.iter().any(|p| p.1 < 0.0) {
        return Err(GbsmError::domain("delay profile has negative power"));
    }
    let mean = profile.iter().map(|(d, p)| d * p).sum::<f64>() / total;
    let var = profile.iter().map(|(d, p)| p * (d - mean).powi(2)).sum::<f64>() / total;
    Ok(var.max(0.0).sqrt())
}

pub fn psd_delay_spread(psd: &DelayPsd) -> Result<f64> {
    rms_delay_spread(&psd.bins)
}

/// Sorted samples paired with their empirical CDF values `i / n`.
pub fn empirical_cdf(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.into_iter().enumerate().map(|(i, x)| (x, (i + 1) as f64 / n)).collect()
}

/// Empirical CDF of `sorted` evaluated at `x`.
pub fn ecdf_at(sorted: &[f64], x: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    sorted.partition_point(|&s| s <= x) as f64 / sorted.len() as f64
}

/// Kolmogorov-Smirnov distance between the samples and `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// KS distance to a zero-mean Gaussian with standard deviation `sigma`.
pub fn ks_gaussian(samples: &[f64], sigma: f64) -> Result<f64> {
    let n = Normal::new(0.0, sigma).map_err(|e| GbsmError::domain(e.to_string()))?;
    Ok(ks_statistic(samples, |x| n.cdf(x)))
}

/// Which of the four relative angles to collect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleDim {
    TxElevation,
    TxAzimuth,
    RxElevation,
    RxAzimuth,
}

impl AngleDim {
    pub fn index(self) -> usize {
        match self {
            AngleDim::TxElevation => 0,
            AngleDim::TxAzimuth => 1,
            AngleDim::RxElevation => 2,
            AngleDim::RxAzimuth => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AngleDim::TxElevation => "tx_elevation",
            AngleDim::TxAzimuth => "tx_azimuth",
            AngleDim::RxElevation => "rx_elevation",
            AngleDim::RxAzimuth => "rx_azimuth",
        }
    }
}

/// Relative angles of every ray of cluster `cluster` at `freq`, pooled over
/// one scenario draw per seed.
pub fn relative_angle_samples(
    params: &ScenarioParams,
    seeds: &[u64],
    cluster: usize,
    freq: f64,
    dim: AngleDim,
) -> Result<Vec<f64>> {
    let per_seed = seeds
        .par_iter()
        .map(|&seed| {
            let s = Scenario::new(params.clone(), seed)?;
            if cluster >= s.clusters.len() {
                return Err(GbsmError::domain(format!(
                    "cluster {cluster} requested but the scenario has {}",
                    s.clusters.len()
                )));
            }
            let set = s.rayset(cluster, freq, 0)?;
            Ok(set.rays.iter().map(|r| r.rel.as_array()[dim.index()]).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_seed.into_iter().flatten().collect())
}

/// Cluster-level spread of one dimension at `freq`, one value per seed.
pub fn cluster_spread_samples(params: &ScenarioParams, seeds: &[u64], cluster: usize, freq: f64, dim: AngleDim) -> Result<Vec<f64>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let s = Scenario::new(params.clone(), seed)?;
            if cluster >= s.clusters.len() {
                return Err(GbsmError::domain(format!("cluster {cluster} outside the scenario")));
            }
            Ok(s.spreads_at(cluster, freq)?.as_array()[dim.index()])
        })
        .collect()
}

/// Whether the CDF of `wide` is flatter than that of `narrow` on `grid`: no
/// higher above zero and no lower below zero, within `tol`.
pub fn is_flatter(wide: &[f64], narrow: &[f64], grid: &[f64], tol: f64) -> bool {
    let mut w = wide.to_vec();
    let mut n = narrow.to_vec();
    w.sort_by(f64::total_cmp);
    n.sort_by(f64::total_cmp);
    grid.iter().all(|&x| {
        let (fw, fn_) = (ecdf_at(&w, x), ecdf_at(&n, x));
        if x >= 0.0 {
            fw <= fn_ + tol
        } else {
            fw + tol >= fn_
        }
    })
}
