//! Least-squares scaling fits on log-log means.

use serde::Serialize;

use crate::error::{Error, Result};

/// Mean and standard error of one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMean {
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl GridMean {
    pub fn from_samples(n: usize, samples: &[f64]) -> Self {
        let count = samples.len();
        let mean = samples.iter().sum::<f64>() / count.max(1) as f64;
        let stderr = if count > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64;
            (var / count as f64).sqrt()
        } else {
            0.0
        };
        Self {
            n,
            mean,
            stderr,
            count,
        }
    }
}

/// `mean ~ a n^b`, and the one-parameter alternative `mean ~ a' sqrt(n) ln n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub points: Vec<GridMean>,
    /// Grid points left out because their mean was not positive.
    pub excluded: Vec<usize>,
    pub a: f64,
    pub b: f64,
    /// Euclidean norm of the log residuals of the power law.
    pub residual: f64,
    pub sqrt_log_a: f64,
    pub sqrt_log_residual: f64,
}

/// Fits both models to per-`n` means. Needs at least three grid points, two
/// of them with a positive mean.
pub fn fit_scaling(points: &[GridMean]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::Parameter(format!(
            "scaling fit needs at least 3 grid points, got {}",
            points.len()
        )));
    }
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for p in points {
        if p.mean > 0.0 && p.mean.is_finite() {
            used.push(*p);
        } else {
            log::warn!("n = {}: mean {} is not positive, left out of the fit", p.n, p.mean);
            excluded.push(p.n);
        }
    }
    if used.len() < 2 {
        return Err(Error::Parameter("fewer than 2 positive means to fit".into()));
    }
    let xs: Vec<f64> = used.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.mean.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Parameter("scaling fit needs distinct n values".into()));
    }
    let b = sxy / sxx;
    let log_a = my - b * mx;
    let residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - log_a - b * x).powi(2))
        .sum::<f64>()
        .sqrt();

    // log mean = log a' + log(sqrt(n) ln n)
    let shape: Vec<f64> = used
        .iter()
        .map(|p| {
            let n = p.n as f64;
            (n.sqrt() * n.ln()).ln()
        })
        .collect();
    let log_a2 = ys.iter().zip(&shape).map(|(y, s)| y - s).sum::<f64>() / k;
    let sqrt_log_residual = ys
        .iter()
        .zip(&shape)
        .map(|(y, s)| (y - s - log_a2).powi(2))
        .sum::<f64>()
        .sqrt();

    Ok(ScalingFit {
        points: points.to_vec(),
        excluded,
        a: log_a.exp(),
        b,
        residual,
        sqrt_log_a: log_a2.exp(),
        sqrt_log_residual,
    })
}
