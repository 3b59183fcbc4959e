//! Least-squares fitting of model parameters to a target curve.

use std::cell::Cell;

use rand::Rng;

use crate::error::{GbsmError, Result};
use crate::rng::{stream, Purpose, StreamKey};

/// Inclusive search interval of one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub lower: f64,
    pub upper: f64,
}

impl Bound {
    pub fn new(lower: f64, upper: f64) -> Result<Bound> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(GbsmError::domain(format!("invalid bound [{lower}, {upper}]")));
        }
        Ok(Bound { lower, upper })
    }

    fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitOptions {
    /// Extra random starting points after the box center.
    pub restarts: usize,
    pub max_evaluations: usize,
    /// Search stops once every step is below this fraction of its bound.
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            restarts: 3,
            max_evaluations: 2000,
            step_tolerance: 1e-6,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Vec<f64>,
    pub mse: f64,
    pub evaluations: usize,
    /// False when the evaluation budget ran out before the steps shrank.
    pub converged: bool,
}

/// Minimizes the mean squared error between `model(params)` and `target` by
/// compass search inside `bounds`, from the box center and from seeded
/// random restarts. Deterministic for a deterministic model.
pub fn fit_parameter<F>(model: F, target: &[f64], bounds: &[Bound], options: &FitOptions) -> Result<FitResult>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    if bounds.is_empty() {
        return Err(GbsmError::Fit("no parameters to fit".into()));
    }
    if target.is_empty() {
        return Err(GbsmError::Fit("empty target".into()));
    }
    let evaluations = Cell::new(0usize);
    let objective = |p: &[f64]| -> Result<f64> {
        evaluations.set(evaluations.get() + 1);
        let y = model(p)?;
        if y.len() != target.len() {
            return Err(GbsmError::Fit(format!(
                "model returned {} values for a target of {}",
                y.len(),
                target.len()
            )));
        }
        let mse = y.iter().zip(target).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / y.len() as f64;
        Ok(if mse.is_finite() { mse } else { f64::INFINITY })
    };

    let mut starts = vec![bounds.iter().map(|b| 0.5 * (b.lower + b.upper)).collect::<Vec<_>>()];
    for r in 0..options.restarts {
        let mut rng = stream(options.seed, StreamKey::new(Purpose::FitRestart).replica(r as u64));
        starts.push(bounds.iter().map(|b| rng.random_range(b.lower..=b.upper)).collect());
    }
    let budget = options.max_evaluations.max(1);
    let per_start = (budget / starts.len()).max(1);

    let mut best: Option<(Vec<f64>, f64, bool)> = None;
    for start in starts {
        let limit = evaluations.get() + per_start;
        let mut x = start;
        let mut fx = objective(&x)?;
        let mut steps: Vec<f64> = bounds.iter().map(|b| 0.25 * b.width()).collect();
        let mut converged = false;
        while evaluations.get() < limit {
            if steps.iter().zip(bounds).all(|(s, b)| *s < options.step_tolerance * b.width()) {
                converged = true;
                break;
            }
            let mut improved = false;
            for i in 0..x.len() {
                for dir in [1.0, -1.0] {
                    if evaluations.get() >= limit {
                        break;
                    }
                    let mut y = x.clone();
                    y[i] = (x[i] + dir * steps[i]).clamp(bounds[i].lower, bounds[i].upper);
                    if y[i] == x[i] {
                        continue;
                    }
                    let fy = objective(&y)?;
                    if fy < fx {
                        x = y;
                        fx = fy;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                for s in &mut steps {
                    *s *= 0.5;
                }
            }
        }
        if best.as_ref().is_none_or(|b| fx < b.1) {
            best = Some((x, fx, converged));
        }
    }
    let (params, mse, converged) = best.expect("at least one start");
    if !mse.is_finite() {
        return Err(GbsmError::Fit("model produced no finite error anywhere in the bounds".into()));
    }
    Ok(FitResult {
        params,
        mse,
        evaluations: evaluations.get(),
        converged,
    })
}
