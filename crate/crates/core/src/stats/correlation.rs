//! Space-time-frequency correlation of the channel: closed-form theoretical
//! value, finite-ray simulation value and Monte-Carlo estimate.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channel::{cluster_state_at, cycle_phasor, ray_delays};
use crate::error::{GbsmError, Result};
use crate::geometry::{los_vector, ClusterPathState};
use crate::quadrature::gauss_legendre_on;
use crate::rays::ANGLE_GUARD;
use crate::scenario::{ChannelPoint, Scenario};
use crate::SPEED_OF_LIGHT;

/// Standardized angles are integrated over `[-Z_MAX, Z_MAX]` per dimension.
pub const Z_MAX: f64 = 6.0;
/// Rule sizes tried in turn until two successive results agree. Each is the
/// node count per dimension on `[-Z_MAX, Z_MAX]`.
pub const QUADRATURE_NODES: [usize; 5] = [8, 16, 32, 64, 128];
/// Agreement required between successive refinements, relative to the
/// larger of the result magnitude and `QUADRATURE_FLOOR`.
pub const QUADRATURE_RTOL: f64 = 1e-4;
pub const QUADRATURE_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LagAxis {
    /// Lags in seconds.
    Time,
    /// Lags in receive elements.
    Space,
    /// Lags in hertz.
    Frequency,
}

impl LagAxis {
    pub fn name(self) -> &'static str {
        match self {
            LagAxis::Time => "time",
            LagAxis::Space => "space",
            LagAxis::Frequency => "frequency",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            LagAxis::Time => "s",
            LagAxis::Space => "elements",
            LagAxis::Frequency => "Hz",
        }
    }

    /// The point displaced from `reference` by `lag` along this axis.
    pub fn shift(self, reference: ChannelPoint, lag: f64) -> Result<ChannelPoint> {
        let mut p = reference;
        match self {
            LagAxis::Time => p.time += lag,
            LagAxis::Frequency => p.freq += lag,
            LagAxis::Space => {
                if lag < 0.0 || lag.fract() != 0.0 {
                    return Err(GbsmError::domain(format!(
                        "spatial lags must be whole non-negative element counts, got {lag}"
                    )));
                }
                p.rx += lag as usize;
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    /// Infinite-ray expectation by quadrature over the angle distribution.
    Theoretical,
    /// Expectation over the phases of the scenario's finite ray set.
    Simulation,
    /// Sample average over independent replicas.
    Empirical { replicas: usize },
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Theoretical => "theoretical",
            Estimator::Simulation => "simulation",
            Estimator::Empirical { .. } => "empirical",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationResult {
    pub axis: LagAxis,
    pub estimator: Estimator,
    pub reference: ChannelPoint,
    pub lags: Vec<f64>,
    /// Correlation normalized by the reference point's power.
    pub values: Vec<Complex64>,
    /// Unnormalized correlation `E[h(a) h(b)*]`.
    pub raw: Vec<Complex64>,
    /// Standard error of each raw value, for empirical estimates.
    pub stderr: Option<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl CorrelationResult {
    pub fn magnitudes(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }
}

/// One cluster's path state and spreads at a channel point.
struct ClusterAt {
    state: ClusterPathState,
    sigma: [f64; 4],
    freq: f64,
}

fn cluster_at(scn: &Scenario, c: usize, p: ChannelPoint) -> Result<ClusterAt> {
    let (tx, rx) = scn.offsets(p.tx, p.rx)?;
    Ok(ClusterAt {
        state: cluster_state_at(&scn.clusters[c], &scn.params.motion, p.time, tx, rx),
        sigma: scn.spreads_at(c, p.freq)?.as_array(),
        freq: p.freq,
    })
}

fn los_term(scn: &Scenario, a: ChannelPoint, b: ChannelPoint) -> Result<Complex64> {
    let k = scn.rician_k();
    if k <= 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let delay = |p: ChannelPoint| -> Result<f64> {
        let (tx, rx) = scn.offsets(p.tx, p.rx)?;
        Ok(los_vector(&scn.params.los, tx, rx, &scn.params.motion, p.time).norm() / SPEED_OF_LIGHT)
    };
    let (da, db) = (delay(a)?, delay(b)?);
    Ok(cycle_phasor(a.freq * da - b.freq * db) * (k / (k + 1.0)))
}

/// Theoretical correlation `E[h(a) h(b)*]` between two channel points, with
/// any quadrature warnings.
pub fn stfcf_theoretical(scn: &Scenario, a: ChannelPoint, b: ChannelPoint) -> Result<(Complex64, Vec<String>)> {
    let k = scn.rician_k();
    let mut total = los_term(scn, a, b)?;
    let mut warnings = Vec::new();
    for c in 0..scn.clusters.len() {
        let (v, warn) = cluster_theoretical(scn, c, a, b)?;
        total += v * (scn.clusters[c].power / (k + 1.0));
        warnings.extend(warn);
    }
    Ok((total, warnings))
}

// Normalized expectation of exp(-j 2 pi (f_a tau_a - f_b tau_b)) over the
// standardized relative angles of one cluster, refined until stable.
fn cluster_theoretical(scn: &Scenario, c: usize, a: ChannelPoint, b: ChannelPoint) -> Result<(Complex64, Option<String>)> {
    let ca = cluster_at(scn, c, a)?;
    let cb = cluster_at(scn, c, b)?;
    let sigma_ref = scn.clusters[c].spreads.as_array();
    let mut prev: Option<Complex64> = None;
    for n in QUADRATURE_NODES {
        let v = cluster_quadrature(scn, c, &ca, &cb, &sigma_ref, n / 2);
        if let Some(p) = prev {
            if (v - p).norm() <= QUADRATURE_RTOL * v.norm().max(QUADRATURE_FLOOR) {
                return Ok((v, None));
            }
        }
        prev = Some(v);
    }
    let n = QUADRATURE_NODES[QUADRATURE_NODES.len() - 1];
    let v = prev.expect("at least one rule");
    Ok((
        v,
        Some(format!(
            "cluster {c}: angle quadrature not converged at {n} nodes per dimension (|value| = {:.3e})",
            v.norm()
        )),
    ))
}

fn cluster_quadrature(scn: &Scenario, c: usize, ca: &ClusterAt, cb: &ClusterAt, sigma_ref: &[f64; 4], n: usize) -> Complex64 {
    let cl = &scn.clusters[c];
    // Path lengths depend on each angle only through its secant, so the
    // integrand is even in every dimension: fold onto the non-negative
    // nodes of an even rule with doubled weights.
    let (z, w) = gauss_legendre_on(2 * n, -Z_MAX, Z_MAX);
    let (z, w) = (z[n..].to_vec(), w[n..].iter().map(|w| 2.0 * w).collect::<Vec<f64>>());
    // Per-dimension weights of the standard normal, truncated where a draw
    // at the reference spread would be rejected by the angle guard.
    let weights: Vec<Vec<f64>> = sigma_ref
        .iter()
        .map(|&s| {
            let raw: Vec<f64> = z
                .iter()
                .zip(&w)
                .map(|(&z, &w)| if (z * s).abs() < ANGLE_GUARD { w * (-0.5 * z * z).exp() } else { 0.0 })
                .collect();
            let mass: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / mass).collect()
        })
        .collect();
    let secants = |sigma: &[f64; 4]| -> Vec<Vec<f64>> {
        sigma
            .iter()
            .map(|&s| z.iter().map(|&z| 1.0 / (z * s).clamp(-ANGLE_GUARD, ANGLE_GUARD).cos()).collect())
            .collect()
    };
    let (sa, sb) = (secants(&ca.sigma), secants(&cb.sigma));
    let vlf = cl.virtual_link_fraction();
    let (r_tx, r_rx, scale) = (cl.r_tx, cl.r_rx, cl.delay_scale);
    let side = |st: &ClusterPathState| {
        let d = st.total_distance;
        let (s, co) = st.rx_elevation.sin_cos();
        (d, d * s, d * co, d / SPEED_OF_LIGHT, (vlf * d - d) / SPEED_OF_LIGHT)
    };
    let (_, va, ha, base_a, off_a) = side(&ca.state);
    let (_, vb, hb, base_b, off_b) = side(&cb.state);
    let (fa, fb) = (ca.freq, cb.freq);
    let k = scale / SPEED_OF_LIGHT;
    let phase0 = fa * (base_a + scale * off_a) - fb * (base_b + scale * off_b);

    let partial: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let w0 = weights[0][i0];
            let mut acc = Complex64::new(0.0, 0.0);
            if w0 == 0.0 {
                return acc;
            }
            for i1 in 0..n {
                let w01 = w0 * weights[1][i1];
                if w01 == 0.0 {
                    continue;
                }
                for i2 in 0..n {
                    let w012 = w01 * weights[2][i2];
                    if w012 == 0.0 {
                        continue;
                    }
                    let vert_a = va * (r_rx * sa[2][i2] + r_tx * sa[0][i0]);
                    let vert_b = vb * (r_rx * sb[2][i2] + r_tx * sb[0][i0]);
                    for i3 in 0..n {
                        let w = w012 * weights[3][i3];
                        if w == 0.0 {
                            continue;
                        }
                        let len_a = vert_a.hypot(ha * (r_rx * sa[3][i3] + r_tx * sa[1][i1]));
                        let len_b = vert_b.hypot(hb * (r_rx * sb[3][i3] + r_tx * sb[1][i1]));
                        acc += cycle_phasor(phase0 + k * (fa * len_a - fb * len_b)) * w;
                    }
                }
            }
            acc
        })
        .collect();
    partial.into_iter().sum()
}

/// Correlation of the scenario's finite ray set: the expectation over ray
/// phases, which leaves the power-weighted sum over rays.
pub fn stfcf_simulation(scn: &Scenario, a: ChannelPoint, b: ChannelPoint) -> Result<Complex64> {
    let k = scn.rician_k();
    let mut total = los_term(scn, a, b)?;
    let (txa, rxa) = scn.offsets(a.tx, a.rx)?;
    let (txb, rxb) = scn.offsets(b.tx, b.rx)?;
    for (c, cl) in scn.clusters.iter().enumerate() {
        let ra = scn.rayset(c, a.freq, 0)?;
        let rb = scn.rayset(c, b.freq, 0)?;
        let da = ray_delays(cl, &ra, &cluster_state_at(cl, &scn.params.motion, a.time, txa, rxa));
        let db = ray_delays(cl, &rb, &cluster_state_at(cl, &scn.params.motion, b.time, txb, rxb));
        let w = cl.power / ((k + 1.0) * ra.len() as f64);
        let s: Complex64 = da
            .iter()
            .zip(&db)
            .map(|(ta, tb)| cycle_phasor(a.freq * ta - b.freq * tb))
            .sum();
        total += s * w;
    }
    Ok(total)
}

/// Monte-Carlo estimate of `E[h(a) h(b)*]` for every `b`, with standard
/// errors, over `replicas` independent replicas.
pub fn empirical_correlation(
    scn: &Scenario,
    a: ChannelPoint,
    bs: &[ChannelPoint],
    replicas: usize,
) -> Result<(Vec<Complex64>, Vec<f64>)> {
    if replicas < 2 {
        return Err(GbsmError::domain("empirical correlation needs at least two replicas"));
    }
    let products = (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let ha = scn.coefficient(a, r)?;
            bs.iter()
                .map(|&b| Ok(ha * scn.coefficient(b, r)?.conj()))
                .collect::<Result<Vec<Complex64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = replicas as f64;
    let mut mean = vec![Complex64::new(0.0, 0.0); bs.len()];
    for row in &products {
        for (m, x) in mean.iter_mut().zip(row) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= n;
    }
    let mut var = vec![0.0; bs.len()];
    for row in &products {
        for ((v, x), m) in var.iter_mut().zip(row).zip(&mean) {
            *v += (x - m).norm_sqr();
        }
    }
    let se = var.into_iter().map(|v| (v / (n * (n - 1.0))).sqrt()).collect();
    Ok((mean, se))
}

/// Correlation between `reference` and its shifts by each of `lags` along
/// `axis`, normalized by the reference point's power.
pub fn correlation(
    scn: &Scenario,
    reference: ChannelPoint,
    axis: LagAxis,
    lags: &[f64],
    estimator: Estimator,
) -> Result<CorrelationResult> {
    let points = lags
        .iter()
        .map(|&l| axis.shift(reference, l))
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    let (raw, power, stderr) = match estimator {
        Estimator::Theoretical => {
            let (p0, w0) = stfcf_theoretical(scn, reference, reference)?;
            warnings.extend(w0);
            let mut raw = Vec::with_capacity(points.len());
            for &b in &points {
                let (v, w) = stfcf_theoretical(scn, reference, b)?;
                warnings.extend(w);
                raw.push(v);
            }
            (raw, p0.re, None)
        }
        Estimator::Simulation => {
            let p0 = stfcf_simulation(scn, reference, reference)?;
            let raw = points
                .iter()
                .map(|&b| stfcf_simulation(scn, reference, b))
                .collect::<Result<Vec<_>>>()?;
            (raw, p0.re, None)
        }
        Estimator::Empirical { replicas } => {
            let mut all = points.clone();
            all.push(reference);
            let (mut mean, mut se) = empirical_correlation(scn, reference, &all, replicas)?;
            let p0 = mean.pop().expect("reference appended").re;
            se.pop();
            (mean, p0, Some(se))
        }
    };
    if !(power > 0.0) {
        return Err(GbsmError::Consistency(format!(
            "reference power {power} is not positive; cannot normalize"
        )));
    }
    warnings.dedup();
    Ok(CorrelationResult {
        axis,
        estimator,
        reference,
        lags: lags.to_vec(),
        values: raw.iter().map(|v| v / power).collect(),
        raw,
        stderr,
        warnings,
    })
}

/// Temporal autocorrelation at lags in seconds.
pub fn acf(scn: &Scenario, reference: ChannelPoint, lags: &[f64], estimator: Estimator) -> Result<CorrelationResult> {
    correlation(scn, reference, LagAxis::Time, lags, estimator)
}

/// Spatial cross-correlation over receive-element separations.
pub fn ccf(scn: &Scenario, reference: ChannelPoint, separations: &[usize], estimator: Estimator) -> Result<CorrelationResult> {
    let lags: Vec<f64> = separations.iter().map(|&s| s as f64).collect();
    correlation(scn, reference, LagAxis::Space, &lags, estimator)
}

/// Frequency correlation at lags in hertz.
pub fn fcf(scn: &Scenario, reference: ChannelPoint, lags: &[f64], estimator: Estimator) -> Result<CorrelationResult> {
    correlation(scn, reference, LagAxis::Frequency, lags, estimator)
}

/// `0, step, 2 step, ...` up to and including `max` (within rounding).
pub fn lag_grid(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step + 1e-9).floor() as usize;
    (0..=n).map(|i| i as f64 * step).collect()
}
