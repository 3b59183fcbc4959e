//! Intra-cluster rays: relative angles about the cluster center and the
//! random phases attached to each ray.
//!
//! Both ray models store their angles in standardized form (unit variance)
//! and scale them by the angle spread of the current sub-band. Moving to a new
//! sub-band therefore rescales every ray without disturbing its identity or its
//! phase.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GbsmError, Result};
use crate::geometry::RelativeAngles;
use crate::scattering::scale_sigma;

/// Relative angles are kept strictly inside this magnitude so the ray
/// geometry stays finite.
pub const ANGLE_GUARD: f64 = 0.99 * FRAC_PI_2;

/// One standard deviation per relative-angle dimension, radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AngleSpreads {
    pub tx_elevation: f64,
    pub tx_azimuth: f64,
    pub rx_elevation: f64,
    pub rx_azimuth: f64,
}

impl AngleSpreads {
    pub fn as_array(&self) -> [f64; 4] {
        [self.tx_elevation, self.tx_azimuth, self.rx_elevation, self.rx_azimuth]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        AngleSpreads {
            tx_elevation: a[0],
            tx_azimuth: a[1],
            rx_elevation: a[2],
            rx_azimuth: a[3],
        }
    }

    /// Spreads at `freq`, each following its own power-law exponent.
    pub fn at_frequency(&self, ref_freq: f64, exponents: &AngleSpreads, freq: f64) -> Result<AngleSpreads> {
        let s = self.as_array();
        let e = exponents.as_array();
        let mut out = [0.0; 4];
        for i in 0..4 {
            out[i] = scale_sigma(s[i], ref_freq, e[i], freq)?;
        }
        Ok(AngleSpreads::from_array(out))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RayModel {
    /// Independent Gaussian draws, one fresh set per Monte-Carlo replica.
    TheoreticalMc,
    /// Equal-area quantiles of the Gaussian law.
    SimulationMea,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub rel: RelativeAngles,
    /// Initial phase in `(0, 2pi]`.
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaySet {
    pub cluster_id: u64,
    pub subband_index: usize,
    pub model: RayModel,
    pub spreads: AngleSpreads,
    pub rays: Vec<Ray>,
    unit: Vec<[f64; 4]>,
}

impl RaySet {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// Standardized angles of every ray, ordered like [`RelativeAngles::as_array`].
    pub fn unit_angles(&self) -> &[[f64; 4]] {
        &self.unit
    }

    fn from_parts(cluster_id: u64, model: RayModel, unit: Vec<[f64; 4]>, phases: Vec<f64>, spreads: AngleSpreads) -> RaySet {
        let mut set = RaySet {
            cluster_id,
            subband_index: 0,
            model,
            spreads,
            rays: phases
                .into_iter()
                .map(|phase| Ray {
                    rel: RelativeAngles::default(),
                    phase,
                })
                .collect(),
            unit,
        };
        set.apply_spreads(spreads);
        set
    }

    fn apply_spreads(&mut self, spreads: AngleSpreads) {
        let s = spreads.as_array();
        for (ray, u) in self.rays.iter_mut().zip(&self.unit) {
            let a = |i: usize| {
                let v = u[i] * s[i];
                v.clamp(-ANGLE_GUARD, ANGLE_GUARD)
            };
            ray.rel = RelativeAngles {
                tx_elevation: a(0),
                tx_azimuth: a(1),
                rx_elevation: a(2),
                rx_azimuth: a(3),
            };
        }
        self.spreads = spreads;
    }

    /// The same rays regenerated for another sub-band. Angles follow the new
    /// spreads; pairing and phases are kept.
    pub fn refresh_for_subband(&self, spreads: AngleSpreads, subband_index: usize) -> RaySet {
        let mut next = self.clone();
        next.subband_index = subband_index;
        if spreads != self.spreads {
            next.apply_spreads(spreads);
        }
        next
    }

    pub fn with_cluster_id(mut self, cluster_id: u64) -> RaySet {
        self.cluster_id = cluster_id;
        self
    }
}

/// Uniform phase on `(0, 2pi]`.
pub fn draw_phase<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.random();
    2.0 * PI * (1.0 - u)
}

/// Zero-mean Gaussian relative angles. Draws reaching [`ANGLE_GUARD`] in
/// magnitude are redrawn.
pub fn draw_relative_angles<R: Rng + ?Sized>(sigma: f64, count: usize, rng: &mut R) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![0.0; count];
    }
    (0..count)
        .map(|_| loop {
            let z: f64 = StandardNormal.sample(rng);
            let v = sigma * z;
            if v.abs() < ANGLE_GUARD {
                break v;
            }
        })
        .collect()
}

/// The `n` equal-area representatives of a zero-mean Gaussian: the quantiles
/// at probabilities `(l - 0.5) / n`.
pub fn mea_discretize(sigma: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(GbsmError::domain("equal-area discretization needs n >= 1"));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(GbsmError::domain(format!("sigma must be >= 0, got {sigma}")));
    }
    Ok(standard_quantiles(n).into_iter().map(|z| sigma * z).collect())
}

fn standard_quantiles(n: usize) -> Vec<f64> {
    let normal = Normal::standard();
    let mut q: Vec<f64> = (1..=n)
        .map(|l| normal.inverse_cdf((l as f64 - 0.5) / n as f64))
        .collect();
    // Force exact antisymmetry; the inverse CDF is only symmetric to rounding.
    for l in 0..n / 2 {
        let m = 0.5 * (q[n - 1 - l] - q[l]);
        q[l] = -m;
        q[n - 1 - l] = m;
    }
    if n % 2 == 1 {
        q[n / 2] = 0.0;
    }
    q
}

fn integer_sqrt(l: usize) -> Option<usize> {
    let r = (l as f64).sqrt().round() as usize;
    (r * r == l).then_some(r)
}

/// Equal-area ray set with `count` rays.
///
/// Each of the four angle dimensions gets `sqrt(count)` equal-area points.
/// Elevation and azimuth points are paired as a full grid on each side, and
/// the Tx-side grid is matched to the Rx-side grid by a random permutation.
pub fn build_rayset_mea<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    spreads: AngleSpreads,
    count: usize,
    pairing_rng: &mut R1,
    phase_rng: &mut R2,
) -> Result<RaySet> {
    let n = integer_sqrt(count)
        .filter(|_| count > 0)
        .ok_or_else(|| GbsmError::domain(format!("equal-area ray count must be a perfect square, got {count}")))?;
    let q = standard_quantiles(n);
    let grid: Vec<(f64, f64)> = (0..count).map(|i| (q[i / n], q[i % n])).collect();
    let mut perm: Vec<usize> = (0..count).collect();
    perm.shuffle(pairing_rng);
    let unit = (0..count)
        .map(|i| {
            let (te, ta) = grid[i];
            let (re, ra) = grid[perm[i]];
            [te, ta, re, ra]
        })
        .collect();
    let phases = (0..count).map(|_| draw_phase(phase_rng)).collect();
    Ok(RaySet::from_parts(0, RayModel::SimulationMea, unit, phases, spreads))
}

/// Ray set with independent Gaussian angles in every dimension.
pub fn build_rayset_theoretical<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    spreads: AngleSpreads,
    count: usize,
    angle_rng: &mut R1,
    phase_rng: &mut R2,
) -> Result<RaySet> {
    if count == 0 {
        return Err(GbsmError::domain("ray count must be >= 1"));
    }
    let s = spreads.as_array();
    let mut unit = vec![[0.0; 4]; count];
    for (dim, &sigma) in s.iter().enumerate() {
        // Draw at unit scale when the spread vanishes so the set can still be
        // rescaled to a nonzero spread later.
        let scale = if sigma > 0.0 { sigma } else { 1.0 };
        for (u, v) in unit.iter_mut().zip(draw_relative_angles(scale, count, angle_rng)) {
            u[dim] = v / scale;
        }
    }
    let phases = (0..count).map(|_| draw_phase(phase_rng)).collect();
    Ok(RaySet::from_parts(0, RayModel::TheoreticalMc, unit, phases, spreads))
}
