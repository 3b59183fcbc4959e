//! Cluster-level stochastic parameters: arrival delays, powers, center angles
//! and distance ratios.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::geometry::{ClusterPathState, LosGeometry};
use crate::rays::AngleSpreads;
use crate::rng::{stream, Purpose, StreamKey};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKind {
    SingleBounce,
    MultiBounce,
}

impl ClusterKind {
    pub fn name(self) -> &'static str {
        match self {
            ClusterKind::SingleBounce => "single_bounce",
            ClusterKind::MultiBounce => "multi_bounce",
        }
    }

    fn tag(self) -> u64 {
        match self {
            ClusterKind::SingleBounce => 0,
            ClusterKind::MultiBounce => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterParams {
    /// Mean inter-arrival time of single-bounce clusters, seconds.
    pub mean_interarrival_sb: f64,
    /// Mean inter-arrival time of multi-bounce clusters, seconds.
    pub mean_interarrival_mb: f64,
    pub count_sb: usize,
    pub count_mb: usize,
    /// Power decay with excess delay, dB per second.
    pub decay_db_per_sec: f64,
    pub shadow_std_db: f64,
    /// Linear Rician factor.
    pub rician_k: f64,
}

impl ClusterParams {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("mean_interarrival_sb", self.mean_interarrival_sb, self.mean_interarrival_sb > 0.0),
            ("mean_interarrival_mb", self.mean_interarrival_mb, self.mean_interarrival_mb > 0.0),
            ("decay_db_per_sec", self.decay_db_per_sec, self.decay_db_per_sec >= 0.0),
            ("shadow_std_db", self.shadow_std_db, self.shadow_std_db >= 0.0),
            ("rician_k", self.rician_k, self.rician_k >= 0.0),
        ];
        for (name, value, ok) in checks {
            if !ok || !value.is_finite() {
                return Err(GbsmError::domain(format!("{name} out of range: {value}")));
            }
        }
        Ok(())
    }
}

/// Settings for the center-angle and distance-ratio draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryParams {
    /// Standard deviation of cluster-center elevations, radians.
    pub elevation_std: f64,
    /// Pins the Tx-side ratio of single-bounce clusters.
    pub fixed_r_tx: Option<f64>,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            elevation_std: 10f64.to_radians(),
            fixed_r_tx: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterGeometry {
    pub tx_elevation: f64,
    pub tx_azimuth: f64,
    pub rx_elevation: f64,
    pub rx_azimuth: f64,
    pub r_tx: f64,
    pub r_rx: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub kind: ClusterKind,
    /// Position within its kind, starting at 0.
    pub index: usize,
    /// Delay of the path between array centers at the initial instant, seconds.
    pub delay: f64,
    /// Normalized power fraction.
    pub power: f64,
    pub tx_elevation: f64,
    pub tx_azimuth: f64,
    pub rx_elevation: f64,
    pub rx_azimuth: f64,
    pub r_tx: f64,
    pub r_rx: f64,
    /// Intra-cluster angle standard deviations at the reference frequency.
    pub spreads: AngleSpreads,
    /// Multiplier applied to geometric relative delays.
    pub delay_scale: f64,
    pub rng_id: u64,
}

impl Cluster {
    /// Unfolded path between array centers at the initial instant.
    pub fn center_state(&self) -> ClusterPathState {
        ClusterPathState {
            total_distance: self.delay * SPEED_OF_LIGHT,
            rx_elevation: self.rx_elevation,
            rx_azimuth: self.rx_azimuth,
            tx_elevation: self.tx_elevation,
            tx_azimuth: self.tx_azimuth,
        }
    }

    /// Share of the total path length taken by the virtual link between the
    /// first and last bounce. Zero for single-bounce clusters.
    pub fn virtual_link_fraction(&self) -> f64 {
        match self.kind {
            ClusterKind::SingleBounce => 0.0,
            ClusterKind::MultiBounce => 1.0 - self.r_tx - self.r_rx,
        }
    }
}

pub fn cluster_rng_id(kind: ClusterKind, index: usize) -> u64 {
    (kind.tag() << 32) | index as u64
}

fn exp_draw<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    Exp::new(1.0 / mean).expect("positive rate").sample(rng)
}

/// Cumulative arrival delays: the first cluster follows the LoS path by one
/// exponential gap, each later cluster follows its predecessor by another.
pub fn draw_cluster_delays<R: Rng + ?Sized>(mean_interarrival: f64, count: usize, los_distance: f64, rng: &mut R) -> Vec<f64> {
    let mut tau = los_distance / SPEED_OF_LIGHT;
    (0..count)
        .map(|_| {
            tau += exp_draw(mean_interarrival, rng);
            tau
        })
        .collect()
}

/// Normalized cluster powers from exponential delay decay plus shadowing.
pub fn assign_cluster_powers(delays: &[f64], los_delay: f64, decay_db_per_sec: f64, shadow_db: &[f64]) -> Result<Vec<f64>> {
    if delays.len() != shadow_db.len() {
        return Err(GbsmError::Consistency(format!(
            "{} delays but {} shadowing draws",
            delays.len(),
            shadow_db.len()
        )));
    }
    if let Some(bad) = delays.iter().find(|&&d| d < los_delay) {
        return Err(GbsmError::domain(format!("cluster delay {bad} precedes LoS delay {los_delay}")));
    }
    if delays.is_empty() {
        return Ok(Vec::new());
    }
    let db: Vec<f64> = delays
        .iter()
        .zip(shadow_db)
        .map(|(&tau, &a)| -decay_db_per_sec * (tau - los_delay) + a)
        .collect();
    // Factor out the strongest cluster so distant ones cannot underflow the sum.
    let peak = db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lin: Vec<f64> = db.iter().map(|x| 10f64.powf((x - peak) / 10.0)).collect();
    let total: f64 = lin.iter().sum();
    Ok(lin.into_iter().map(|x| x / total).collect())
}

fn draw_elevation<R: Rng + ?Sized>(std: f64, rng: &mut R) -> f64 {
    if std <= 0.0 {
        return 0.0;
    }
    let normal = Normal::new(0.0, std).expect("finite std");
    loop {
        let x: f64 = normal.sample(rng);
        if x.abs() < std::f64::consts::FRAC_PI_2 {
            return x;
        }
    }
}

fn draw_azimuth<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)
}

/// Center angles and distance ratios of one cluster.
pub fn draw_cluster_geometry<R: Rng + ?Sized>(kind: ClusterKind, params: &GeometryParams, rng: &mut R) -> ClusterGeometry {
    let tx_elevation = draw_elevation(params.elevation_std, rng);
    let tx_azimuth = draw_azimuth(rng);
    let rx_elevation = draw_elevation(params.elevation_std, rng);
    let rx_azimuth = draw_azimuth(rng);
    let (r_tx, r_rx) = match kind {
        ClusterKind::SingleBounce => {
            let r_tx = params.fixed_r_tx.unwrap_or_else(|| rng.random_range(0.2..=0.8));
            (r_tx, 1.0 - r_tx)
        }
        ClusterKind::MultiBounce => loop {
            let a = rng.random_range(0.05..0.9);
            let b = rng.random_range(0.05..0.9);
            if a + b <= 0.9 {
                break (a, b);
            }
        },
    };
    ClusterGeometry {
        tx_elevation,
        tx_azimuth,
        rx_elevation,
        rx_azimuth,
        r_tx,
        r_rx,
    }
}

/// Draws the full cluster skeleton below `seed`. Angle spreads are left at
/// zero and the delay scale at one; the scenario builder fills them in.
pub fn generate_clusters(params: &ClusterParams, geometry: &GeometryParams, los: &LosGeometry, seed: u64) -> Result<Vec<Cluster>> {
    params.validate()?;
    if let Some(r) = geometry.fixed_r_tx {
        if !(r > 0.0 && r < 1.0) {
            return Err(GbsmError::domain(format!("fixed r_tx must lie in (0, 1), got {r}")));
        }
    }
    let los_delay = los.distance / SPEED_OF_LIGHT;
    let kinds = [
        (ClusterKind::SingleBounce, params.count_sb, params.mean_interarrival_sb),
        (ClusterKind::MultiBounce, params.count_mb, params.mean_interarrival_mb),
    ];
    let mut clusters = Vec::with_capacity(params.count_sb + params.count_mb);
    for (kind, count, mean) in kinds {
        let mut rng = stream(seed, StreamKey::new(Purpose::ClusterDelay).cluster(kind.tag()));
        let delays = draw_cluster_delays(mean, count, los.distance, &mut rng);
        for (index, delay) in delays.into_iter().enumerate() {
            let rng_id = cluster_rng_id(kind, index);
            let mut grng = stream(seed, StreamKey::new(Purpose::ClusterGeometry).cluster(rng_id));
            let g = draw_cluster_geometry(kind, geometry, &mut grng);
            clusters.push(Cluster {
                kind,
                index,
                delay,
                power: 0.0,
                tx_elevation: g.tx_elevation,
                tx_azimuth: g.tx_azimuth,
                rx_elevation: g.rx_elevation,
                rx_azimuth: g.rx_azimuth,
                r_tx: g.r_tx,
                r_rx: g.r_rx,
                spreads: AngleSpreads::default(),
                delay_scale: 1.0,
                rng_id,
            });
        }
    }
    let mut srng = stream(seed, StreamKey::new(Purpose::ClusterShadowing));
    let shadow = Normal::new(0.0, params.shadow_std_db).map_err(|e| GbsmError::domain(e.to_string()))?;
    let shadow_db: Vec<f64> = clusters.iter().map(|_| shadow.sample(&mut srng)).collect();
    let delays: Vec<f64> = clusters.iter().map(|c| c.delay).collect();
    let powers = assign_cluster_powers(&delays, los_delay, params.decay_db_per_sec, &shadow_db)?;
    for (c, p) in clusters.iter_mut().zip(powers) {
        c.power = p;
    }
    Ok(clusters)
}
