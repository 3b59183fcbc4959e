//! A drawn scenario: arrays, motion, cluster skeleton and the keyed ray sets
//! from which every channel realization is built.

use num_complex::Complex64;
use rand_distr::{Distribution, Exp};

use crate::channel::{
    cir_assemble, cir_los, cluster_state_at, ctf_subband, cycle_phasor, ray_delays, rician_los_amplitude, subband_grid,
    CirParts, CtfSample, SubBandCir, SubBandCtf, SubBandPlan,
};
use crate::cluster::{generate_clusters, Cluster, ClusterKind, ClusterParams, GeometryParams};
use crate::config::{ModelKind, ScenarioConfig};
use crate::error::{GbsmError, Result};
use crate::geometry::{los_vector, ArrayGeometry, LosGeometry, Motion, Vec3};
use crate::rays::{build_rayset_mea, build_rayset_theoretical, AngleSpreads, RaySet};
use crate::rng::{stream, Purpose, StreamKey};
use crate::scattering::draw_sigma;
use crate::SPEED_OF_LIGHT;

// Equal-area points per dimension used to measure a cluster's geometric
// relative delays when rescaling them to a drawn time of arrival.
const TOA_REFERENCE_RAYS: usize = 400;

/// Physical inputs of a scenario, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub los: LosGeometry,
    pub motion: Motion,
    pub band: SubBandPlan,
    pub clusters: ClusterParams,
    pub geometry: GeometryParams,
    /// Means of the exponential cluster-level angle spreads at `ref_freq`.
    pub mean_spreads: AngleSpreads,
    /// Frequency exponents of the four spreads.
    pub exponents: AngleSpreads,
    pub ref_freq: f64,
    /// Mean intra-cluster time of arrival, seconds.
    pub toa_mean: Option<f64>,
    pub model: ModelKind,
    pub rays_sb: usize,
    pub rays_mb: usize,
}

impl ScenarioParams {
    pub fn from_config(cfg: &ScenarioConfig) -> Result<ScenarioParams> {
        cfg.validate()?;
        let a = &cfg.angles;
        let c = &cfg.clusters;
        Ok(ScenarioParams {
            tx: ArrayGeometry::new(
                cfg.tx.elements,
                cfg.tx_spacing(),
                cfg.tx.elevation_deg.radians(),
                cfg.tx.azimuth_deg.radians(),
            )?,
            rx: ArrayGeometry::new(
                cfg.rx.elements,
                cfg.rx_spacing(),
                cfg.rx.elevation_deg.radians(),
                cfg.rx.azimuth_deg.radians(),
            )?,
            los: LosGeometry::new(
                cfg.los.distance_m,
                cfg.los.elevation_deg.radians(),
                cfg.los.azimuth_deg.radians(),
            )?,
            motion: Motion::new(
                cfg.motion.speed_mps,
                cfg.motion.elevation_deg.radians(),
                cfg.motion.azimuth_deg.radians(),
            )?,
            band: SubBandPlan::new(
                cfg.band.start_ghz * 1e9,
                cfg.band.stop_ghz * 1e9,
                cfg.band.subband_width_ghz * 1e9,
            )?,
            clusters: ClusterParams {
                mean_interarrival_sb: c.mean_interarrival_sb_ns * 1e-9,
                mean_interarrival_mb: c.mean_interarrival_mb_ns * 1e-9,
                count_sb: c.count_sb,
                count_mb: c.count_mb,
                decay_db_per_sec: c.decay_db_per_ns * 1e9,
                shadow_std_db: c.shadow_std_db,
                rician_k: c.rician_k,
            },
            geometry: GeometryParams {
                elevation_std: c.elevation_std_deg.radians(),
                fixed_r_tx: c.r_tx,
            },
            mean_spreads: AngleSpreads {
                tx_elevation: a.mean_tx_elevation_deg.radians(),
                tx_azimuth: a.mean_tx_azimuth_deg.radians(),
                rx_elevation: a.mean_rx_elevation_deg.radians(),
                rx_azimuth: a.mean_rx_azimuth_deg.radians(),
            },
            exponents: AngleSpreads {
                tx_elevation: a.exponent_tx_elevation,
                tx_azimuth: a.exponent_tx_azimuth,
                rx_elevation: a.exponent_rx_elevation,
                rx_azimuth: a.exponent_rx_azimuth,
            },
            ref_freq: a.reference_ghz * 1e9,
            toa_mean: c.toa_mean_ns.map(|t| t * 1e-9),
            model: cfg.model,
            rays_sb: cfg.rays_per_sb_cluster,
            rays_mb: cfg.rays_per_mb_cluster,
        })
    }
}

/// One channel sample location: element pair (1-based), time and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    pub tx: usize,
    pub rx: usize,
    pub time: f64,
    pub freq: f64,
}

impl ChannelPoint {
    pub fn new(tx: usize, rx: usize, time: f64, freq: f64) -> Self {
        ChannelPoint { tx, rx, time, freq }
    }
}

/// A scenario drawn under one root seed.
///
/// Every random quantity comes from a stream keyed by its purpose and the
/// cluster it belongs to, so adding clusters, sub-bands or replicas never
/// shifts the draws of the others.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub clusters: Vec<Cluster>,
    pub seed: u64,
}

impl Scenario {
    pub fn new(params: ScenarioParams, seed: u64) -> Result<Scenario> {
        for (name, n) in [("single-bounce", params.rays_sb), ("multi-bounce", params.rays_mb)] {
            if n == 0 {
                return Err(GbsmError::domain(format!("{name} clusters need at least one ray")));
            }
        }
        if !(params.ref_freq > 0.0) {
            return Err(GbsmError::domain("reference frequency must be positive"));
        }
        let mut clusters = generate_clusters(&params.clusters, &params.geometry, &params.los, seed)?;
        let means = params.mean_spreads.as_array();
        for c in &mut clusters {
            let mut rng = stream(seed, StreamKey::new(Purpose::AngleSpread).cluster(c.rng_id));
            let mut s = [0.0; 4];
            for (v, &m) in s.iter_mut().zip(&means) {
                *v = draw_sigma(m, &mut rng)?;
            }
            c.spreads = AngleSpreads::from_array(s);
        }
        let mut scn = Scenario { params, clusters, seed };
        if let Some(mean) = scn.params.toa_mean {
            if !(mean > 0.0) {
                return Err(GbsmError::domain("mean time of arrival must be positive"));
            }
            let exp = Exp::new(1.0 / mean).map_err(|e| GbsmError::domain(e.to_string()))?;
            for i in 0..scn.clusters.len() {
                let c = &scn.clusters[i];
                let mut rng = stream(seed, StreamKey::new(Purpose::ToaSpread).cluster(c.rng_id));
                let toa: f64 = exp.sample(&mut rng);
                let geometric = scn.mean_relative_delay(c)?;
                scn.clusters[i].delay_scale = if geometric > 0.0 { toa / geometric } else { 1.0 };
            }
        }
        Ok(scn)
    }

    pub fn from_config(cfg: &ScenarioConfig) -> Result<Scenario> {
        Scenario::new(ScenarioParams::from_config(cfg)?, cfg.seed)
    }

    // Mean geometric excess delay of a cluster's rays between array centers
    // at t = 0, at the reference spreads.
    fn mean_relative_delay(&self, c: &Cluster) -> Result<f64> {
        let mut pair = stream(self.seed, StreamKey::new(Purpose::RayPairing).cluster(c.rng_id));
        let mut phase = stream(self.seed, StreamKey::new(Purpose::RayPhases).cluster(c.rng_id));
        let rays = build_rayset_mea(c.spreads, TOA_REFERENCE_RAYS, &mut pair, &mut phase)?;
        let mut unit = c.clone();
        unit.delay_scale = 1.0;
        let base = c.delay;
        let delays = ray_delays(&unit, &rays, &c.center_state());
        Ok(delays.iter().map(|d| d - base).sum::<f64>() / delays.len() as f64)
    }

    /// The same scenario with the spread law anchored at `ref_freq`.
    pub fn with_reference_frequency(&self, ref_freq: f64) -> Scenario {
        let mut s = self.clone();
        s.params.ref_freq = ref_freq;
        s
    }

    pub fn rician_k(&self) -> f64 {
        self.params.clusters.rician_k
    }

    pub fn rays_per_cluster(&self, kind: ClusterKind) -> usize {
        match kind {
            ClusterKind::SingleBounce => self.params.rays_sb,
            ClusterKind::MultiBounce => self.params.rays_mb,
        }
    }

    /// Angle spreads of cluster `c` evaluated at `freq`.
    pub fn spreads_at(&self, c: usize, freq: f64) -> Result<AngleSpreads> {
        self.clusters[c]
            .spreads
            .at_frequency(self.params.ref_freq, &self.params.exponents, freq)
    }

    /// Ray set of cluster `c` for replica `replica`, with angles at the
    /// spreads of `freq`.
    ///
    /// The equal-area pairing is fixed per cluster and the phases are redrawn
    /// per replica. Theoretical-model angles are redrawn per replica and keep
    /// their standardized values across frequency.
    pub fn rayset(&self, c: usize, freq: f64, replica: u64) -> Result<RaySet> {
        let cl = &self.clusters[c];
        let spreads = self.spreads_at(c, freq)?;
        let count = self.rays_per_cluster(cl.kind);
        let mut phase = stream(
            self.seed,
            StreamKey::new(Purpose::RayPhases).cluster(cl.rng_id).replica(replica),
        );
        let set = match self.params.model {
            ModelKind::Simulation => {
                let mut pair = stream(self.seed, StreamKey::new(Purpose::RayPairing).cluster(cl.rng_id));
                build_rayset_mea(spreads, count, &mut pair, &mut phase)?
            }
            ModelKind::Theoretical => {
                let mut ang = stream(
                    self.seed,
                    StreamKey::new(Purpose::RelativeAngles).cluster(cl.rng_id).replica(replica),
                );
                build_rayset_theoretical(cl.spreads, count, &mut ang, &mut phase)?
            }
        };
        let sub = self.params.band.index_of(freq).unwrap_or(0);
        Ok(set.with_cluster_id(cl.rng_id).refresh_for_subband(spreads, sub))
    }

    /// Offsets of transmit element `p` and receive element `q`, 1-based.
    pub fn offsets(&self, p: usize, q: usize) -> Result<(Vec3, Vec3)> {
        Ok((self.params.tx.element_offset(p)?, self.params.rx.element_offset(q)?))
    }

    /// LoS delay between elements `p` and `q` at time `t`.
    pub fn los_delay(&self, p: usize, q: usize, t: f64) -> Result<f64> {
        let (tx, rx) = self.offsets(p, q)?;
        Ok(los_vector(&self.params.los, tx, rx, &self.params.motion, t).norm() / SPEED_OF_LIGHT)
    }

    /// CIR of one element pair with ray angles evaluated at `center`, the
    /// carrier of the sub-band it represents.
    pub fn cir_at(&self, p: usize, q: usize, center: f64, t: f64, replica: u64) -> Result<SubBandCir> {
        let (tx, rx) = self.offsets(p, q)?;
        let k = self.rician_k();
        let los = (k > 0.0).then(|| cir_los(&self.params.los, tx, rx, &self.params.motion, k, center, t));
        let sets = (0..self.clusters.len())
            .map(|c| self.rayset(c, center, replica))
            .collect::<Result<Vec<_>>>()?;
        let parts: Vec<_> = self
            .clusters
            .iter()
            .zip(&sets)
            .map(|(c, s)| (c, s, cluster_state_at(c, &self.params.motion, t, tx, rx)))
            .collect();
        Ok(cir_assemble(CirParts {
            tx_index: p,
            rx_index: q,
            subband_index: self.params.band.index_of(center).unwrap_or(0),
            freq: center,
            time: t,
            los,
            clusters: &parts,
            rician_k: k,
        }))
    }

    /// CIR of sub-band `subband` of the configured band plan.
    pub fn cir(&self, p: usize, q: usize, subband: usize, t: f64, replica: u64) -> Result<SubBandCir> {
        let center = *self
            .params
            .band
            .centers
            .get(subband)
            .ok_or_else(|| GbsmError::domain(format!("sub-band {subband} outside the band plan")))?;
        self.cir_at(p, q, center, t, replica)
    }

    /// Transfer function over the listed sub-bands, sampled every `step` Hz
    /// and stitched.
    pub fn ctf(&self, p: usize, q: usize, subbands: &[usize], t: f64, step: f64, replica: u64) -> Result<Vec<CtfSample>> {
        let plan = &self.params.band;
        let mut parts = Vec::with_capacity(subbands.len());
        for &i in subbands {
            let cir = self.cir(p, q, i, t, replica)?;
            let (lo, hi) = plan.support(i);
            let mut freqs = subband_grid(lo, hi, step);
            if i + 1 == plan.count() {
                freqs.push(hi);
            }
            parts.push(SubBandCtf {
                lo,
                hi,
                samples: ctf_subband(&cir, plan, &freqs)?,
            });
        }
        crate::channel::ctf_fullband(&parts)
    }

    /// Channel coefficient at one point, with ray angles at the spreads of
    /// the point's own frequency.
    pub fn coefficient(&self, point: ChannelPoint, replica: u64) -> Result<Complex64> {
        let (tx, rx) = self.offsets(point.tx, point.rx)?;
        let k = self.rician_k();
        let mut h = Complex64::new(0.0, 0.0);
        if k > 0.0 {
            let d = los_vector(&self.params.los, tx, rx, &self.params.motion, point.time).norm() / SPEED_OF_LIGHT;
            h += cycle_phasor(point.freq * d) * rician_los_amplitude(k);
        }
        for (c, cl) in self.clusters.iter().enumerate() {
            let set = self.rayset(c, point.freq, replica)?;
            let state = cluster_state_at(cl, &self.params.motion, point.time, tx, rx);
            let amp = (cl.power / ((k + 1.0) * set.len() as f64)).sqrt();
            for (d, r) in ray_delays(cl, &set, &state).into_iter().zip(&set.rays) {
                h += cycle_phasor(point.freq * d) * Complex64::from_polar(amp, r.phase);
            }
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{preset, ScenarioConfig};
    use approx::assert_abs_diff_eq;

    fn desk() -> Scenario {
        Scenario::from_config(&ScenarioConfig::default()).unwrap()
    }

    #[test]
    fn deterministic_under_seed() {
        let a = desk();
        let b = desk();
        assert_eq!(a.clusters, b.clusters);
        let ca = a.cir(1, 3, 10, 0.5, 2).unwrap();
        let cb = b.cir(1, 3, 10, 0.5, 2).unwrap();
        assert_eq!(ca.taps, cb.taps);
    }

    #[test]
    fn power_is_normalized() {
        let s = desk();
        let k = s.rician_k();
        let cir = s.cir(2, 5, 0, 0.0, 0).unwrap();
        assert_eq!(cir.taps.len(), 1 + s.clusters.len() * 400);
        let los = cir.taps[0].amplitude.norm_sqr();
        assert_abs_diff_eq!(los, k / (k + 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(cir.total_power(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn coefficient_matches_narrowband_cir() {
        let s = desk();
        let center = s.params.band.centers[7];
        let cir = s.cir(3, 4, 7, 1.0, 5).unwrap();
        let h = s.coefficient(ChannelPoint::new(3, 4, 1.0, center), 5).unwrap();
        assert_abs_diff_eq!((h - cir.narrowband()).norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn replicas_share_angles_in_simulation_mode() {
        let s = desk();
        let a = s.rayset(0, 320e9, 0).unwrap();
        let b = s.rayset(0, 320e9, 1).unwrap();
        assert_eq!(a.unit_angles(), b.unit_angles());
        assert_ne!(a.rays[0].phase, b.rays[0].phase);
    }

    #[test]
    fn theoretical_angles_follow_replica_not_frequency() {
        let mut cfg = ScenarioConfig::default();
        cfg.model = ModelKind::Theoretical;
        let s = Scenario::from_config(&cfg).unwrap();
        let a = s.rayset(1, 301e9, 0).unwrap();
        let b = s.rayset(1, 349e9, 0).unwrap();
        let c = s.rayset(1, 301e9, 1).unwrap();
        assert_eq!(a.unit_angles(), b.unit_angles());
        assert_ne!(a.unit_angles(), c.unit_angles());
    }

    #[test]
    fn toa_rescaling_sets_mean_excess_delay() {
        let s = Scenario::from_config(&preset("fig6").unwrap()).unwrap();
        for c in &s.clusters {
            assert!(c.delay_scale > 0.0 && c.delay_scale.is_finite());
        }
        // The rescaled mean excess delay equals the exponential draw.
        let c = &s.clusters[0];
        let mut rng = stream(s.seed, StreamKey::new(Purpose::ToaSpread).cluster(c.rng_id));
        let toa: f64 = Exp::new(1.0 / 0.3e-9).unwrap().sample(&mut rng);
        let rescaled = s.mean_relative_delay(c).unwrap() * c.delay_scale;
        assert_abs_diff_eq!(rescaled, toa, epsilon = 1e-9 * toa);
    }

    #[test]
    fn ctf_covers_requested_subbands() {
        let s = desk();
        let h = s.ctf(1, 1, &[0, 1], 0.0, 10e6, 0).unwrap();
        assert_eq!(h.len(), 20);
        assert!(h.windows(2).all(|w| w[1].freq > w[0].freq));
        let last = s.params.band.count() - 1;
        let h = s.ctf(1, 1, &[last], 0.0, 10e6, 0).unwrap();
        assert_eq!(h.len(), 11);
    }

    #[test]
    fn bad_indices_rejected() {
        let s = desk();
        assert!(s.cir(0, 1, 0, 0.0, 0).is_err());
        assert!(s.cir(1, 9, 0, 0.0, 0).is_err());
        assert!(s.cir(1, 1, 500, 0.0, 0).is_err());
    }
}
