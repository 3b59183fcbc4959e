//! Sub-band impulse responses and transfer functions.
//!
//! Tap amplitudes carry the carrier phase `exp(-j 2 pi f_i tau)` of their
//! sub-band, so a sub-band transfer function only adds the offset
//! `exp(-j 2 pi (f - f_i) tau)` from the sub-band center. The result equals
//! the plain Fourier kernel `exp(-j 2 pi f tau)` applied to the carrier-free
//! tap weights.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::cluster::Cluster;
use crate::error::{GbsmError, Result};
use crate::geometry::{evolve_cluster_path, los_vector, ray_path_length_unchecked, ClusterPathState, LosGeometry, Motion, Vec3};
use crate::rays::RaySet;
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, PartialEq)]
pub struct SubBandPlan {
    pub start_freq: f64,
    pub stop_freq: f64,
    pub subband_width: f64,
    pub centers: Vec<f64>,
}

impl SubBandPlan {
    pub fn new(start_freq: f64, stop_freq: f64, subband_width: f64) -> Result<Self> {
        if !(start_freq > 0.0 && stop_freq > start_freq && stop_freq.is_finite()) {
            return Err(GbsmError::domain(format!(
                "band must satisfy 0 < start < stop, got [{start_freq}, {stop_freq}]"
            )));
        }
        if !(subband_width > 0.0) {
            return Err(GbsmError::domain(format!("sub-band width must be > 0, got {subband_width}")));
        }
        let count = ((stop_freq - start_freq) / subband_width - 1e-9).ceil().max(1.0) as usize;
        let centers = (0..count)
            .map(|i| start_freq + (i as f64 + 0.5) * subband_width)
            .collect();
        Ok(SubBandPlan {
            start_freq,
            stop_freq,
            subband_width,
            centers,
        })
    }

    pub fn count(&self) -> usize {
        self.centers.len()
    }

    /// Frequency support `[lo, hi)` of sub-band `i`.
    pub fn support(&self, i: usize) -> (f64, f64) {
        let lo = self.start_freq + i as f64 * self.subband_width;
        (lo, lo + self.subband_width)
    }

    /// Sub-band owning `freq`. The upper band edge belongs to the last sub-band.
    pub fn index_of(&self, freq: f64) -> Option<usize> {
        let last = self.count() - 1;
        let (_, top) = self.support(last);
        if freq < self.start_freq || freq > top {
            return None;
        }
        let i = ((freq - self.start_freq) / self.subband_width).floor() as usize;
        Some(i.min(last))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    /// Seconds.
    pub delay: f64,
    pub amplitude: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubBandCir {
    /// 1-based transmit element.
    pub tx_index: usize,
    /// 1-based receive element.
    pub rx_index: usize,
    pub subband_index: usize,
    /// Sub-band center frequency, Hz.
    pub freq: f64,
    pub time: f64,
    pub taps: Vec<Tap>,
}

impl SubBandCir {
    pub fn total_power(&self) -> f64 {
        self.taps.iter().map(|t| t.amplitude.norm_sqr()).sum()
    }

    /// Narrowband coefficient at the sub-band center.
    pub fn narrowband(&self) -> Complex64 {
        self.taps.iter().map(|t| t.amplitude).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtfSample {
    pub freq: f64,
    pub value: Complex64,
}

/// `exp(-j 2 pi x)`, reducing `x` to one cycle first.
#[inline]
pub(crate) fn cycle_phasor(x: f64) -> Complex64 {
    let frac = x - x.round();
    let (s, c) = (2.0 * PI * frac).sin_cos();
    Complex64::new(c, -s)
}

pub fn rician_los_amplitude(k: f64) -> f64 {
    (k / (k + 1.0)).sqrt()
}

/// The LoS tap between one element pair.
pub fn cir_los(los: &LosGeometry, tx_offset: Vec3, rx_offset: Vec3, motion: &Motion, k: f64, freq: f64, t: f64) -> Tap {
    let delay = los_vector(los, tx_offset, rx_offset, motion, t).norm() / SPEED_OF_LIGHT;
    Tap {
        delay,
        amplitude: cycle_phasor(freq * delay) * rician_los_amplitude(k),
    }
}

/// Unfolded cluster path between one element pair at time `t`.
pub fn cluster_state_at(cluster: &Cluster, motion: &Motion, t: f64, tx_offset: Vec3, rx_offset: Vec3) -> ClusterPathState {
    evolve_cluster_path(&cluster.center_state(), motion, t).at_elements(tx_offset, rx_offset)
}

/// Delay of every ray of `rays` for the element pair whose cluster path is
/// `state`.
pub fn ray_delays(cluster: &Cluster, rays: &RaySet, state: &ClusterPathState) -> Vec<f64> {
    let d = state.total_distance;
    let link = cluster.virtual_link_fraction() * d;
    let base = d / SPEED_OF_LIGHT;
    rays.rays
        .iter()
        .map(|r| {
            let len = ray_path_length_unchecked(state, &r.rel, cluster.r_tx, cluster.r_rx) + link;
            base + cluster.delay_scale * (len - d) / SPEED_OF_LIGHT
        })
        .collect()
}

/// Taps of one cluster: equal power split over its rays.
pub fn cir_cluster(cluster: &Cluster, rays: &RaySet, state: &ClusterPathState, k: f64, freq: f64) -> Vec<Tap> {
    if rays.is_empty() {
        return Vec::new();
    }
    let amp = (cluster.power / ((k + 1.0) * rays.len() as f64)).sqrt();
    ray_delays(cluster, rays, state)
        .into_iter()
        .zip(&rays.rays)
        .map(|(delay, r)| Tap {
            delay,
            amplitude: cycle_phasor(freq * delay) * Complex64::from_polar(amp, r.phase),
        })
        .collect()
}

/// Concatenates the LoS tap and all cluster taps into one sub-band CIR.
pub struct CirParts<'a> {
    pub tx_index: usize,
    pub rx_index: usize,
    pub subband_index: usize,
    pub freq: f64,
    pub time: f64,
    pub los: Option<Tap>,
    pub clusters: &'a [(&'a Cluster, &'a RaySet, ClusterPathState)],
    pub rician_k: f64,
}

pub fn cir_assemble(parts: CirParts<'_>) -> SubBandCir {
    let mut taps: Vec<Tap> = parts.los.into_iter().collect();
    for (cluster, rays, state) in parts.clusters {
        taps.extend(cir_cluster(cluster, rays, state, parts.rician_k, parts.freq));
    }
    SubBandCir {
        tx_index: parts.tx_index,
        rx_index: parts.rx_index,
        subband_index: parts.subband_index,
        freq: parts.freq,
        time: parts.time,
        taps,
    }
}

/// Transfer function of one sub-band CIR at `freqs`, which must lie inside the
/// sub-band.
pub fn ctf_subband(cir: &SubBandCir, plan: &SubBandPlan, freqs: &[f64]) -> Result<Vec<CtfSample>> {
    let (lo, hi) = plan.support(cir.subband_index);
    let slack = 1e-9 * plan.subband_width;
    freqs
        .iter()
        .map(|&f| {
            if f < lo - slack || f > hi + slack {
                return Err(GbsmError::domain(format!(
                    "frequency {f} Hz outside sub-band {} [{lo}, {hi}]",
                    cir.subband_index
                )));
            }
            Ok(CtfSample {
                freq: f,
                value: ctf_at(&cir.taps, f - cir.freq),
            })
        })
        .collect()
}

/// `sum amp * exp(-j 2 pi offset tau)`.
pub fn ctf_at(taps: &[Tap], offset: f64) -> Complex64 {
    taps.iter().map(|t| t.amplitude * cycle_phasor(offset * t.delay)).sum()
}

/// One sub-band's samples together with its support `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBandCtf {
    pub lo: f64,
    pub hi: f64,
    pub samples: Vec<CtfSample>,
}

/// Stitches per-sub-band transfer functions into the whole-band response.
/// Every output frequency takes the value of the one sub-band owning it.
pub fn ctf_fullband(parts: &[SubBandCtf]) -> Result<Vec<CtfSample>> {
    let mut order: Vec<&SubBandCtf> = parts.iter().collect();
    order.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for w in order.windows(2) {
        let tol = 1e-9 * (w[0].hi - w[0].lo).abs();
        if w[1].lo < w[0].hi - tol {
            return Err(GbsmError::Consistency(format!(
                "sub-band supports [{}, {}) and [{}, {}) overlap",
                w[0].lo, w[0].hi, w[1].lo, w[1].hi
            )));
        }
    }
    let last = order.len().saturating_sub(1);
    let mut out = Vec::new();
    for (i, part) in order.iter().enumerate() {
        for s in &part.samples {
            let inside = s.freq >= part.lo && (s.freq < part.hi || (i == last && s.freq <= part.hi));
            if !inside {
                return Err(GbsmError::Consistency(format!(
                    "sample at {} Hz lies outside its sub-band [{}, {})",
                    s.freq, part.lo, part.hi
                )));
            }
            out.push(*s);
        }
    }
    Ok(out)
}

/// Evenly spaced evaluation frequencies `lo, lo + step, ...` strictly below `hi`.
pub fn subband_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::ClusterKind;
    use crate::geometry::ArrayGeometry;
    use crate::rays::{build_rayset_mea, AngleSpreads};
    use crate::rng::{stream, Purpose, StreamKey};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn cluster(power: f64) -> Cluster {
        Cluster {
            kind: ClusterKind::SingleBounce,
            index: 0,
            delay: 15e-9,
            power,
            tx_elevation: 0.1,
            tx_azimuth: 0.7,
            rx_elevation: 0.2,
            rx_azimuth: -1.0,
            r_tx: 0.4,
            r_rx: 0.6,
            spreads: AngleSpreads::from_array([0.02, 0.03, 0.025, 0.05]),
            delay_scale: 1.0,
            rng_id: 0,
        }
    }

    fn rays(count: usize, seed: u64) -> RaySet {
        build_rayset_mea(
            cluster(1.0).spreads,
            count,
            &mut stream(seed, StreamKey::new(Purpose::RayPairing)),
            &mut stream(seed, StreamKey::new(Purpose::RayPhases)),
        )
        .unwrap()
    }

    #[test]
    fn plan_layout() {
        let p = SubBandPlan::new(300e9, 350e9, 0.1e9).unwrap();
        assert_eq!(p.count(), 500);
        assert!(p.centers.windows(2).all(|w| w[1] > w[0]));
        assert_abs_diff_eq!(p.centers[0], 300.05e9, epsilon = 1e-3);
        assert_eq!(p.index_of(300e9), Some(0));
        assert_eq!(p.index_of(350e9), Some(499));
        assert_eq!(p.index_of(351e9), None);
        assert!(SubBandPlan::new(300e9, 300e9, 1e9).is_err());
    }

    #[test]
    fn los_tap() {
        let los = LosGeometry::new(3.0, 0.0, 0.0).unwrap();
        let m = Motion::default();
        assert_eq!(cir_los(&los, Vec3::ZERO, Vec3::ZERO, &m, 0.0, 300e9, 0.0).amplitude.norm(), 0.0);
        let tap = cir_los(&los, Vec3::ZERO, Vec3::ZERO, &m, 2.0, 300e9, 0.0);
        assert_abs_diff_eq!(tap.amplitude.norm(), (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(tap.delay, 3.0 / SPEED_OF_LIGHT, epsilon = 1e-20);
        assert_abs_diff_eq!(tap.delay * 1e9, 10.007, epsilon = 1e-3);
        // Integer number of carrier cycles gives a real positive amplitude.
        let f = 1000.0 / tap.delay;
        let tap = cir_los(&los, Vec3::ZERO, Vec3::ZERO, &m, 2.0, f, 0.0);
        assert_abs_diff_eq!(tap.amplitude.im, 0.0, epsilon = 1e-9);
        assert!(tap.amplitude.re > 0.0);
    }

    #[test]
    fn single_ray_cluster() {
        let c = cluster(0.3);
        let r = rays(1, 1);
        let state = cluster_state_at(&c, &Motion::default(), 0.0, Vec3::ZERO, Vec3::ZERO);
        let taps = cir_cluster(&c, &r, &state, 2.0, 300e9);
        assert_eq!(taps.len(), 1);
        assert_abs_diff_eq!(taps[0].delay, c.delay, epsilon = 1e-22);
        assert_abs_diff_eq!(taps[0].amplitude.norm(), (0.3f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn conjugate_frequency() {
        let c = cluster(1.0);
        let r = rays(16, 2);
        let state = cluster_state_at(&c, &Motion::default(), 0.0, Vec3::ZERO, Vec3::ZERO);
        let pos = cir_cluster(&c, &r, &state, 0.0, 300e9);
        let neg = cir_cluster(&c, &r, &state, 0.0, -300e9);
        for ((a, b), ray) in pos.iter().zip(&neg).zip(&r.rays) {
            let strip = Complex64::from_polar(1.0, -ray.phase);
            let x = a.amplitude * strip;
            let y = b.amplitude * strip;
            assert_abs_diff_eq!(x.re, y.re, epsilon = 1e-12);
            assert_abs_diff_eq!(x.im, -y.im, epsilon = 1e-12);
        }
    }

    #[test]
    fn assemble_without_clusters() {
        let los = LosGeometry::new(3.0, 0.0, 0.0).unwrap();
        let tap = cir_los(&los, Vec3::ZERO, Vec3::ZERO, &Motion::default(), 2.0, 300e9, 0.0);
        let cir = cir_assemble(CirParts {
            tx_index: 1,
            rx_index: 1,
            subband_index: 0,
            freq: 300e9,
            time: 0.0,
            los: Some(tap),
            clusters: &[],
            rician_k: 2.0,
        });
        assert_eq!(cir.taps, vec![tap]);
    }

    #[test]
    fn ctf_simple_cases() {
        let plan = SubBandPlan::new(300e9, 301e9, 1e9).unwrap();
        let mk = |taps: Vec<Tap>| SubBandCir {
            tx_index: 1,
            rx_index: 1,
            subband_index: 0,
            freq: plan.centers[0],
            time: 0.0,
            taps,
        };
        let freqs: Vec<f64> = (0..11).map(|i| 300e9 + i as f64 * 0.1e9).collect();
        let unit = mk(vec![Tap {
            delay: 0.0,
            amplitude: Complex64::new(1.0, 0.0),
        }]);
        for s in ctf_subband(&unit, &plan, &freqs).unwrap() {
            assert_eq!(s.value, Complex64::new(1.0, 0.0));
        }
        let tau = 2.5e-9;
        let one = mk(vec![Tap {
            delay: tau,
            amplitude: Complex64::new(0.3, 0.4),
        }]);
        let h = ctf_subband(&one, &plan, &[300.2e9, 300.3e9]).unwrap();
        assert_abs_diff_eq!(h[0].value.norm(), 0.5, epsilon = 1e-12);
        let slope = (h[1].value / h[0].value).arg() / 0.1e9;
        let wrapped = -2.0 * PI * tau * 0.1e9;
        let wrapped = wrapped - 2.0 * PI * (wrapped / (2.0 * PI)).round();
        assert_abs_diff_eq!(slope * 0.1e9, wrapped, epsilon = 1e-9);
        assert!(ctf_subband(&one, &plan, &[302e9]).is_err());
    }

    #[test]
    fn two_path_null() {
        let plan = SubBandPlan::new(300e9, 301e9, 1e9).unwrap();
        let df = 0.25e9;
        let cir = SubBandCir {
            tx_index: 1,
            rx_index: 1,
            subband_index: 0,
            freq: 300.5e9,
            time: 0.0,
            taps: vec![
                Tap {
                    delay: 0.0,
                    amplitude: Complex64::new(1.0, 0.0),
                },
                Tap {
                    delay: 1.0 / (2.0 * df),
                    amplitude: Complex64::new(1.0, 0.0),
                },
            ],
        };
        let h = ctf_subband(&cir, &plan, &[300.5e9, 300.5e9 + df]).unwrap();
        assert_abs_diff_eq!(h[0].value.norm(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(h[1].value.norm(), 0.0, epsilon = 1e-9);
    }

    #[test]
    fn fullband_stitching() {
        let plan = SubBandPlan::new(300e9, 350e9, 0.1e9).unwrap();
        let parts: Vec<SubBandCtf> = (0..plan.count())
            .map(|i| {
                let (lo, hi) = plan.support(i);
                SubBandCtf {
                    lo,
                    hi,
                    samples: subband_grid(lo, hi, 0.05e9)
                        .into_iter()
                        .map(|f| CtfSample {
                            freq: f,
                            value: Complex64::new(i as f64, 0.0),
                        })
                        .collect(),
                }
            })
            .collect();
        let full = ctf_fullband(&parts).unwrap();
        assert_eq!(full.len(), 1000);
        assert!(full.windows(2).all(|w| w[1].freq > w[0].freq));
        assert_eq!(full[3].value.re, 1.0);
        assert_eq!(ctf_fullband(&parts[..1]).unwrap(), parts[0].samples);
        let mut bad = parts[..2].to_vec();
        bad[1].lo -= 0.05e9;
        assert!(matches!(ctf_fullband(&bad), Err(GbsmError::Consistency(_))));
    }

    #[test]
    fn time_shift_consistency() {
        let c = cluster(1.0);
        let m = Motion::new(0.1, 0.0, PI / 3.0).unwrap();
        let arr = ArrayGeometry::new(16, 4.6e-4, 0.3, 0.2).unwrap();
        let (tx, rx) = (arr.element_offset(3).unwrap(), arr.element_offset(11).unwrap());
        let r = rays(64, 4);
        let direct = cluster_state_at(&c, &m, 7.5, tx, rx);
        let mid = evolve_cluster_path(&c.center_state(), &m, 2.5);
        let stepped = evolve_cluster_path(&mid, &m, 5.0).at_elements(tx, rx);
        for (a, b) in ray_delays(&c, &r, &direct).iter().zip(ray_delays(&c, &r, &stepped)) {
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    proptest! {
        #[test]
        fn equal_power_split(p in 0.0f64..1.0, k in 0.0f64..10.0, seed in any::<u64>(), n in 1usize..12) {
            let c = cluster(p);
            let r = rays(n * n, seed);
            let state = cluster_state_at(&c, &Motion::default(), 0.0, Vec3::ZERO, Vec3::ZERO);
            let taps = cir_cluster(&c, &r, &state, k, 325e9);
            let total: f64 = taps.iter().map(|t| t.amplitude.norm_sqr()).sum();
            prop_assert!((total - p / (k + 1.0)).abs() <= 1e-12);
            prop_assert!(taps.iter().all(|t| t.delay >= 3.0 / SPEED_OF_LIGHT));
        }

        #[test]
        fn ctf_is_linear(seed in any::<u64>(), f in 0.0f64..1.0) {
            let plan = SubBandPlan::new(300e9, 300.1e9, 0.1e9).unwrap();
            let c = cluster(0.5);
            let state = cluster_state_at(&c, &Motion::default(), 0.0, Vec3::ZERO, Vec3::ZERO);
            let a = cir_cluster(&c, &rays(9, seed), &state, 0.0, plan.centers[0]);
            let b = cir_cluster(&c, &rays(16, seed ^ 1), &state, 0.0, plan.centers[0]);
            let mk = |taps: Vec<Tap>| SubBandCir { tx_index: 1, rx_index: 1, subband_index: 0, freq: plan.centers[0], time: 0.0, taps };
            let freq = [300e9 + f * 0.1e9];
            let ha = ctf_subband(&mk(a.clone()), &plan, &freq).unwrap()[0].value;
            let hb = ctf_subband(&mk(b.clone()), &plan, &freq).unwrap()[0].value;
            let hab = ctf_subband(&mk([a, b].concat()), &plan, &freq).unwrap()[0].value;
            prop_assert!((hab - ha - hb).norm() <= 1e-12);
        }
    }
}
