//! Delay power spectral density and the stationary intervals derived from
//! its correlation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::channel::SubBandCir;
use crate::error::{GbsmError, Result};
use crate::scenario::{ChannelPoint, Scenario, ScenarioParams};

/// Tap power accumulated on a delay grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DelayPsd {
    pub freq: f64,
    pub time: f64,
    /// Bin width in seconds; zero or negative keeps every distinct delay.
    pub bin_width: f64,
    /// `(delay, power)` ascending in delay. Binned delays are bin starts.
    pub bins: Vec<(f64, f64)>,
}

impl DelayPsd {
    pub fn total_power(&self) -> f64 {
        self.bins.iter().map(|b| b.1).sum()
    }
}

pub fn delay_psd(cir: &SubBandCir, bin_width: f64) -> DelayPsd {
    let bins = if bin_width > 0.0 {
        let mut acc: BTreeMap<i64, f64> = BTreeMap::new();
        for t in &cir.taps {
            *acc.entry((t.delay / bin_width).floor() as i64).or_default() += t.amplitude.norm_sqr();
        }
        acc.into_iter().map(|(k, p)| (k as f64 * bin_width, p)).collect()
    } else {
        let mut taps: Vec<(f64, f64)> = cir.taps.iter().map(|t| (t.delay, t.amplitude.norm_sqr())).collect();
        taps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(taps.len());
        for (d, p) in taps {
            match merged.last_mut() {
                Some(last) if last.0 == d => last.1 += p,
                _ => merged.push((d, p)),
            }
        }
        merged
    };
    DelayPsd {
        freq: cir.freq,
        time: cir.time,
        bin_width,
        bins,
    }
}

/// `sum a b / max(sum a^2, sum b^2)` over matching delays.
pub fn psd_correlation(a: &DelayPsd, b: &DelayPsd) -> f64 {
    let ea: f64 = a.bins.iter().map(|x| x.1 * x.1).sum();
    let eb: f64 = b.bins.iter().map(|x| x.1 * x.1).sum();
    let denom = ea.max(eb);
    if denom == 0.0 {
        return 0.0;
    }
    let (mut i, mut j, mut cross) = (0, 0, 0.0);
    while i < a.bins.len() && j < b.bins.len() {
        let (da, pa) = a.bins[i];
        let (db, pb) = b.bins[j];
        if da == db {
            cross += pa * pb;
            i += 1;
            j += 1;
        } else if da < db {
            i += 1;
        } else {
            j += 1;
        }
    }
    cross / denom
}

/// Stationary lengths measured from every anchor of an evenly spaced
/// sequence of PSDs.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryIntervals {
    pub step: f64,
    pub threshold: f64,
    /// One length per anchor that has at least one successor.
    pub lengths: Vec<f64>,
    /// Whether the correlation never fell below the threshold, so the length
    /// is the remaining span.
    pub censored: Vec<bool>,
}

/// For each anchor `i`, the smallest `j * step` with correlation between
/// PSD `i` and PSD `i + j` below `threshold`.
pub fn stationary_intervals(psds: &[DelayPsd], step: f64, threshold: f64) -> Result<StationaryIntervals> {
    if psds.len() < 2 {
        return Err(GbsmError::domain("stationary intervals need at least two PSDs"));
    }
    if !(step > 0.0) {
        return Err(GbsmError::domain(format!("step must be positive, got {step}")));
    }
    let mut lengths = Vec::with_capacity(psds.len() - 1);
    let mut censored = Vec::with_capacity(psds.len() - 1);
    for i in 0..psds.len() - 1 {
        let hit = (1..psds.len() - i).find(|&j| psd_correlation(&psds[i], &psds[i + j]) < threshold);
        match hit {
            Some(j) => {
                lengths.push(j as f64 * step);
                censored.push(false);
            }
            None => {
                lengths.push((psds.len() - 1 - i) as f64 * step);
                censored.push(true);
            }
        }
    }
    Ok(StationaryIntervals {
        step,
        threshold,
        lengths,
        censored,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StationaryAxis {
    Time,
    Frequency,
}

/// Settings for measuring one stationary extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationarySearch {
    pub axis: StationaryAxis,
    pub step: f64,
    /// Search stops here; the extent is then censored at `max`.
    pub max: f64,
    pub bin_width: f64,
    pub threshold: f64,
}

/// A measured stationary extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryExtent {
    pub length: f64,
    pub censored: bool,
}

/// Distance from `anchor` along the search axis to the first PSD whose
/// correlation with the anchor's falls below the threshold.
///
/// Frequency searches anchor the spread law at the anchor frequency.
pub fn stationary_extent(scn: &Scenario, anchor: ChannelPoint, search: &StationarySearch) -> Result<StationaryExtent> {
    if !(search.step > 0.0 && search.max >= search.step) {
        return Err(GbsmError::domain(format!(
            "stationary search needs 0 < step <= max, got step {} max {}",
            search.step, search.max
        )));
    }
    let anchored;
    let scn = match search.axis {
        StationaryAxis::Frequency => {
            anchored = scn.with_reference_frequency(anchor.freq);
            &anchored
        }
        StationaryAxis::Time => scn,
    };
    let psd_at = |p: ChannelPoint| -> Result<DelayPsd> {
        Ok(delay_psd(&scn.cir_at(p.tx, p.rx, p.freq, p.time, 0)?, search.bin_width))
    };
    let reference = psd_at(anchor)?;
    let steps = (search.max / search.step + 1e-9).floor() as usize;
    for j in 1..=steps {
        let lag = j as f64 * search.step;
        let mut p = anchor;
        match search.axis {
            StationaryAxis::Time => p.time += lag,
            StationaryAxis::Frequency => p.freq += lag,
        }
        if psd_correlation(&reference, &psd_at(p)?) < search.threshold {
            return Ok(StationaryExtent {
                length: lag,
                censored: false,
            });
        }
    }
    Ok(StationaryExtent {
        length: steps as f64 * search.step,
        censored: true,
    })
}

/// Stationary extents at one anchor over independent scenario draws.
pub fn stationary_ensemble(
    params: &ScenarioParams,
    seeds: &[u64],
    anchor: ChannelPoint,
    search: &StationarySearch,
) -> Result<Vec<StationaryExtent>> {
    seeds
        .par_iter()
        .map(|&seed| stationary_extent(&Scenario::new(params.clone(), seed)?, anchor, search))
        .collect()
}

/// Sample median; the mean of the middle pair for even counts.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { 0.5 * (v[m - 1] + v[m]) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::Tap;
    use crate::config::{preset, ScenarioConfig};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn cir(taps: &[(f64, f64)]) -> SubBandCir {
        SubBandCir {
            tx_index: 1,
            rx_index: 1,
            subband_index: 0,
            freq: 3e11,
            time: 0.0,
            taps: taps
                .iter()
                .map(|&(d, p)| Tap {
                    delay: d,
                    amplitude: Complex64::new(p.sqrt(), 0.0),
                })
                .collect(),
        }
    }

    fn psd(bins: &[(f64, f64)]) -> DelayPsd {
        DelayPsd {
            freq: 0.0,
            time: 0.0,
            bin_width: 0.0,
            bins: bins.to_vec(),
        }
    }

    #[test]
    fn binning_sums_power() {
        let c = cir(&[(1.01e-9, 0.2), (1.02e-9, 0.3), (1.2e-9, 0.5)]);
        let p = delay_psd(&c, 0.05e-9);
        assert_eq!(p.bins.len(), 2);
        assert_abs_diff_eq!(p.bins[0].1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.total_power(), 1.0, epsilon = 1e-15);
        let exact = delay_psd(&c, 0.0);
        assert_eq!(exact.bins.len(), 3);
    }

    #[test]
    fn correlation_hand_values() {
        let a = psd(&[(1.0, 1.0), (2.0, 1.0)]);
        let b = psd(&[(2.0, 2.0), (3.0, 1.0)]);
        // cross 2, energies 2 and 5.
        assert_abs_diff_eq!(psd_correlation(&a, &b), 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(psd_correlation(&a, &a), 1.0, epsilon = 1e-15);
        assert_eq!(psd_correlation(&a, &psd(&[(5.0, 1.0)])), 0.0);
    }

    #[test]
    fn interval_edge_cases() {
        let x = psd(&[(1.0, 1.0)]);
        let same = vec![x.clone(); 5];
        let r = stationary_intervals(&same, 0.5, 0.9).unwrap();
        assert_eq!(r.lengths[0], 2.0);
        assert!(r.censored.iter().all(|&c| c));
        let ortho: Vec<DelayPsd> = (0..5).map(|i| psd(&[(i as f64, 1.0)])).collect();
        let r = stationary_intervals(&ortho, 0.5, 0.9).unwrap();
        assert!(r.lengths.iter().all(|&l| l == 0.5));
        assert!(stationary_intervals(&same[..1], 0.5, 0.9).is_err());
    }

    #[test]
    fn median_values() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn static_link_is_time_stationary() {
        let mut cfg = ScenarioConfig::default();
        cfg.motion.speed_mps = 0.0;
        let s = Scenario::from_config(&cfg).unwrap();
        let search = StationarySearch {
            axis: StationaryAxis::Time,
            step: 0.5,
            max: 2.0,
            bin_width: 0.05e-9,
            threshold: 0.9,
        };
        let e = stationary_extent(&s, ChannelPoint::new(1, 1, 0.0, 3e11), &search).unwrap();
        assert!(e.censored);
        assert_eq!(e.length, 2.0);
    }

    #[test]
    fn bandwidth_search_is_deterministic() {
        let s = Scenario::from_config(&preset("fig6").unwrap()).unwrap();
        let search = StationarySearch {
            axis: StationaryAxis::Frequency,
            step: 0.5e9,
            max: 10e9,
            bin_width: 0.05e-9,
            threshold: 0.9,
        };
        let a = ChannelPoint::new(1, 1, 0.0, 300e9);
        let x = stationary_extent(&s, a, &search).unwrap();
        let y = stationary_extent(&s, a, &search).unwrap();
        assert_eq!(x, y);
        assert!(x.length > 0.0 && x.length <= 10e9);
    }

    fn arb_psds() -> impl Strategy<Value = Vec<DelayPsd>> {
        prop::collection::vec(prop::collection::vec((0u8..6, 0.0f64..1.0), 1..5), 2..8).prop_map(|v| {
            v.into_iter()
                .map(|bins| {
                    let mut m: BTreeMap<u8, f64> = BTreeMap::new();
                    for (k, p) in bins {
                        *m.entry(k).or_default() += p + 1e-3;
                    }
                    psd(&m.into_iter().map(|(k, p)| (k as f64, p)).collect::<Vec<_>>())
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn psd_keeps_total_power(taps in prop::collection::vec((0.0f64..1e-7, 0.0f64..1.0), 1..50), bin in -1e-10f64..1e-9) {
            let c = cir(&taps);
            let total: f64 = c.taps.iter().map(|t| t.amplitude.norm_sqr()).sum();
            let p = delay_psd(&c, bin);
            prop_assert!((p.total_power() - total).abs() <= 1e-12 * total.max(1e-300));
        }

        #[test]
        fn correlation_bounded_and_symmetric(v in arb_psds()) {
            let r = psd_correlation(&v[0], &v[1]);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&r));
            prop_assert_eq!(r, psd_correlation(&v[1], &v[0]));
        }

        #[test]
        fn intervals_positive_and_monotone_in_threshold(v in arb_psds(), lo in 0.05f64..0.5, d in 0.0f64..0.45) {
            let a = stationary_intervals(&v, 1.0, lo).unwrap();
            let b = stationary_intervals(&v, 1.0, lo + d).unwrap();
            for (x, y) in a.lengths.iter().zip(&b.lengths) {
                prop_assert!(*x > 0.0 && *y > 0.0);
                prop_assert!(y <= x);
            }
        }
    }
}
