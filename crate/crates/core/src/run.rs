//! Run modes behind the command line: each turns a validated config into
//! named tables.

use rayon::prelude::*;

use crate::config::{ScenarioConfig, StatKind};
use crate::error::{GbsmError, Result};
use crate::output::{Cell, Table};
use crate::scattering::{fit_gaussian_mainlobe, material, plane_offset_profile, FIT_INCIDENCE, FIT_SAMPLES};
use crate::scenario::{ChannelPoint, Scenario, ScenarioParams};
use crate::stats::correlation::{lag_grid, CorrelationResult};
use crate::stats::psd::{median, stationary_ensemble, StationaryExtent};
use crate::stats::spread::{empirical_cdf, ecdf_at, ks_gaussian, psd_delay_spread, relative_angle_samples};
use crate::stats::{
    acf, ccf, delay_psd, fcf, fit_parameter, AngleDim, Bound, Estimator, FitOptions, FitResult, StationaryAxis,
    StationarySearch,
};

/// Reference points: every combination of the configured elements, times
/// and frequencies.
pub fn reference_points(cfg: &ScenarioConfig) -> Vec<ChannelPoint> {
    let a = &cfg.analysis;
    let mut out = Vec::new();
    for &p in &a.tx_indices {
        for &q in &a.rx_indices {
            for &t in &a.times_s {
                for &f in &a.frequencies_ghz {
                    out.push(ChannelPoint::new(p, q, t, f * 1e9));
                }
            }
        }
    }
    out
}

/// Seeds of the independent scenario draws: `seed, seed + 1, ...`.
pub fn realization_seeds(cfg: &ScenarioConfig) -> Vec<u64> {
    (0..cfg.analysis.realizations as u64)
        .map(|i| cfg.seed.wrapping_add(i))
        .collect()
}

/// CIR taps and stitched CTF samples for every configured element pair and
/// time, over the sub-bands holding the configured frequencies.
pub fn generate(cfg: &ScenarioConfig) -> Result<Vec<Table>> {
    let scn = Scenario::from_config(cfg)?;
    let plan = &scn.params.band;
    let mut subbands: Vec<usize> = cfg
        .analysis
        .frequencies_ghz
        .iter()
        .map(|&f| {
            plan.index_of(f * 1e9).ok_or_else(|| {
                GbsmError::config("analysis.frequencies_ghz", format!("{f} GHz lies outside the band"))
            })
        })
        .collect::<Result<_>>()?;
    subbands.sort_unstable();
    subbands.dedup();
    let a = &cfg.analysis;
    let mut jobs = Vec::new();
    for &p in &a.tx_indices {
        for &q in &a.rx_indices {
            for &t in &a.times_s {
                jobs.push((p, q, t));
            }
        }
    }
    let step = cfg.band.ctf_spacing_mhz * 1e6;
    let results = jobs
        .par_iter()
        .map(|&(p, q, t)| {
            let cirs = subbands
                .iter()
                .map(|&i| scn.cir(p, q, i, t, 0))
                .collect::<Result<Vec<_>>>()?;
            let ctf = scn.ctf(p, q, &subbands, t, step, 0)?;
            Ok((cirs, ctf))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cir_t = Table::new(
        "cir",
        &["tx", "rx", "time_s", "subband", "center_hz", "tap", "delay_s", "re", "im"],
    );
    let mut ctf_t = Table::new("ctf", &["tx", "rx", "time_s", "freq_hz", "re", "im"]);
    for ((p, q, t), (cirs, ctf)) in jobs.iter().zip(results) {
        for cir in cirs {
            for (k, tap) in cir.taps.iter().enumerate() {
                cir_t.push(vec![
                    (*p).into(),
                    (*q).into(),
                    (*t).into(),
                    cir.subband_index.into(),
                    cir.freq.into(),
                    k.into(),
                    tap.delay.into(),
                    tap.amplitude.re.into(),
                    tap.amplitude.im.into(),
                ]);
            }
        }
        for s in ctf {
            ctf_t.push(vec![
                (*p).into(),
                (*q).into(),
                (*t).into(),
                s.freq.into(),
                s.value.re.into(),
                s.value.im.into(),
            ]);
        }
    }
    let mut clusters = Table::new(
        "clusters",
        &[
            "kind",
            "index",
            "delay_s",
            "power",
            "tx_elevation_rad",
            "tx_azimuth_rad",
            "rx_elevation_rad",
            "rx_azimuth_rad",
            "r_tx",
            "r_rx",
            "sigma_tx_elevation_rad",
            "sigma_tx_azimuth_rad",
            "sigma_rx_elevation_rad",
            "sigma_rx_azimuth_rad",
            "delay_scale",
        ],
    );
    for c in &scn.clusters {
        let s = c.spreads.as_array();
        clusters.push(vec![
            c.kind.name().into(),
            c.index.into(),
            c.delay.into(),
            c.power.into(),
            c.tx_elevation.into(),
            c.tx_azimuth.into(),
            c.rx_elevation.into(),
            c.rx_azimuth.into(),
            c.r_tx.into(),
            c.r_rx.into(),
            s[0].into(),
            s[1].into(),
            s[2].into(),
            s[3].into(),
            c.delay_scale.into(),
        ]);
    }
    Ok(vec![clusters, cir_t, ctf_t])
}

/// The tables of every requested statistic.
pub fn stats(cfg: &ScenarioConfig, kinds: &[StatKind]) -> Result<Vec<Table>> {
    let mut kinds = kinds.to_vec();
    kinds.sort();
    kinds.dedup();
    let mut out = Vec::new();
    for kind in kinds {
        out.extend(match kind {
            StatKind::Acf | StatKind::Ccf | StatKind::Fcf => correlation_tables(cfg, kind)?,
            StatKind::Psd => vec![psd_table(cfg)?],
            StatKind::StationaryBandwidth => stationary_tables(cfg, StationaryAxis::Frequency)?,
            StatKind::StationaryTime => stationary_tables(cfg, StationaryAxis::Time)?,
            StatKind::AngleCdf => angle_cdf_tables(cfg)?,
            StatKind::RmsDelaySpread => vec![rms_delay_spread_table(cfg)?],
            StatKind::Scattering => scattering_tables(cfg)?,
        });
    }
    Ok(out)
}

fn estimators(cfg: &ScenarioConfig) -> [Estimator; 3] {
    [
        Estimator::Theoretical,
        Estimator::Simulation,
        Estimator::Empirical {
            replicas: cfg.analysis.mc.max(2),
        },
    ]
}

/// One correlation curve per reference point and estimator.
pub fn correlation_curves(cfg: &ScenarioConfig, kind: StatKind) -> Result<Vec<CorrelationResult>> {
    let scn = Scenario::from_config(cfg)?;
    let a = &cfg.analysis;
    let mut out = Vec::new();
    for point in reference_points(cfg) {
        for est in estimators(cfg) {
            out.push(match kind {
                StatKind::Acf => acf(&scn, point, &lag_grid(a.acf_max_lag_s, a.acf_lag_step_s), est)?,
                StatKind::Ccf => {
                    let room = cfg.rx.elements - point.rx;
                    let seps: Vec<usize> = (0..=a.ccf_max_separation.min(room)).collect();
                    ccf(&scn, point, &seps, est)?
                }
                StatKind::Fcf => fcf(&scn, point, &lag_grid(a.fcf_max_ghz * 1e9, a.fcf_step_ghz * 1e9), est)?,
                _ => unreachable!("not a correlation statistic"),
            });
        }
    }
    Ok(out)
}

fn correlation_tables(cfg: &ScenarioConfig, kind: StatKind) -> Result<Vec<Table>> {
    let curves = correlation_curves(cfg, kind)?;
    let lag_col = match kind {
        StatKind::Acf => "lag_s",
        StatKind::Ccf => "lag_elements",
        _ => "lag_hz",
    };
    let mut t = Table::new(
        kind.name(),
        &[
            "estimator", "tx", "rx", "time_s", "freq_hz", lag_col, "re", "im", "abs", "raw_re", "raw_im", "stderr",
        ],
    );
    let mut w = Table::new(format!("{}-warnings", kind.name()), &["estimator", "tx", "rx", "time_s", "freq_hz", "warning"]);
    for c in &curves {
        let r = c.reference;
        for i in 0..c.lags.len() {
            let se: Cell = match &c.stderr {
                Some(s) => s[i].into(),
                None => "".into(),
            };
            t.push(vec![
                c.estimator.name().into(),
                r.tx.into(),
                r.rx.into(),
                r.time.into(),
                r.freq.into(),
                c.lags[i].into(),
                c.values[i].re.into(),
                c.values[i].im.into(),
                c.values[i].norm().into(),
                c.raw[i].re.into(),
                c.raw[i].im.into(),
                se,
            ]);
        }
        for msg in &c.warnings {
            w.push(vec![
                c.estimator.name().into(),
                r.tx.into(),
                r.rx.into(),
                r.time.into(),
                r.freq.into(),
                msg.clone().into(),
            ]);
        }
    }
    let mut out = vec![t];
    if !w.rows.is_empty() {
        out.push(w);
    }
    Ok(out)
}

fn psd_table(cfg: &ScenarioConfig) -> Result<Table> {
    let scn = Scenario::from_config(cfg)?;
    let bin = cfg.analysis.psd_bin_ns * 1e-9;
    let mut t = Table::new("psd", &["tx", "rx", "time_s", "freq_hz", "delay_s", "power"]);
    for p in reference_points(cfg) {
        let psd = delay_psd(&scn.cir_at(p.tx, p.rx, p.freq, p.time, 0)?, bin);
        for (d, w) in psd.bins {
            t.push(vec![p.tx.into(), p.rx.into(), p.time.into(), p.freq.into(), d.into(), w.into()]);
        }
    }
    Ok(t)
}

/// Stationary extents over the configured realizations, one ensemble per
/// anchor. Frequency anchors are the configured frequencies at the first
/// configured time; time anchors are the configured times at the first
/// configured frequency.
pub fn stationary_ensembles(cfg: &ScenarioConfig, axis: StationaryAxis) -> Result<Vec<(ChannelPoint, Vec<StationaryExtent>)>> {
    let params = ScenarioParams::from_config(cfg)?;
    let a = &cfg.analysis;
    let (p, q) = (a.tx_indices[0], a.rx_indices[0]);
    let (anchors, search): (Vec<ChannelPoint>, _) = match axis {
        StationaryAxis::Frequency => (
            a.frequencies_ghz
                .iter()
                .map(|&f| ChannelPoint::new(p, q, a.times_s[0], f * 1e9))
                .collect(),
            StationarySearch {
                axis,
                step: a.stationary_step_ghz * 1e9,
                max: a.stationary_max_ghz * 1e9,
                bin_width: a.psd_bin_ns * 1e-9,
                threshold: a.threshold,
            },
        ),
        StationaryAxis::Time => (
            a.times_s
                .iter()
                .map(|&t| ChannelPoint::new(p, q, t, a.frequencies_ghz[0] * 1e9))
                .collect(),
            StationarySearch {
                axis,
                step: a.stationary_time_step_s,
                max: a.stationary_time_max_s,
                bin_width: a.psd_bin_ns * 1e-9,
                threshold: a.threshold,
            },
        ),
    };
    let seeds = realization_seeds(cfg);
    anchors
        .into_iter()
        .map(|anchor| Ok((anchor, stationary_ensemble(&params, &seeds, anchor, &search)?)))
        .collect()
}

fn stationary_tables(cfg: &ScenarioConfig, axis: StationaryAxis) -> Result<Vec<Table>> {
    let (name, anchor_col, len_col) = match axis {
        StationaryAxis::Frequency => ("stationary-bandwidth", "anchor_hz", "bandwidth_hz"),
        StationaryAxis::Time => ("stationary-time", "anchor_s", "interval_s"),
    };
    let seeds = realization_seeds(cfg);
    let mut t = Table::new(name, &[anchor_col, "seed", len_col, "censored", "cdf"]);
    let mut s = Table::new(format!("{name}-summary"), &[anchor_col, "median", "censored", "realizations"]);
    for (anchor, ext) in stationary_ensembles(cfg, axis)? {
        let x = match axis {
            StationaryAxis::Frequency => anchor.freq,
            StationaryAxis::Time => anchor.time,
        };
        let mut order: Vec<usize> = (0..ext.len()).collect();
        order.sort_by(|&i, &j| ext[i].length.total_cmp(&ext[j].length).then(i.cmp(&j)));
        for (rank, &i) in order.iter().enumerate() {
            t.push(vec![
                x.into(),
                seeds[i].into(),
                ext[i].length.into(),
                ext[i].censored.into(),
                ((rank + 1) as f64 / ext.len() as f64).into(),
            ]);
        }
        let lengths: Vec<f64> = ext.iter().map(|e| e.length).collect();
        s.push(vec![
            x.into(),
            median(&lengths).unwrap_or(f64::NAN).into(),
            ext.iter().filter(|e| e.censored).count().into(),
            ext.len().into(),
        ]);
    }
    Ok(vec![t, s])
}

const CDF_LEVELS: usize = 1000;

fn angle_cdf_tables(cfg: &ScenarioConfig) -> Result<Vec<Table>> {
    let params = ScenarioParams::from_config(cfg)?;
    let seeds = realization_seeds(cfg);
    let dims = [AngleDim::TxElevation, AngleDim::TxAzimuth, AngleDim::RxElevation, AngleDim::RxAzimuth];
    let mut t = Table::new("angle-cdf", &["freq_hz", "dim", "cdf", "angle_rad"]);
    let mut ks = Table::new("angle-cdf-ks", &["freq_hz", "dim", "mean_ks", "max_ks"]);
    for &f in &cfg.analysis.frequencies_ghz {
        let f = f * 1e9;
        for dim in dims {
            let samples = relative_angle_samples(&params, &seeds, 0, f, dim)?;
            let cdf = empirical_cdf(&samples);
            for i in 0..=CDF_LEVELS {
                let idx = (i * (cdf.len() - 1)) / CDF_LEVELS;
                t.push(vec![f.into(), dim.name().into(), cdf[idx].1.into(), cdf[idx].0.into()]);
            }
            // Per-draw distance to the Gaussian of the drawn spread.
            let per = seeds
                .par_iter()
                .map(|&seed| {
                    let s = Scenario::new(params.clone(), seed)?;
                    let set = s.rayset(0, f, 0)?;
                    let sigma = set.spreads.as_array()[dim.index()];
                    if sigma <= 0.0 {
                        return Ok(None);
                    }
                    let x: Vec<f64> = set.rays.iter().map(|r| r.rel.as_array()[dim.index()]).collect();
                    Ok(Some(ks_gaussian(&x, sigma)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let vals: Vec<f64> = per.into_iter().flatten().collect();
            if !vals.is_empty() {
                ks.push(vec![
                    f.into(),
                    dim.name().into(),
                    (vals.iter().sum::<f64>() / vals.len() as f64).into(),
                    vals.iter().cloned().fold(0.0, f64::max).into(),
                ]);
            }
        }
    }
    Ok(vec![t, ks])
}

/// RMS delay spread of each realization at the first configured point, per
/// configured frequency.
pub fn rms_delay_spreads(cfg: &ScenarioConfig, freq: f64) -> Result<Vec<f64>> {
    let params = ScenarioParams::from_config(cfg)?;
    let a = &cfg.analysis;
    let (p, q, t) = (a.tx_indices[0], a.rx_indices[0], a.times_s[0]);
    let bin = a.psd_bin_ns * 1e-9;
    realization_seeds(cfg)
        .par_iter()
        .map(|&seed| {
            let s = Scenario::new(params.clone(), seed)?;
            psd_delay_spread(&delay_psd(&s.cir_at(p, q, freq, t, 0)?, bin))
        })
        .collect()
}

fn rms_delay_spread_table(cfg: &ScenarioConfig) -> Result<Table> {
    let seeds = realization_seeds(cfg);
    let mut t = Table::new("rms-delay-spread", &["freq_hz", "seed", "rms_delay_spread_s", "cdf"]);
    for &f in &cfg.analysis.frequencies_ghz {
        let v = rms_delay_spreads(cfg, f * 1e9)?;
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&i, &j| v[i].total_cmp(&v[j]).then(i.cmp(&j)));
        for (rank, &i) in order.iter().enumerate() {
            t.push(vec![
                (f * 1e9).into(),
                seeds[i].into(),
                v[i].into(),
                ((rank + 1) as f64 / v.len() as f64).into(),
            ]);
        }
    }
    Ok(t)
}

fn scattering_tables(cfg: &ScenarioConfig) -> Result<Vec<Table>> {
    let surface = material(&cfg.surface.material)?;
    let mut profile = Table::new("scattering", &["freq_hz", "incident_rad", "plane_offset_rad", "coefficient"]);
    let mut fit = Table::new("scattering-fit", &["freq_hz", "material", "sigma_rad", "sigma_deg", "status"]);
    for &f in &cfg.analysis.frequencies_ghz {
        let f = f * 1e9;
        let prof = plane_offset_profile(&surface, FIT_INCIDENCE, f, FIT_SAMPLES)?;
        // A diffuse profile has no main lobe; report it instead of aborting.
        let (sigma, status) = match fit_gaussian_mainlobe(&prof) {
            Ok(s) => (s, "ok".to_string()),
            Err(GbsmError::Fit(msg)) => (f64::NAN, msg),
            Err(e) => return Err(e),
        };
        for (x, y) in prof {
            profile.push(vec![f.into(), FIT_INCIDENCE.into(), x.into(), y.into()]);
        }
        fit.push(vec![
            f.into(),
            cfg.surface.material.clone().into(),
            sigma.into(),
            sigma.to_degrees().into(),
            status.into(),
        ]);
    }
    Ok(vec![profile, fit])
}

/// A free parameter for fitting: a dotted config key and its search range,
/// in config units.
#[derive(Debug, Clone, PartialEq)]
pub struct FitParam {
    pub key: String,
    pub bound: Bound,
}

impl FitParam {
    /// Parses `key:lower:upper`.
    pub fn parse(s: &str) -> Result<FitParam> {
        let parts: Vec<&str> = s.rsplitn(3, ':').collect();
        if parts.len() != 3 {
            return Err(GbsmError::Parse(format!("expected key:lower:upper, got `{s}`")));
        }
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| GbsmError::Parse(format!("bad bound `{x}` in `{s}`: {e}")))
        };
        Ok(FitParam {
            key: parts[2].trim().to_string(),
            bound: Bound::new(num(parts[1])?, num(parts[0])?)?,
        })
    }
}

/// Reads `x,y` pairs, skipping `#` comments, blank lines and a header row.
pub fn parse_target(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split([',', ';', '\t', ' ']).filter(|c| !c.is_empty()).collect();
        let nums: Option<Vec<f64>> = cols.iter().map(|c| c.parse::<f64>().ok()).collect();
        match nums {
            Some(v) if v.len() >= 2 => out.push((v[0], v[1])),
            None if out.is_empty() => continue,
            _ => return Err(GbsmError::Parse(format!("target line {}: expected two numbers", n + 1))),
        }
    }
    if out.is_empty() {
        return Err(GbsmError::Fit("target curve is empty".into()));
    }
    Ok(out)
}

/// The model curve of `kind` at the abscissae `xs`.
///
/// `acf`, `ccf` and `fcf` give the simulation-model correlation magnitude at
/// lags in seconds, elements or hertz. `angle-cdf` gives the CDF of receive
/// azimuths in radians and `rms-delay-spread` the CDF of delay spreads in
/// seconds, both pooled over the configured realizations.
pub fn model_curve(cfg: &ScenarioConfig, kind: StatKind, xs: &[f64]) -> Result<Vec<f64>> {
    let a = &cfg.analysis;
    let point = ChannelPoint::new(a.tx_indices[0], a.rx_indices[0], a.times_s[0], a.frequencies_ghz[0] * 1e9);
    match kind {
        StatKind::Acf | StatKind::Ccf | StatKind::Fcf => {
            let scn = Scenario::from_config(cfg)?;
            let r = match kind {
                StatKind::Acf => acf(&scn, point, xs, Estimator::Simulation)?,
                StatKind::Fcf => fcf(&scn, point, xs, Estimator::Simulation)?,
                _ => {
                    let seps = xs.iter().map(|x| x.round().max(0.0) as usize).collect::<Vec<_>>();
                    ccf(&scn, point, &seps, Estimator::Simulation)?
                }
            };
            Ok(r.magnitudes())
        }
        StatKind::AngleCdf => {
            let params = ScenarioParams::from_config(cfg)?;
            let mut s = relative_angle_samples(&params, &realization_seeds(cfg), 0, point.freq, AngleDim::RxAzimuth)?;
            s.sort_by(f64::total_cmp);
            Ok(xs.iter().map(|&x| ecdf_at(&s, x)).collect())
        }
        StatKind::RmsDelaySpread => {
            let mut s = rms_delay_spreads(cfg, point.freq)?;
            s.sort_by(f64::total_cmp);
            Ok(xs.iter().map(|&x| ecdf_at(&s, x)).collect())
        }
        other => Err(GbsmError::Fit(format!("statistic `{}` cannot be fitted", other.name()))),
    }
}

/// Fits `params` so that the model curve of `kind` matches `target`.
pub fn fit(
    cfg: &ScenarioConfig,
    kind: StatKind,
    params: &[FitParam],
    target: &[(f64, f64)],
    options: &FitOptions,
) -> Result<(FitResult, Vec<Table>)> {
    let xs: Vec<f64> = target.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = target.iter().map(|p| p.1).collect();
    let apply = |values: &[f64]| -> Result<ScenarioConfig> {
        let mut c = cfg.clone();
        for (p, &v) in params.iter().zip(values) {
            c = c.with_value(&p.key, toml::Value::Float(v))?;
        }
        Ok(c)
    };
    // Reject unknown keys before searching.
    apply(&params.iter().map(|p| p.bound.lower).collect::<Vec<_>>())?;
    let bounds: Vec<Bound> = params.iter().map(|p| p.bound).collect();
    let result = fit_parameter(|v| model_curve(&apply(v)?, kind, &xs), &ys, &bounds, options)?;

    let mut report = Table::new("fit", &["param", "value", "lower", "upper"]);
    for (p, v) in params.iter().zip(&result.params) {
        report.push(vec![p.key.clone().into(), (*v).into(), p.bound.lower.into(), p.bound.upper.into()]);
    }
    let mut summary = Table::new("fit-summary", &["statistic", "mse", "evaluations", "converged"]);
    summary.push(vec![
        kind.name().into(),
        result.mse.into(),
        result.evaluations.into(),
        result.converged.into(),
    ]);
    let fitted = model_curve(&apply(&result.params)?, kind, &xs)?;
    let mut curve = Table::new("fit-curve", &["x", "target", "model"]);
    for ((x, y), m) in xs.iter().zip(&ys).zip(fitted) {
        curve.push(vec![(*x).into(), (*y).into(), m.into()]);
    }
    Ok((result, vec![report, summary, curve]))
}

/// Parses `key=v1,v2,...` into a key and TOML values. Values that are not
/// TOML literals are taken as strings.
pub fn parse_sweep_axis(s: &str) -> Result<(String, Vec<toml::Value>)> {
    let (key, values) = s
        .split_once('=')
        .ok_or_else(|| GbsmError::Parse(format!("expected key=v1,v2,..., got `{s}`")))?;
    let values: Vec<toml::Value> = values
        .split(',')
        .map(|v| {
            let v = v.trim();
            toml::from_str::<toml::Table>(&format!("v = {v}"))
                .ok()
                .and_then(|mut t| t.remove("v"))
                .unwrap_or_else(|| toml::Value::String(v.to_string()))
        })
        .collect();
    if key.trim().is_empty() || values.is_empty() {
        return Err(GbsmError::Parse(format!("empty sweep axis `{s}`")));
    }
    Ok((key.trim().to_string(), values))
}

/// Every combination of the sweep axes, first axis slowest.
pub fn sweep_points(cfg: &ScenarioConfig, axes: &[(String, Vec<toml::Value>)]) -> Result<Vec<(Vec<toml::Value>, ScenarioConfig)>> {
    let mut points = vec![(Vec::new(), cfg.clone())];
    for (key, values) in axes {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for (vals, c) in &points {
            for v in values {
                let mut vv = vals.clone();
                vv.push(v.clone());
                next.push((vv, c.with_value(key, v.clone())?));
            }
        }
        points = next;
    }
    Ok(points)
}
