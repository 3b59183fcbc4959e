//! Scenario configuration: a TOML tree with human units (GHz, ns, mm,
//! degrees), validation with field paths, and the bundled presets.

use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{GbsmError, Result};
use crate::SPEED_OF_LIGHT;

/// An angle held in radians, written in degrees.
///
/// Values whose degree form does not convert back to the same radians are
/// written as `{ rad = ... }` instead, so emitted configs reload exactly.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Angle(f64);

impl Angle {
    pub fn from_degrees(deg: f64) -> Self {
        Angle(deg.to_radians())
    }

    pub fn from_radians(rad: f64) -> Self {
        Angle(rad)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    pub fn degrees(self) -> f64 {
        self.0.to_degrees()
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} deg", self.degrees())
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let deg = self.0.to_degrees();
        let short = format!("{deg:.12e}").parse::<f64>().unwrap_or(deg);
        if let Some(d) = [short, deg].into_iter().find(|d| d.to_radians() == self.0) {
            s.serialize_f64(d)
        } else {
            let mut m = s.serialize_map(Some(1))?;
            m.serialize_entry("rad", &self.0)?;
            m.end()
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Degrees(f64),
            Radians {
                rad: f64,
            },
        }
        match Repr::deserialize(d) {
            Ok(Repr::Degrees(x)) => Ok(Angle::from_degrees(x)),
            Ok(Repr::Radians { rad }) => Ok(Angle(rad)),
            Err(_) => Err(de::Error::custom("expected an angle in degrees or a table `{ rad = <radians> }`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Infinite-ray model; ensembles redraw angles and phases.
    Theoretical,
    /// Finite equal-area ray model; ensembles redraw phases.
    Simulation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Statistic selectors for the `stats` run mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum StatKind {
    Acf,
    Ccf,
    Fcf,
    Psd,
    StationaryBandwidth,
    StationaryTime,
    AngleCdf,
    RmsDelaySpread,
    Scattering,
}

impl StatKind {
    pub const ALL: [StatKind; 9] = [
        StatKind::Acf,
        StatKind::Ccf,
        StatKind::Fcf,
        StatKind::Psd,
        StatKind::StationaryBandwidth,
        StatKind::StationaryTime,
        StatKind::AngleCdf,
        StatKind::RmsDelaySpread,
        StatKind::Scattering,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatKind::Acf => "acf",
            StatKind::Ccf => "ccf",
            StatKind::Fcf => "fcf",
            StatKind::Psd => "psd",
            StatKind::StationaryBandwidth => "stationary-bandwidth",
            StatKind::StationaryTime => "stationary-time",
            StatKind::AngleCdf => "angle-cdf",
            StatKind::RmsDelaySpread => "rms-delay-spread",
            StatKind::Scattering => "scattering",
        }
    }

    pub fn parse(s: &str) -> Result<StatKind> {
        StatKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GbsmError::Parse(format!("unknown statistic `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub elements: usize,
    /// Element spacing; half a wavelength at 325 GHz when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing_mm: Option<f64>,
    pub elevation_deg: Angle,
    pub azimuth_deg: Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LosConfig {
    pub distance_m: f64,
    pub elevation_deg: Angle,
    pub azimuth_deg: Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MotionConfig {
    pub speed_mps: f64,
    pub elevation_deg: Angle,
    pub azimuth_deg: Angle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandConfig {
    pub start_ghz: f64,
    pub stop_ghz: f64,
    pub subband_width_ghz: f64,
    /// Sub-bands wider than this are rejected.
    pub stationary_safe_width_ghz: f64,
    pub ctf_spacing_mhz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterConfig {
    pub count_sb: usize,
    pub count_mb: usize,
    pub mean_interarrival_sb_ns: f64,
    pub mean_interarrival_mb_ns: f64,
    pub decay_db_per_ns: f64,
    pub shadow_std_db: f64,
    pub rician_k: f64,
    pub elevation_std_deg: Angle,
    /// Pins the Tx-side distance ratio of single-bounce clusters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_tx: Option<f64>,
    /// Mean intra-cluster relative time of arrival. When set, geometric
    /// relative delays of each cluster are rescaled to an exponential draw
    /// with this mean.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toa_mean_ns: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleConfig {
    pub reference_ghz: f64,
    pub mean_tx_elevation_deg: Angle,
    pub mean_tx_azimuth_deg: Angle,
    pub mean_rx_elevation_deg: Angle,
    pub mean_rx_azimuth_deg: Angle,
    pub exponent_tx_elevation: f64,
    pub exponent_tx_azimuth: f64,
    pub exponent_rx_elevation: f64,
    pub exponent_rx_azimuth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceConfig {
    pub material: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub stats: Vec<StatKind>,
    /// 1-based transmit elements.
    pub tx_indices: Vec<usize>,
    /// 1-based receive elements.
    pub rx_indices: Vec<usize>,
    pub times_s: Vec<f64>,
    pub frequencies_ghz: Vec<f64>,
    /// Monte-Carlo replicas per ensemble estimate.
    pub mc: usize,
    /// Independent scenario draws for distribution estimates.
    pub realizations: usize,
    pub acf_max_lag_s: f64,
    pub acf_lag_step_s: f64,
    /// Largest receive-element separation, in elements.
    pub ccf_max_separation: usize,
    pub fcf_max_ghz: f64,
    pub fcf_step_ghz: f64,
    pub psd_bin_ns: f64,
    pub threshold: f64,
    pub stationary_step_ghz: f64,
    pub stationary_max_ghz: f64,
    pub stationary_time_step_s: f64,
    pub stationary_time_max_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub model: ModelKind,
    pub rays_per_sb_cluster: usize,
    pub rays_per_mb_cluster: usize,
    pub tx: ArrayConfig,
    pub rx: ArrayConfig,
    pub los: LosConfig,
    pub motion: MotionConfig,
    pub band: BandConfig,
    pub clusters: ClusterConfig,
    pub angles: AngleConfig,
    pub surface: SurfaceConfig,
    pub analysis: AnalysisConfig,
    pub output: OutputConfig,
}

/// Half a wavelength at 325 GHz, meters.
pub fn default_spacing() -> f64 {
    SPEED_OF_LIGHT / 325e9 / 2.0
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let array = ArrayConfig {
            elements: 8,
            spacing_mm: None,
            elevation_deg: Angle::from_degrees(0.0),
            azimuth_deg: Angle::from_degrees(90.0),
        };
        ScenarioConfig {
            seed: 1,
            model: ModelKind::Simulation,
            rays_per_sb_cluster: 400,
            rays_per_mb_cluster: 400,
            tx: array.clone(),
            rx: array,
            los: LosConfig {
                distance_m: 3.0,
                elevation_deg: Angle::from_degrees(0.0),
                azimuth_deg: Angle::from_degrees(0.0),
            },
            motion: MotionConfig {
                speed_mps: 0.1,
                elevation_deg: Angle::from_degrees(0.0),
                azimuth_deg: Angle::from_degrees(60.0),
            },
            band: BandConfig {
                start_ghz: 300.0,
                stop_ghz: 350.0,
                subband_width_ghz: 0.1,
                stationary_safe_width_ghz: 1.0,
                ctf_spacing_mhz: 10.0,
            },
            clusters: ClusterConfig {
                count_sb: 5,
                count_mb: 3,
                mean_interarrival_sb_ns: 2.73,
                mean_interarrival_mb_ns: 2.33,
                decay_db_per_ns: 3.0,
                shadow_std_db: 3.0,
                rician_k: 2.0,
                elevation_std_deg: Angle::from_degrees(10.0),
                r_tx: None,
                toa_mean_ns: None,
            },
            angles: AngleConfig {
                reference_ghz: 325.0,
                mean_tx_elevation_deg: Angle::from_degrees(1.2),
                mean_tx_azimuth_deg: Angle::from_degrees(1.7),
                mean_rx_elevation_deg: Angle::from_degrees(1.4),
                mean_rx_azimuth_deg: Angle::from_degrees(2.8),
                exponent_tx_elevation: 1.2,
                exponent_tx_azimuth: 1.2,
                exponent_rx_elevation: 1.2,
                exponent_rx_azimuth: 1.2,
            },
            surface: SurfaceConfig {
                material: "fig3".into(),
            },
            analysis: AnalysisConfig {
                stats: vec![StatKind::Acf],
                tx_indices: vec![1],
                rx_indices: vec![1],
                times_s: vec![0.0],
                frequencies_ghz: vec![325.0],
                mc: 200,
                realizations: 100,
                acf_max_lag_s: 0.1,
                acf_lag_step_s: 0.002,
                ccf_max_separation: 10,
                fcf_max_ghz: 2.0,
                fcf_step_ghz: 0.02,
                psd_bin_ns: 0.05,
                threshold: 0.9,
                stationary_step_ghz: 0.1,
                stationary_max_ghz: 100.0,
                stationary_time_step_s: 0.01,
                stationary_time_max_s: 10.0,
            },
            output: OutputConfig {
                format: OutputFormat::Csv,
            },
        }
    }
}

fn bad(path: &str, reason: impl Into<String>) -> GbsmError {
    GbsmError::config(path, reason)
}

fn positive(path: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be a positive finite number, got {v}")))
    }
}

fn non_negative(path: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be >= 0, got {v}")))
    }
}

fn finite(path: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("must be finite, got {v}")))
    }
}

fn elevation(path: &str, a: Angle) -> Result<()> {
    if a.radians().abs() <= std::f64::consts::FRAC_PI_2 {
        Ok(())
    } else {
        Err(bad(path, format!("elevation must lie in [-90, 90] degrees, got {}", a.degrees())))
    }
}

fn is_square(n: usize) -> bool {
    let r = (n as f64).sqrt().round() as usize;
    r * r == n
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seed > i64::MAX as u64 {
            return Err(bad("seed", "must fit in a signed 64-bit integer"));
        }
        for (path, n) in [
            ("rays_per_sb_cluster", self.rays_per_sb_cluster),
            ("rays_per_mb_cluster", self.rays_per_mb_cluster),
        ] {
            if n == 0 {
                return Err(bad(path, "must be >= 1"));
            }
            if self.model == ModelKind::Simulation && !is_square(n) {
                return Err(bad(path, format!("must be a perfect square in simulation mode, got {n}")));
            }
        }
        for (name, a) in [("tx", &self.tx), ("rx", &self.rx)] {
            if a.elements == 0 {
                return Err(bad(&format!("{name}.elements"), "must be >= 1"));
            }
            if let Some(s) = a.spacing_mm {
                positive(&format!("{name}.spacing_mm"), s)?;
            }
            elevation(&format!("{name}.elevation_deg"), a.elevation_deg)?;
            finite(&format!("{name}.azimuth_deg"), a.azimuth_deg.radians())?;
        }
        positive("los.distance_m", self.los.distance_m)?;
        elevation("los.elevation_deg", self.los.elevation_deg)?;
        finite("los.azimuth_deg", self.los.azimuth_deg.radians())?;
        non_negative("motion.speed_mps", self.motion.speed_mps)?;
        finite("motion.elevation_deg", self.motion.elevation_deg.radians())?;
        finite("motion.azimuth_deg", self.motion.azimuth_deg.radians())?;

        let b = &self.band;
        positive("band.start_ghz", b.start_ghz)?;
        positive("band.stop_ghz", b.stop_ghz)?;
        if b.stop_ghz <= b.start_ghz {
            return Err(bad("band.stop_ghz", "must exceed band.start_ghz"));
        }
        positive("band.subband_width_ghz", b.subband_width_ghz)?;
        positive("band.stationary_safe_width_ghz", b.stationary_safe_width_ghz)?;
        if b.subband_width_ghz > b.stationary_safe_width_ghz {
            return Err(bad(
                "band.subband_width_ghz",
                format!(
                    "{} GHz exceeds the stationary-safe width {} GHz",
                    b.subband_width_ghz, b.stationary_safe_width_ghz
                ),
            ));
        }
        positive("band.ctf_spacing_mhz", b.ctf_spacing_mhz)?;

        let c = &self.clusters;
        positive("clusters.mean_interarrival_sb_ns", c.mean_interarrival_sb_ns)?;
        positive("clusters.mean_interarrival_mb_ns", c.mean_interarrival_mb_ns)?;
        non_negative("clusters.decay_db_per_ns", c.decay_db_per_ns)?;
        non_negative("clusters.shadow_std_db", c.shadow_std_db)?;
        non_negative("clusters.rician_k", c.rician_k)?;
        non_negative("clusters.elevation_std_deg", c.elevation_std_deg.radians())?;
        if let Some(r) = c.r_tx {
            if !(r > 0.0 && r < 1.0) {
                return Err(bad("clusters.r_tx", format!("must lie in (0, 1), got {r}")));
            }
        }
        if let Some(t) = c.toa_mean_ns {
            positive("clusters.toa_mean_ns", t)?;
        }

        let a = &self.angles;
        positive("angles.reference_ghz", a.reference_ghz)?;
        for (path, v) in [
            ("angles.mean_tx_elevation_deg", a.mean_tx_elevation_deg),
            ("angles.mean_tx_azimuth_deg", a.mean_tx_azimuth_deg),
            ("angles.mean_rx_elevation_deg", a.mean_rx_elevation_deg),
            ("angles.mean_rx_azimuth_deg", a.mean_rx_azimuth_deg),
        ] {
            non_negative(path, v.radians())?;
            if v.degrees() > 30.0 {
                return Err(bad(path, "intra-cluster spreads above 30 degrees are outside the model"));
            }
        }
        for (path, v) in [
            ("angles.exponent_tx_elevation", a.exponent_tx_elevation),
            ("angles.exponent_tx_azimuth", a.exponent_tx_azimuth),
            ("angles.exponent_rx_elevation", a.exponent_rx_elevation),
            ("angles.exponent_rx_azimuth", a.exponent_rx_azimuth),
        ] {
            finite(path, v)?;
        }
        if crate::scattering::material(&self.surface.material).is_err() {
            return Err(bad(
                "surface.material",
                format!(
                    "unknown material `{}` (known: {})",
                    self.surface.material,
                    crate::scattering::material_names().join(", ")
                ),
            ));
        }

        let an = &self.analysis;
        for (path, list, n) in [
            ("analysis.tx_indices", &an.tx_indices, self.tx.elements),
            ("analysis.rx_indices", &an.rx_indices, self.rx.elements),
        ] {
            if list.is_empty() {
                return Err(bad(path, "must not be empty"));
            }
            if let Some(i) = list.iter().find(|&&i| i == 0 || i > n) {
                return Err(bad(path, format!("element {i} outside 1..={n}")));
            }
        }
        if an.times_s.is_empty() {
            return Err(bad("analysis.times_s", "must not be empty"));
        }
        for t in &an.times_s {
            non_negative("analysis.times_s", *t)?;
        }
        if an.frequencies_ghz.is_empty() {
            return Err(bad("analysis.frequencies_ghz", "must not be empty"));
        }
        for f in &an.frequencies_ghz {
            positive("analysis.frequencies_ghz", *f)?;
        }
        if an.mc == 0 {
            return Err(bad("analysis.mc", "must be >= 1"));
        }
        if an.realizations == 0 {
            return Err(bad("analysis.realizations", "must be >= 1"));
        }
        non_negative("analysis.acf_max_lag_s", an.acf_max_lag_s)?;
        positive("analysis.acf_lag_step_s", an.acf_lag_step_s)?;
        non_negative("analysis.fcf_max_ghz", an.fcf_max_ghz)?;
        positive("analysis.fcf_step_ghz", an.fcf_step_ghz)?;
        finite("analysis.psd_bin_ns", an.psd_bin_ns)?;
        if !(an.threshold > 0.0 && an.threshold < 1.0) {
            return Err(bad("analysis.threshold", format!("must lie in (0, 1), got {}", an.threshold)));
        }
        positive("analysis.stationary_step_ghz", an.stationary_step_ghz)?;
        positive("analysis.stationary_max_ghz", an.stationary_max_ghz)?;
        positive("analysis.stationary_time_step_s", an.stationary_time_step_s)?;
        positive("analysis.stationary_time_max_s", an.stationary_time_max_s)?;
        Ok(())
    }

    pub fn tx_spacing(&self) -> f64 {
        self.tx.spacing_mm.map_or_else(default_spacing, |s| s * 1e-3)
    }

    pub fn rx_spacing(&self) -> f64 {
        self.rx.spacing_mm.map_or_else(default_spacing, |s| s * 1e-3)
    }

    /// Canonical TOML text. The config hash is taken over this string.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    /// Replaces the value at a dotted key path, e.g. `angles.mean_rx_azimuth_deg`,
    /// and revalidates.
    pub fn with_value(&self, path: &str, value: toml::Value) -> Result<ScenarioConfig> {
        let mut tree = toml::Value::try_from(self).map_err(|e| GbsmError::Parse(e.to_string()))?;
        let mut node = &mut tree;
        let parts: Vec<&str> = path.split('.').collect();
        for (i, part) in parts.iter().enumerate() {
            let table = node
                .as_table_mut()
                .ok_or_else(|| bad(path, format!("`{}` is not a table", parts[..i].join("."))))?;
            if i + 1 == parts.len() {
                table.insert((*part).to_string(), value.clone());
                break;
            }
            node = table
                .get_mut(*part)
                .ok_or_else(|| bad(path, format!("no section `{part}`")))?;
        }
        let cfg: ScenarioConfig = tree
            .try_into()
            .map_err(|e: toml::de::Error| bad(path, e.message().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses and validates a config from TOML text. Keys left out take their
/// default values.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let located = |src: &str, e: toml::de::Error| {
        let path = e.span().map(|s| locate_key(src, s.start)).unwrap_or_default();
        GbsmError::config(path, e.message().to_string())
    };
    let user: toml::Table = toml::from_str(text).map_err(|e| located(text, e))?;
    let mut tree = match toml::Value::try_from(ScenarioConfig::default()) {
        Ok(toml::Value::Table(t)) => t,
        _ => unreachable!("default config serializes to a table"),
    };
    merge_tables(&mut tree, user);
    // Re-rendered so that errors still point at a key.
    let merged = toml::to_string(&tree).map_err(|e| GbsmError::Parse(e.to_string()))?;
    let cfg: ScenarioConfig = toml::from_str(&merged).map_err(|e| located(&merged, e))?;
    cfg.validate()?;
    Ok(cfg)
}

fn merge_tables(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge_tables(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

// Dotted key path of the line containing byte `offset`, for error messages.
fn locate_key(text: &str, offset: usize) -> String {
    let mut section = String::new();
    let mut key = String::new();
    let mut pos = 0;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            section = trimmed.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = trimmed.split_once('=') {
            key = k.trim().to_string();
        }
        pos += line.len() + 1;
        if pos > offset {
            break;
        }
    }
    match (section.is_empty(), key.is_empty()) {
        (true, _) => key,
        (false, true) => section,
        (false, false) => format!("{section}.{key}"),
    }
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

/// Config text with each value annotated as a reference-scenario value or a
/// modeling default.
pub fn emit_config(cfg: &ScenarioConfig, preset: Option<&str>) -> String {
    let reference = preset.map(reference_keys).unwrap_or_default();
    let mut section = String::new();
    let mut out = String::new();
    for line in cfg.to_toml().lines() {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            section = trimmed.trim_matches(|c| c == '[' || c == ']').to_string();
            out.push_str(line);
        } else if let Some((k, _)) = trimmed.split_once(" = ") {
            let full = if section.is_empty() {
                k.to_string()
            } else {
                format!("{section}.{k}")
            };
            let tag = if reference.contains(&full.as_str()) {
                "reference scenario value"
            } else {
                "modeling default"
            };
            out.push_str(&format!("{line} # {tag}"));
        } else {
            out.push_str(line);
        }
        out.push('\n');
    }
    out
}

pub const PRESETS: [(&str, &str); 9] = [
    ("desk", "small 8x8 link with the default cluster mix"),
    ("fig3", "rough-surface scattering lobe widths at 300 and 350 GHz"),
    ("fig4", "time ACF of one single-bounce cluster, 256x256 arrays at 325 GHz"),
    ("fig5", "spatial CCF of one single-bounce cluster at 300 and 350 GHz"),
    ("fcf", "frequency correlation of the NLoS channel at 300, 325 and 350 GHz"),
    ("fig6", "frequency stationary bandwidth distribution at 300, 325 and 350 GHz"),
    ("fig7", "CDF of relative receive azimuths within a cluster at 300 GHz"),
    ("fig8", "cluster-level angle spread on a rough plaster wall"),
    ("fig9", "RMS delay spread of a 0.15 m short-range link"),
];

// Keys pinned by the reference scenarios rather than chosen as defaults.
fn reference_keys(preset: &str) -> Vec<&'static str> {
    let common = [
        "band.start_ghz",
        "band.stop_ghz",
        "band.subband_width_ghz",
        "rays_per_sb_cluster",
        "rays_per_mb_cluster",
    ];
    let motion = ["motion.speed_mps", "motion.elevation_deg", "motion.azimuth_deg"];
    let intra = [
        "angles.mean_tx_elevation_deg",
        "angles.mean_tx_azimuth_deg",
        "angles.mean_rx_elevation_deg",
        "angles.mean_rx_azimuth_deg",
    ];
    let exps = [
        "angles.exponent_tx_elevation",
        "angles.exponent_tx_azimuth",
        "angles.exponent_rx_elevation",
        "angles.exponent_rx_azimuth",
    ];
    let mut keys: Vec<&'static str> = Vec::new();
    match preset {
        "fig3" => keys.extend(["surface.material", "analysis.frequencies_ghz"]),
        "fig4" => {
            keys.extend(common);
            keys.extend(motion);
            keys.extend([
                "tx.elements",
                "rx.elements",
                "los.distance_m",
                "angles.reference_ghz",
                "angles.mean_rx_elevation_deg",
                "angles.mean_rx_azimuth_deg",
                "clusters.r_tx",
                "analysis.times_s",
                "analysis.rx_indices",
                "analysis.frequencies_ghz",
            ]);
        }
        "fig5" => {
            keys.extend(common);
            keys.extend(motion);
            keys.extend([
                "tx.elements",
                "rx.elements",
                "rx.elevation_deg",
                "rx.azimuth_deg",
                "los.distance_m",
                "angles.mean_rx_elevation_deg",
                "angles.mean_rx_azimuth_deg",
                "clusters.r_tx",
                "analysis.times_s",
                "analysis.frequencies_ghz",
            ]);
        }
        "fcf" | "fig6" => {
            keys.extend(common);
            keys.extend(intra);
            keys.extend(exps);
            keys.extend([
                "tx.elements",
                "rx.elements",
                "los.distance_m",
                "motion.speed_mps",
                "clusters.toa_mean_ns",
                "analysis.frequencies_ghz",
            ]);
            if preset == "fig6" {
                keys.extend([
                    "motion.elevation_deg",
                    "motion.azimuth_deg",
                    "analysis.threshold",
                    "clusters.mean_interarrival_sb_ns",
                    "clusters.mean_interarrival_mb_ns",
                ]);
            }
        }
        "fig7" => keys.extend([
            "los.distance_m",
            "motion.speed_mps",
            "angles.mean_rx_azimuth_deg",
            "analysis.frequencies_ghz",
        ]),
        "fig8" => keys.extend([
            "motion.speed_mps",
            "surface.material",
            "clusters.r_tx",
            "angles.mean_rx_azimuth_deg",
            "analysis.frequencies_ghz",
        ]),
        "fig9" => keys.extend([
            "los.distance_m",
            "motion.speed_mps",
            "clusters.mean_interarrival_sb_ns",
            "clusters.mean_interarrival_mb_ns",
            "analysis.frequencies_ghz",
        ]),
        _ => {}
    }
    keys
}

/// A bundled scenario.
pub fn preset(name: &str) -> Result<ScenarioConfig> {
    let mut c = ScenarioConfig::default();
    let big = |c: &mut ScenarioConfig| {
        c.tx.elements = 256;
        c.rx.elements = 256;
    };
    let single_cluster = |c: &mut ScenarioConfig| {
        c.clusters.count_sb = 1;
        c.clusters.count_mb = 0;
        c.clusters.rician_k = 0.0;
        c.clusters.r_tx = Some(0.4);
    };
    match name {
        "desk" => {}
        "fig3" => {
            c.analysis.stats = vec![StatKind::Scattering];
            c.analysis.frequencies_ghz = vec![300.0, 350.0];
        }
        "fig4" => {
            big(&mut c);
            single_cluster(&mut c);
            c.analysis.stats = vec![StatKind::Acf];
            c.analysis.times_s = vec![0.0, 5.0, 10.0];
            c.analysis.rx_indices = vec![1, 200];
        }
        "fig5" => {
            big(&mut c);
            single_cluster(&mut c);
            c.rx.azimuth_deg = Angle::from_degrees(60.0);
            c.rx.elevation_deg = Angle::from_degrees(45.0);
            c.analysis.stats = vec![StatKind::Ccf];
            c.analysis.times_s = vec![0.0, 10.0];
            c.analysis.frequencies_ghz = vec![300.0, 350.0];
        }
        "fcf" | "fig6" => {
            c.clusters.rician_k = 0.0;
            c.clusters.toa_mean_ns = Some(0.3);
            c.analysis.frequencies_ghz = vec![300.0, 325.0, 350.0];
            if name == "fcf" {
                c.motion.speed_mps = 0.0;
                c.analysis.stats = vec![StatKind::Fcf];
            } else {
                c.analysis.stats = vec![StatKind::StationaryBandwidth];
            }
        }
        "fig7" => {
            c.los.distance_m = 2.7;
            c.motion.speed_mps = 0.0;
            c.angles.reference_ghz = 300.0;
            c.angles.mean_rx_azimuth_deg = Angle::from_degrees(1.4);
            c.analysis.frequencies_ghz = vec![300.0];
            c.analysis.stats = vec![StatKind::AngleCdf];
        }
        "fig8" => {
            c.motion.speed_mps = 0.0;
            c.surface.material = "plaster1".into();
            c.clusters.r_tx = Some(0.4);
            c.angles.reference_ghz = 300.0;
            c.angles.mean_rx_azimuth_deg = Angle::from_degrees(0.15);
            c.analysis.frequencies_ghz = vec![300.0];
            c.analysis.stats = vec![StatKind::AngleCdf];
        }
        "fig9" => {
            c.los.distance_m = 0.15;
            c.motion.speed_mps = 0.0;
            c.clusters.mean_interarrival_sb_ns = 0.08;
            c.clusters.mean_interarrival_mb_ns = 0.07;
            c.angles.reference_ghz = 300.0;
            c.analysis.frequencies_ghz = vec![300.0];
            c.analysis.stats = vec![StatKind::RmsDelaySpread];
        }
        other => {
            return Err(GbsmError::config(
                "preset",
                format!(
                    "unknown preset `{other}` (known: {})",
                    PRESETS.iter().map(|p| p.0).collect::<Vec<_>>().join(", ")
                ),
            ))
        }
    }
    c.validate()?;
    Ok(c)
}
