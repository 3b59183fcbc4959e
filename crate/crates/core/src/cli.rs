//! Command-line front end: argument parsing, config resolution and artifact
//! writing. Failures are reported as one JSON object on stderr.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::config::{emit_config, load_config, preset, OutputFormat, ScenarioConfig, StatKind, PRESETS};
use crate::error::{GbsmError, Result};
use crate::output::{header_line, Cell, Table};
use crate::run;
use crate::stats::FitOptions;

#[derive(Debug, Parser)]
#[command(name = "thz-gbsm", version, about = "THz UM-MIMO geometry-based channel simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Scenario file (TOML).
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in scenario; see `presets`.
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Worker threads; falls back to THZ_GBSM_THREADS.
    #[arg(long, value_name = "N", env = "THZ_GBSM_THREADS")]
    pub threads: Option<usize>,
    /// Monte-Carlo replicas for empirical estimates.
    #[arg(long, value_name = "N")]
    pub mc: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct StatFlags {
    /// Statistic to compute; repeatable. Defaults to `analysis.stats`.
    #[arg(long = "stat", value_name = "KIND", value_parser = parse_stat)]
    pub stat: Vec<StatKind>,
    #[arg(long)]
    pub acf: bool,
    #[arg(long)]
    pub ccf: bool,
    #[arg(long)]
    pub fcf: bool,
    #[arg(long)]
    pub psd: bool,
    #[arg(long)]
    pub stationary_bandwidth: bool,
    #[arg(long)]
    pub stationary_time: bool,
    #[arg(long)]
    pub angle_cdf: bool,
    #[arg(long)]
    pub rms_delay_spread: bool,
    #[arg(long)]
    pub scattering: bool,
}

impl StatFlags {
    fn kinds(&self, cfg: &ScenarioConfig) -> Vec<StatKind> {
        let mut k = self.stat.clone();
        let flags = [
            (self.acf, StatKind::Acf),
            (self.ccf, StatKind::Ccf),
            (self.fcf, StatKind::Fcf),
            (self.psd, StatKind::Psd),
            (self.stationary_bandwidth, StatKind::StationaryBandwidth),
            (self.stationary_time, StatKind::StationaryTime),
            (self.angle_cdf, StatKind::AngleCdf),
            (self.rms_delay_spread, StatKind::RmsDelaySpread),
            (self.scattering, StatKind::Scattering),
        ];
        k.extend(flags.into_iter().filter(|f| f.0).map(|f| f.1));
        if k.is_empty() {
            k = cfg.analysis.stats.clone();
        }
        k
    }
}

fn parse_stat(s: &str) -> std::result::Result<StatKind, String> {
    StatKind::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw a scenario and write its clusters, CIR taps and CTF samples.
    Generate {
        #[command(flatten)]
        common: Common,
    },
    /// Compute statistics of a scenario.
    Stats {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        stats: StatFlags,
    },
    /// Repeat `stats` over a grid of config values.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        stats: StatFlags,
        /// `KEY=V1,V2,...` with a dotted config key; repeat for a grid.
        #[arg(long = "param", value_name = "KEY=VALUES", required = true)]
        params: Vec<String>,
    },
    /// Fit config parameters to a measured curve.
    Fit {
        #[command(flatten)]
        common: Common,
        /// Target curve: `x,y` rows, `#` comments allowed.
        #[arg(long, value_name = "PATH")]
        target: PathBuf,
        /// acf, ccf, fcf, angle-cdf or rms-delay-spread.
        #[arg(long, value_name = "KIND", value_parser = parse_stat)]
        stat: StatKind,
        /// `KEY:LOWER:UPPER`; repeatable.
        #[arg(long = "param", value_name = "KEY:LO:HI", required = true)]
        params: Vec<String>,
        #[arg(long, default_value_t = 3)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        max_evaluations: usize,
    },
    /// List built-in scenarios or print one as an annotated config.
    Presets {
        /// Preset to print.
        #[arg(long, value_name = "NAME")]
        emit: Option<String>,
    },
}

/// Parses `args` (program name first), runs the verb and returns the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            report(&GbsmError::Parse(first.to_string()));
            return 2;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            report(&e);
            1
        }
    }
}

fn report(e: &GbsmError) {
    let mut body = json!({ "kind": e.kind(), "message": e.to_string() });
    if let GbsmError::Config { path, .. } = e {
        body["path"] = json!(path);
    }
    eprintln!("{}", json!({ "error": body }));
}

/// Resolves the scenario: `--config`, else `--preset`, else the default,
/// with command-line overrides applied.
pub fn resolve_config(common: &Common) -> Result<(ScenarioConfig, Option<String>)> {
    let (mut cfg, name) = match (&common.config, &common.preset) {
        (Some(path), _) => (load_config(path)?, None),
        (None, Some(name)) => (preset(name)?, Some(name.clone())),
        (None, None) => (ScenarioConfig::default(), None),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(mc) = common.mc {
        cfg.analysis.mc = mc;
    }
    if let Some(f) = common.format {
        cfg.output.format = f.into();
    }
    cfg.validate()?;
    Ok((cfg, name))
}

fn init_threads(threads: Option<usize>) -> Result<()> {
    match threads {
        Some(0) => Err(GbsmError::Parse("--threads must be at least 1".into())),
        Some(n) => {
            // A second call in the same process keeps the first pool.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
        None => Ok(()),
    }
}

fn write_all(dir: &Path, cfg: &ScenarioConfig, preset_name: Option<&str>, tables: &[Table]) -> Result<String> {
    fs::create_dir_all(dir)?;
    let header = header_line(cfg.seed, &cfg.sha256());
    fs::write(
        dir.join("config.toml"),
        format!("{header}\n{}", emit_config(cfg, preset_name)),
    )?;
    for t in tables {
        t.write(dir, cfg.output.format, &header)?;
    }
    Ok(header)
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common } => {
            init_threads(common.threads)?;
            let (cfg, name) = resolve_config(&common)?;
            let tables = run::generate(&cfg)?;
            write_all(&common.out, &cfg, name.as_deref(), &tables)?;
        }
        Command::Stats { common, stats } => {
            init_threads(common.threads)?;
            let (cfg, name) = resolve_config(&common)?;
            let tables = run::stats(&cfg, &stats.kinds(&cfg))?;
            write_all(&common.out, &cfg, name.as_deref(), &tables)?;
        }
        Command::Sweep { common, stats, params } => {
            init_threads(common.threads)?;
            let (cfg, name) = resolve_config(&common)?;
            let axes = params
                .iter()
                .map(|p| run::parse_sweep_axis(p))
                .collect::<Result<Vec<_>>>()?;
            let points = run::sweep_points(&cfg, &axes)?;
            let mut cols = vec!["point", "dir", "seed", "config_sha256"];
            cols.extend(axes.iter().map(|a| a.0.as_str()));
            let mut manifest = Table::new("manifest", &cols);
            for (i, (values, point_cfg)) in points.iter().enumerate() {
                let dir = format!("point-{i:03}");
                let tables = run::stats(point_cfg, &stats.kinds(point_cfg))?;
                write_all(&common.out.join(&dir), point_cfg, name.as_deref(), &tables)?;
                let mut row: Vec<Cell> = vec![i.into(), dir.into(), point_cfg.seed.into(), point_cfg.sha256().into()];
                row.extend(values.iter().map(|v| match v {
                    toml::Value::String(s) => Cell::Text(s.clone()),
                    other => Cell::Text(other.to_string()),
                }));
                manifest.push(row);
            }
            write_all(&common.out, &cfg, name.as_deref(), &[manifest])?;
        }
        Command::Fit {
            common,
            target,
            stat,
            params,
            restarts,
            max_evaluations,
        } => {
            init_threads(common.threads)?;
            let (cfg, name) = resolve_config(&common)?;
            let text = fs::read_to_string(&target)?;
            let curve = run::parse_target(&text)?;
            let params = params
                .iter()
                .map(|p| run::FitParam::parse(p))
                .collect::<Result<Vec<_>>>()?;
            let options = FitOptions {
                restarts,
                max_evaluations,
                seed: cfg.seed,
                ..FitOptions::default()
            };
            let (_, tables) = run::fit(&cfg, stat, &params, &curve, &options)?;
            write_all(&common.out, &cfg, name.as_deref(), &tables)?;
        }
        Command::Presets { emit } => {
            let text = presets_text(emit.as_deref())?;
            print!("{text}");
        }
    }
    Ok(())
}

/// The text printed by `presets`: the listing, or one annotated config.
pub fn presets_text(emit: Option<&str>) -> Result<String> {
    match emit {
        Some(name) => {
            let cfg = preset(name)?;
            Ok(format!(
                "{}\n{}",
                header_line(cfg.seed, &cfg.sha256()),
                emit_config(&cfg, Some(name))
            ))
        }
        None => {
            let cfg = ScenarioConfig::default();
            let mut out = header_line(cfg.seed, &cfg.sha256());
            out.push('\n');
            for (name, desc) in PRESETS {
                out.push_str(&format!("{name}\t{desc}\n"));
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Command {
        Cli::try_parse_from(std::iter::once("thz-gbsm").chain(args.iter().copied())).unwrap().command
    }

    #[test]
    fn stat_flags_and_default() {
        let Command::Stats { common, stats } = parse(&["stats", "--acf", "--stat", "psd"]) else {
            panic!()
        };
        let (cfg, _) = resolve_config(&common).unwrap();
        assert_eq!(stats.kinds(&cfg), vec![StatKind::Psd, StatKind::Acf]);
        assert_eq!(StatFlags::default().kinds(&cfg), cfg.analysis.stats);
    }

    #[test]
    fn overrides_apply() {
        let Command::Generate { common } = parse(&["generate", "--preset", "fig7", "--seed", "9", "--mc", "5", "--format", "json"]) else {
            panic!()
        };
        let (cfg, name) = resolve_config(&common).unwrap();
        assert_eq!(name.as_deref(), Some("fig7"));
        assert_eq!((cfg.seed, cfg.analysis.mc, cfg.output.format), (9, 5, OutputFormat::Json));
    }

    #[test]
    fn config_and_preset_conflict() {
        assert!(Cli::try_parse_from(["thz-gbsm", "generate", "--config", "a.toml", "--preset", "fig4"]).is_err());
    }

    #[test]
    fn listing_names_every_preset() {
        let text = presets_text(None).unwrap();
        assert!(text.starts_with("# thz-gbsm v"));
        for (name, _) in PRESETS {
            assert!(text.contains(name));
        }
        assert!(presets_text(Some("nope")).is_err());
    }

    #[test]
    fn zero_threads_rejected() {
        assert!(init_threads(Some(0)).is_err());
    }
}
