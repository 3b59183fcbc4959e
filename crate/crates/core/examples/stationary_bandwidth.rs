//! Distribution of the frequency stationary bandwidth over scenario draws.

use thz_gbsm::config::preset;
use thz_gbsm::run::stationary_ensembles;
use thz_gbsm::stats::psd::median;
use thz_gbsm::stats::StationaryAxis;

fn main() -> thz_gbsm::Result<()> {
    let mut cfg = preset("fig6")?;
    cfg.analysis.realizations = 30;
    for (anchor, ext) in stationary_ensembles(&cfg, StationaryAxis::Frequency)? {
        let mut b: Vec<f64> = ext.iter().map(|e| e.length / 1e9).collect();
        b.sort_by(f64::total_cmp);
        println!(
            "{} GHz: median {:.2} GHz, 10% {:.2}, 90% {:.2}, censored {}",
            anchor.freq / 1e9,
            median(&b).unwrap_or(f64::NAN),
            b[b.len() / 10],
            b[b.len() * 9 / 10],
            ext.iter().filter(|e| e.censored).count()
        );
    }
    Ok(())
}
