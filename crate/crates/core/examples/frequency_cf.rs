//! Frequency correlation of the NLoS channel at three anchor frequencies.

use thz_gbsm::config::preset;
use thz_gbsm::scenario::{ChannelPoint, Scenario};
use thz_gbsm::stats::correlation::lag_grid;
use thz_gbsm::stats::{fcf, Estimator};

fn main() -> thz_gbsm::Result<()> {
    let cfg = preset("fcf")?;
    let scn = Scenario::from_config(&cfg)?;
    let lags = lag_grid(2e9, 0.25e9);
    for f0 in [300e9, 325e9, 350e9] {
        let p = ChannelPoint::new(1, 1, 0.0, f0);
        let th = fcf(&scn, p, &lags, Estimator::Theoretical)?;
        let sim = fcf(&scn, p, &lags, Estimator::Simulation)?;
        println!("f0 = {} GHz", f0 / 1e9);
        for i in 0..lags.len() {
            println!("  {:.2} GHz  th {:.4}  sim {:.4}", lags[i] / 1e9, th.values[i].norm(), sim.values[i].norm());
        }
        for w in th.warnings.iter().take(1) {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
