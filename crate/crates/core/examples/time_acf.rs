//! Time autocorrelation of a single cluster: theory, simulation and Monte Carlo.

use thz_gbsm::config::preset;
use thz_gbsm::scenario::{ChannelPoint, Scenario};
use thz_gbsm::stats::correlation::lag_grid;
use thz_gbsm::stats::{acf, Estimator};

fn main() -> thz_gbsm::Result<()> {
    let cfg = preset("fig4")?;
    let scn = Scenario::from_config(&cfg)?;
    let lags = lag_grid(0.1, 0.01);
    for q in [1, 200] {
        let p = ChannelPoint::new(1, q, 0.0, 325e9);
        let th = acf(&scn, p, &lags, Estimator::Theoretical)?;
        let sim = acf(&scn, p, &lags, Estimator::Simulation)?;
        let emp = acf(&scn, p, &lags, Estimator::Empirical { replicas: 100 })?;
        println!("q = {q}");
        for i in 0..lags.len() {
            println!(
                "  {:.2} s  th {:.5}  sim {:.5}  emp {:.5}  arg(th) {:+.3}",
                lags[i],
                th.values[i].norm(),
                sim.values[i].norm(),
                emp.values[i].norm(),
                th.values[i].arg()
            );
        }
    }
    Ok(())
}
