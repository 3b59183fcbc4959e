//! CDF of relative receive azimuths for several mean cluster spreads.

use thz_gbsm::config::{preset, Angle};
use thz_gbsm::run::realization_seeds;
use thz_gbsm::scenario::ScenarioParams;
use thz_gbsm::stats::spread::{ecdf_at, relative_angle_samples};
use thz_gbsm::stats::AngleDim;

fn main() -> thz_gbsm::Result<()> {
    let base = preset("fig7")?;
    let seeds = realization_seeds(&base);
    let grid = [-0.04, -0.02, -0.01, 0.0, 0.01, 0.02, 0.04];
    print!("mu (deg) ");
    for x in grid {
        print!("{x:>8}");
    }
    println!();
    for mu in [0.15, 0.75, 1.4, 2.8] {
        let mut cfg = base.clone();
        cfg.angles.mean_rx_azimuth_deg = Angle::from_degrees(mu);
        let params = ScenarioParams::from_config(&cfg)?;
        let mut s = relative_angle_samples(&params, &seeds, 0, 300e9, AngleDim::RxAzimuth)?;
        s.sort_by(f64::total_cmp);
        print!("{mu:>8} ");
        for x in grid {
            print!("{:>8.3}", ecdf_at(&s, x));
        }
        println!();
    }
    Ok(())
}
