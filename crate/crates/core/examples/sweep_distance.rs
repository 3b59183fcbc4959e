//! Narrowband power at the reference element as the link distance grows.

use thz_gbsm::config::ScenarioConfig;
use thz_gbsm::run::{parse_sweep_axis, sweep_points};
use thz_gbsm::scenario::{ChannelPoint, Scenario};

fn main() -> thz_gbsm::Result<()> {
    let cfg = ScenarioConfig::default();
    let axes = [parse_sweep_axis("los.distance_m=1.0,3.0,10.0")?];
    for (values, point) in sweep_points(&cfg, &axes)? {
        let scn = Scenario::from_config(&point)?;
        let h = scn.coefficient(ChannelPoint::new(1, 1, 0.0, 325e9), 0)?;
        let los = scn.los_delay(1, 1, 0.0)?;
        println!("D = {:<5} |h|^2 = {:.4}  LoS delay {:.3} ns", values[0].to_string(), h.norm_sqr(), los * 1e9);
    }
    Ok(())
}
