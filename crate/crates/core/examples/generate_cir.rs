//! One scenario draw: clusters, a sub-band CIR and a stretch of CTF.

use thz_gbsm::config::ScenarioConfig;
use thz_gbsm::scenario::Scenario;

fn main() -> thz_gbsm::Result<()> {
    let cfg = ScenarioConfig::default();
    let scn = Scenario::from_config(&cfg)?;
    for c in &scn.clusters {
        println!(
            "{:<14} delay {:>7.3} ns  power {:.4}",
            c.kind.name(),
            c.delay * 1e9,
            c.power
        );
    }
    let i = scn.params.band.index_of(325e9).expect("325 GHz lies in the band");
    let cir = scn.cir(1, 1, i, 0.0, 0)?;
    println!("sub-band {i}: {} taps, total power {:.6}", cir.taps.len(), cir.total_power());
    let ctf = scn.ctf(1, 1, &[i, i + 1], 0.0, 10e6, 0)?;
    for s in ctf.iter().step_by(5) {
        println!("{:.3} GHz  |H| = {:.4}", s.freq / 1e9, s.value.norm());
    }
    Ok(())
}
